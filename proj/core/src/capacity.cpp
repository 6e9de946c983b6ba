#include "pplab/capacity.hpp"

#include <cmath>

#include "pplab/lebesgue.hpp"

namespace pplab {

namespace {

// nodes whose value and all axis-neighbor values are finite (so a flux
// contour through the mask boundary has data on both sides)
Mask eroded_finite_mask(const ScalarField& f) {
  const GridDomain& g = f.grid();
  Mask m(g);
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!f.finite(id) || !g.in_ball(id)) continue;
    auto mi = g.multi_index(id);
    bool ok = true;
    for (int a = 0; a < g.dim() && ok; ++a) {
      for (int s = -1; s <= 1 && ok; s += 2) {
        auto t = mi;
        t[a] += s;
        if (!g.in_box(t) || !f.finite(g.flat_index(t))) ok = false;
      }
    }
    if (ok) m.set(id, true);
  }
  return m;
}

}  // namespace

CapacityEstimate cap_bt(const Mask& E, const GridDomain& g, const CapacityOptions& opts) {
  CapacityEstimate est;
  est.resolution = g.n_per_axis();
  if (E.empty()) return est;

  EnvelopeOptions eopts;
  eopts.tol = opts.tol;
  eopts.method = opts.method;
  EnvelopeResult env = relative_extremal(E, g, eopts);
  est.residual = env.residual;
  est.converged = env.converged;
  if (!env.converged) return est;

  Mask ball = full_ball(g);

  if (g.k() == 1) {
    // flux route: sees the full measure regardless of kink resolution.
    // The contour stays one ring inside the rim so both edge endpoints carry
    // solved values.
    MassResult raw = ddc_mass(env.u, interior_mask(g));
    est.value_raw = raw.flux_value;
    est.value = raw.flux_value;
    if (opts.smooth) {
      auto mol = mollify(env.u, UnityKernel::make(g, KernelKind::smooth_radial, 2 * g.h()));
      Mask zone = eroded_finite_mask(mol.field);
      MassResult sm = ddc_mass(mol.field, zone);
      est.value = sm.flux_value;
    }
  } else {
    MaResult raw = ma_mass(env.u, ball);
    est.value_raw = raw.value;
    est.value = raw.value;
    est.clipped_mass = raw.clipped_mass;
    if (opts.smooth) {
      auto mol = mollify(env.u, UnityKernel::make(g, KernelKind::smooth_radial, 2 * g.h()));
      Mask zone(g);
      for (Index id = 0; id < g.num_nodes(); ++id)
        if (mol.field.finite(id)) zone.set(id, true);
      MaResult sm = ma_mass(mol.field, zone);
      est.value = sm.value;
      est.clipped_mass = sm.clipped_mass;
    }
  }

  // mass localization: fraction of MA mass off the 3h-dilation of E
  {
    Mask near = dilate(E, 3 * g.h());
    double inside;
    if (g.k() == 1) {
      inside = ddc_mass(env.u, near).flux_value;
    } else {
      inside = ma_mass(env.u, near).value;
    }
    double total = (g.k() == 1) ? est.value_raw : est.value_raw;
    est.mass_outside_E = total > 0 ? std::max(0.0, 1.0 - inside / total) : 0.0;
  }
  return est;
}

DecayFit cap_decay_fit(const std::vector<std::pair<int, double>>& caps) {
  DecayFit fit;
  std::vector<std::pair<double, double>> pts;
  for (auto& [n, c] : caps) {
    if (c > 0)
      pts.emplace_back(double(n), std::log(c));
    else
      ++fit.dropped;
  }
  if (pts.size() < 3)
    throw GridError("cap_decay_fit: need at least 3 positive capacity values");
  fit.used = static_cast<int>(pts.size());
  double sx = 0, sy = 0;
  for (auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  double mx = sx / pts.size(), my = sy / pts.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = (syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace pplab
