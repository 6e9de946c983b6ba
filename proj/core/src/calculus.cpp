#include "pplab/calculus.hpp"

#include <cmath>

#include "pplab/parallel.hpp"

namespace pplab {

HermitianField::HermitianField(const GridDomain& g)
    : grid_(&g), a11_(g.num_nodes(), 0.0), ok_(g.num_nodes(), 0) {
  if (g.k() == 2) {
    a22_.assign(g.num_nodes(), 0.0);
    re12_.assign(g.num_nodes(), 0.0);
    im12_.assign(g.num_nodes(), 0.0);
  }
}

void HermitianField::set(Index id, double a11, double a22, std::complex<double> a12) {
  a11_[id] = a11;
  if (grid_->k() == 2) {
    a22_[id] = a22;
    re12_[id] = a12.real();
    im12_[id] = a12.imag();
  }
  ok_[id] = 1;
}

void HermitianField::set_undefined(Index id) { ok_[id] = 0; }

bool HermitianField::positive(Index id, double tol) const {
  if (grid_->k() == 1) return a11_[id] >= -tol;
  return trace(id) >= -tol && det(id) >= -tol;
}

namespace stencil {

namespace {

inline bool usable(const ScalarField& f, const GridDomain& g, std::array<int, 4> m, int axis,
                   int off) {
  m[axis] += off;
  if (!g.in_box(m)) return false;
  Index id = g.flat_index(m);
  return g.in_ball(id) && f.finite(id);
}

inline double val(const ScalarField& f, const GridDomain& g, std::array<int, 4> m, int axis,
                  int off) {
  m[axis] += off;
  return f[g.flat_index(m)];
}

}  // namespace

std::optional<double> d1(const ScalarField& f, std::array<int, 4> m, int axis) {
  const GridDomain& g = f.grid();
  if (!g.in_box(m)) return std::nullopt;
  if (!usable(f, g, m, axis, 0)) return std::nullopt;
  const double h = g.h();
  const bool up = usable(f, g, m, axis, +1);
  const bool dn = usable(f, g, m, axis, -1);
  if (up && dn) return (val(f, g, m, axis, +1) - val(f, g, m, axis, -1)) / (2 * h);
  if (up && usable(f, g, m, axis, +2))
    return (-3 * val(f, g, m, axis, 0) + 4 * val(f, g, m, axis, +1) - val(f, g, m, axis, +2)) /
           (2 * h);
  if (dn && usable(f, g, m, axis, -2))
    return (3 * val(f, g, m, axis, 0) - 4 * val(f, g, m, axis, -1) + val(f, g, m, axis, -2)) /
           (2 * h);
  return std::nullopt;
}

std::optional<double> d2(const ScalarField& f, std::array<int, 4> m, int axis) {
  const GridDomain& g = f.grid();
  if (!g.in_box(m)) return std::nullopt;
  if (!usable(f, g, m, axis, 0)) return std::nullopt;
  const double h2 = g.h() * g.h();
  const bool up = usable(f, g, m, axis, +1);
  const bool dn = usable(f, g, m, axis, -1);
  if (up && dn)
    return (val(f, g, m, axis, +1) - 2 * val(f, g, m, axis, 0) + val(f, g, m, axis, -1)) / h2;
  if (up && usable(f, g, m, axis, +2) && usable(f, g, m, axis, +3))
    return (2 * val(f, g, m, axis, 0) - 5 * val(f, g, m, axis, +1) + 4 * val(f, g, m, axis, +2) -
            val(f, g, m, axis, +3)) /
           h2;
  if (dn && usable(f, g, m, axis, -2) && usable(f, g, m, axis, -3))
    return (2 * val(f, g, m, axis, 0) - 5 * val(f, g, m, axis, -1) + 4 * val(f, g, m, axis, -2) -
            val(f, g, m, axis, -3)) /
           h2;
  return std::nullopt;
}

std::optional<double> d2_mixed(const ScalarField& f, std::array<int, 4> m, int a, int b) {
  const GridDomain& g = f.grid();
  if (!g.in_box(m)) return std::nullopt;
  const double h = g.h();
  auto inner = [&](int off_a) -> std::optional<double> {
    auto mm = m;
    mm[a] += off_a;
    return d1(f, mm, b);
  };
  // centered outer difference when both sides give an inner derivative
  auto up = inner(+1), dn = inner(-1);
  if (up && dn) return (*up - *dn) / (2 * h);
  auto c0 = inner(0);
  if (!c0) return std::nullopt;
  if (up) {
    auto up2 = inner(+2);
    if (up2) return (-3 * *c0 + 4 * *up - *up2) / (2 * h);
  }
  if (dn) {
    auto dn2 = inner(-2);
    if (dn2) return (3 * *c0 - 4 * *dn + *dn2) / (2 * h);
  }
  return std::nullopt;
}

}  // namespace stencil

GradientField wirtinger_gradient(const ScalarField& f) {
  const GridDomain& g = f.grid();
  const int k = g.k();
  GradientField out;
  out.grid = &g;
  out.d.assign(g.num_nodes() * k, {0.0, 0.0});
  out.ok.assign(g.num_nodes(), 0);

  parallel_for(g.num_nodes(), [&](Index b, Index e) {
    for (Index id = b; id < e; ++id) {
      if (!g.in_ball(id) || !f.finite(id)) continue;
      auto m = g.multi_index(id);
      bool all = true;
      for (int j = 0; j < k && all; ++j) {
        auto dx = stencil::d1(f, m, 2 * j);
        auto dy = stencil::d1(f, m, 2 * j + 1);
        if (!dx || !dy) {
          all = false;
          break;
        }
        out.d[id * k + j] = 0.5 * std::complex<double>(*dx, -*dy);
      }
      out.ok[id] = all ? 1 : 0;
    }
  });
  return out;
}

HermitianField gradient_form(const ScalarField& f) {
  const GridDomain& g = f.grid();
  GradientField grad = wirtinger_gradient(f);
  HermitianField out(g);
  const int k = g.k();
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!grad.defined(id)) continue;
    if (k == 1) {
      out.set(id, std::norm(grad.at(id, 0)), 0.0, {0.0, 0.0});
    } else {
      auto d1 = grad.at(id, 0), d2 = grad.at(id, 1);
      out.set(id, std::norm(d1), std::norm(d2), d1 * std::conj(d2));
    }
  }
  return out;
}

namespace {

// A_ij = d^2 f / dz_i dzbar_j via real second differences:
//   A_jj = (f_{x_j x_j} + f_{y_j y_j}) / 4
//   A_12 = [(f_{x1 x2} + f_{y1 y2}) + i (f_{x1 y2} - f_{y1 x2})] / 4
bool hessian_at(const ScalarField& f, const GridDomain& g, Index id, double& a11, double& a22,
                std::complex<double>& a12) {
  auto m = g.multi_index(id);
  auto dxx = stencil::d2(f, m, 0);
  auto dyy = stencil::d2(f, m, 1);
  if (!dxx || !dyy) return false;
  a11 = 0.25 * (*dxx + *dyy);
  if (g.k() == 1) {
    a22 = 0.0;
    a12 = {0.0, 0.0};
    return true;
  }
  auto duu = stencil::d2(f, m, 2);
  auto dvv = stencil::d2(f, m, 3);
  auto dxu = stencil::d2_mixed(f, m, 0, 2);
  auto dyv = stencil::d2_mixed(f, m, 1, 3);
  auto dxv = stencil::d2_mixed(f, m, 0, 3);
  auto dyu = stencil::d2_mixed(f, m, 1, 2);
  // Hermitian symmetrization: average the (1,2) and conj (2,1) entries
  auto dux = stencil::d2_mixed(f, m, 2, 0);
  auto dvy = stencil::d2_mixed(f, m, 3, 1);
  auto dvx = stencil::d2_mixed(f, m, 3, 0);
  auto duy = stencil::d2_mixed(f, m, 2, 1);
  if (!duu || !dvv || !dxu || !dyv || !dxv || !dyu || !dux || !dvy || !dvx || !duy) return false;
  a22 = 0.25 * (*duu + *dvv);
  double re = 0.25 * 0.5 * ((*dxu + *dux) + (*dyv + *dvy));
  double im = 0.25 * 0.5 * ((*dxv + *dvx) - (*dyu + *duy));
  a12 = {re, im};
  return true;
}

}  // namespace

HermitianField complex_hessian(const ScalarField& f) {
  const GridDomain& g = f.grid();
  HermitianField out(g);
  parallel_for(g.num_nodes(), [&](Index b, Index e) {
    for (Index id = b; id < e; ++id) {
      if (!g.in_ball(id) || !f.finite(id)) continue;
      double a11, a22;
      std::complex<double> a12;
      if (hessian_at(f, g, id, a11, a22, a12)) out.set(id, a11, a22, a12);
    }
  });
  return out;
}

MassResult ddc_mass(const ScalarField& f, const Mask& m) {
  const GridDomain& g = f.grid();
  const int k = g.k();
  double cell = 1.0;
  for (int a = 0; a < g.dim(); ++a) cell *= g.h();
  const double c = (k == 1) ? norms::k1_trace_density : norms::k2_trace_density;

  MassResult out;
  double sum = 0.0;
  Index defined = 0;
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!m.contains(id)) continue;
    if (!f.finite(id)) {
      ++out.skipped;
      continue;
    }
    double a11, a22;
    std::complex<double> a12;
    if (!hessian_at(f, g, id, a11, a22, a12)) {
      ++out.skipped;
      continue;
    }
    sum += (k == 1) ? a11 : a11 + a22;
    ++defined;
  }
  if (defined == 0 && m.count() > 0 && out.skipped == m.count())
    throw GridError("ddc_mass: Hessian undefined on the whole mask");
  out.value = sum * cell * c;

  // discrete Gauss route: sum (f_out - f_in) over axis edges leaving the mask
  double flux = 0.0;
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!m.contains(id)) continue;
    auto mi = g.multi_index(id);
    if (!f.finite(id)) {
      ++out.flux_dropped;
      continue;
    }
    for (int a = 0; a < g.dim(); ++a) {
      for (int s = -1; s <= 1; s += 2) {
        auto mm = mi;
        mm[a] += s;
        if (!g.in_box(mm)) {
          ++out.flux_dropped;
          continue;
        }
        Index nid = g.flat_index(mm);
        if (m.contains(nid)) continue;
        if (!f.finite(nid)) {
          ++out.flux_dropped;
          continue;
        }
        flux += f[nid] - f[id];
      }
    }
  }
  double hpow = 1.0;
  for (int a = 0; a < g.dim() - 2; ++a) hpow *= g.h();
  const double fc = (k == 1) ? 1.0 / (2 * norms::pi) : 1.0 / (2 * norms::pi * norms::pi);
  out.flux_value = flux * hpow * fc;
  return out;
}

MaResult ma_mass(const ScalarField& f, const Mask& m) {
  const GridDomain& g = f.grid();
  MaResult out;
  if (g.k() == 1) {
    MassResult r = ddc_mass(f, m);
    out.value = r.value;
    out.skipped = r.skipped;
    return out;
  }
  double cell = 1.0;
  for (int a = 0; a < g.dim(); ++a) cell *= g.h();
  double sum = 0.0, clipped = 0.0;
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!m.contains(id)) continue;
    if (!f.finite(id)) {
      ++out.skipped;
      continue;
    }
    double a11, a22;
    std::complex<double> a12;
    if (!hessian_at(f, g, id, a11, a22, a12)) {
      ++out.skipped;
      continue;
    }
    double det = a11 * a22 - std::norm(a12);
    if (det < 0) {
      clipped -= det;
      det = 0;
    }
    sum += det;
  }
  out.value = sum * cell * norms::k2_det_density;
  out.clipped_mass = clipped * cell * norms::k2_det_density;
  return out;
}

DominationReport domination_check(const ScalarField& phi, const ScalarField& psi, const Mask& m,
                                  double tol) {
  const GridDomain& g = phi.grid();
  const int k = g.k();
  GradientField grad = wirtinger_gradient(phi);
  DominationReport rep;
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!m.contains(id)) continue;
    double h11, h22;
    std::complex<double> h12;
    if (!grad.defined(id) || !psi.finite(id) || !hessian_at(psi, g, id, h11, h22, h12)) {
      ++rep.skipped;
      continue;
    }
    ++rep.checked;
    if (k == 1) {
      double d = h11 - std::norm(grad.at(id, 0));
      if (d < -tol) {
        ++rep.violations;
        rep.worst = std::max(rep.worst, -d);
      }
    } else {
      auto g1 = grad.at(id, 0), g2 = grad.at(id, 1);
      double d11 = h11 - std::norm(g1);
      double d22 = h22 - std::norm(g2);
      std::complex<double> d12 = h12 - g1 * std::conj(g2);
      double tr = d11 + d22;
      double det = d11 * d22 - std::norm(d12);
      if (tr < -tol || det < -tol) {
        ++rep.violations;
        rep.worst = std::max(rep.worst, std::max(-tr, -det));
      }
    }
  }
  rep.violating_fraction = rep.checked ? double(rep.violations) / double(rep.checked) : 0.0;
  return rep;
}

}  // namespace pplab
