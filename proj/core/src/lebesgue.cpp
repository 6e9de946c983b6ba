#include "pplab/lebesgue.hpp"

#include <cmath>
#include <limits>

#include "pplab/parallel.hpp"

namespace pplab {

UnityKernel UnityKernel::make(const GridDomain& g, KernelKind kind, double eps) {
  if (eps < 2 * g.h() - 1e-14)
    throw GridError("UnityKernel: eps must be at least 2h (kernel unresolvable)");
  UnityKernel k;
  k.kind = kind;
  k.eps = eps;
  const int reach = static_cast<int>(std::floor(eps / g.h() + 1e-12));
  const int d = g.dim();

  std::array<int, 4> o{0, 0, 0, 0};
  Index total = 1;
  for (int a = 0; a < d; ++a) total *= (2 * reach + 1);
  double sum = 0.0;
  Index support_cells = 0;
  for (Index t = 0; t < total; ++t) {
    Index q = t;
    double r2 = 0;
    for (int a = d - 1; a >= 0; --a) {
      o[a] = static_cast<int>(q % (2 * reach + 1)) - reach;
      q /= (2 * reach + 1);
      r2 += double(o[a]) * o[a];
    }
    for (int a = d; a < 4; ++a) o[a] = 0;
    double rr = std::sqrt(r2) * g.h() / eps;
    if (rr > 1.0 + 1e-14) continue;
    ++support_cells;
    double w;
    if (kind == KernelKind::indicator)
      w = 1.0;
    else
      w = std::max(0.0, 1.0 - std::pow(std::min(rr, 1.0), 6.0));
    if (w <= 0) continue;
    k.offsets.push_back(o);
    k.weights.push_back(w);
    sum += w;
  }
  double cell = std::pow(g.h(), d);
  double maxw = 0;
  for (auto& w : k.weights) {
    w /= sum;
    maxw = std::max(maxw, w);
  }
  k.max_density_ratio = std::pow(eps, d) * maxw / cell;

  // invariant: at most twice the indicator normalization at the same eps
  double indicator_ratio = std::pow(eps, d) / (double(support_cells) * cell);
  if (k.max_density_ratio > 2.0 * indicator_ratio + 1e-9)
    throw GridError("UnityKernel: density bound exceeded");
  return k;
}

MollifyResult mollify(const ScalarField& phi, const UnityKernel& kern) {
  const GridDomain& g = phi.grid();
  MollifyResult out;
  out.field = ScalarField(g);
  for (Index id = 0; id < g.num_nodes(); ++id) out.field.set_undefined(id);

  // evaluation zone: |z| <= 1 - h - eps (distance >= eps from the band)
  const double rlim = 1.0 - g.h() - kern.eps;
  if (rlim <= 0) {
    return out;
  }
  const double rlim2 = rlim * rlim;

  std::vector<Index> offs(kern.offsets.size());
  for (std::size_t j = 0; j < kern.offsets.size(); ++j) {
    Index o = 0;
    for (int a = 0; a < g.dim(); ++a) o += Index(kern.offsets[j][a]) * g.stride(a);
    offs[j] = o;
  }

  std::vector<double> excluded(g.num_nodes(), 0.0);
  auto& f = out.field;
  parallel_for(g.num_nodes(), [&](Index b, Index e) {
    for (Index id = b; id < e; ++id) {
      if (g.radius2(id) > rlim2) continue;
      double acc = 0.0, wsum = 0.0, excl = 0.0;
      for (std::size_t j = 0; j < offs.size(); ++j) {
        Index nid = id + offs[j];
        if (!phi.finite(nid)) {
          excl += kern.weights[j];
          continue;
        }
        acc += kern.weights[j] * phi[nid];
        wsum += kern.weights[j];
      }
      if (wsum <= 0) continue;
      f.set(id, acc / wsum);
      excluded[id] = excl;
    }
  });
  double worst = 0;
  Index n = 0;
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (f.finite(id)) {
      ++n;
      worst = std::max(worst, excluded[id]);
    }
  }
  out.evaluated = n;
  out.max_excluded_fraction = worst;
  return out;
}

namespace {

// lattice offsets within euclidean radius r
std::vector<std::array<int, 4>> ball_offsets(const GridDomain& g, double r) {
  const int reach = static_cast<int>(std::floor(r / g.h() + 1e-12));
  const int d = g.dim();
  std::vector<std::array<int, 4>> out;
  std::array<int, 4> o{0, 0, 0, 0};
  Index total = 1;
  for (int a = 0; a < d; ++a) total *= (2 * reach + 1);
  const double r2 = r * r / (g.h() * g.h());
  for (Index t = 0; t < total; ++t) {
    Index q = t;
    double rr = 0;
    for (int a = d - 1; a >= 0; --a) {
      o[a] = static_cast<int>(q % (2 * reach + 1)) - reach;
      q /= (2 * reach + 1);
      rr += double(o[a]) * o[a];
    }
    for (int a = d; a < 4; ++a) o[a] = 0;
    if (rr > r2 + 1e-12) continue;
    out.push_back(o);
  }
  return out;
}

// node at x0 + offset, or -1 when it falls off the grid box
inline Index shifted(const GridDomain& g, const std::array<int, 4>& m0,
                     const std::array<int, 4>& o) {
  std::array<int, 4> t = m0;
  for (int a = 0; a < g.dim(); ++a) t[a] += o[a];
  if (!g.in_box(t)) return -1;
  return g.flat_index(t);
}

}  // namespace

std::vector<LebesgueSample> lebesgue_ratio(const ScalarField& phi, Index x0,
                                           const std::vector<double>& eps_list) {
  const GridDomain& g = phi.grid();
  if (!phi.finite(x0))
    throw GridError("lebesgue_ratio: phi(x0) must be finite (not a Lebesgue-point candidate)");
  std::vector<LebesgueSample> out;
  const double v0 = phi[x0];
  auto m0 = g.multi_index(x0);
  for (double eps : eps_list) {
    if (eps < 2 * g.h() - 1e-14) throw GridError("lebesgue_ratio: eps must be >= 2h");
    auto offs = ball_offsets(g, eps);
    double acc = 0.0;
    Index used = 0;
    for (const auto& o : offs) {
      Index nid = shifted(g, m0, o);
      if (nid < 0 || !phi.finite(nid)) continue;
      acc += std::abs(phi[nid] - v0);
      ++used;
    }
    LebesgueSample s;
    s.eps = eps;
    s.ratio = used ? acc / double(used) : 0.0;
    out.push_back(s);
  }
  return out;
}

std::vector<DensityRatioSample> density_ratio(const ScalarField& u, Index x0, double delta,
                                              const std::vector<double>& r_list) {
  const GridDomain& g = u.grid();
  if (!u.finite(x0)) throw GridError("density_ratio: u(x0) must be finite");
  if (!(delta > 0)) throw GridError("density_ratio: delta must be positive");
  const double v0 = u[x0];
  double cell = std::pow(g.h(), g.dim());
  auto m0 = g.multi_index(x0);
  std::vector<DensityRatioSample> out;
  for (double r : r_list) {
    auto offs = ball_offsets(g, r);
    Index total = 0, in_e = 0;
    for (const auto& o : offs) {
      Index nid = shifted(g, m0, o);
      if (nid < 0) continue;
      ++total;
      bool in;
      if (u.flag(nid) == ValueFlag::neg_inf)
        in = true;  // |u - u(x0)| = +inf >= delta
      else if (!u.finite(nid))
        continue;
      else
        in = std::abs(u[nid] - v0) >= delta;
      if (in) ++in_e;
    }
    DensityRatioSample s;
    s.r = r;
    s.b_r = double(in_e) * cell;
    s.c_r = double(total) * cell;
    s.ratio = total ? double(in_e) / double(total) : 0.0;
    out.push_back(s);
  }
  return out;
}

std::vector<MaskedMeanSample> masked_mean(const ScalarField& u, Index x0,
                                          const std::vector<double>& r_list, const Mask& V) {
  const GridDomain& g = u.grid();
  if (!u.finite(x0)) throw GridError("masked_mean: u(x0) must be finite");
  double cell = std::pow(g.h(), g.dim());
  auto m0 = g.multi_index(x0);
  std::vector<MaskedMeanSample> out;
  for (double r : r_list) {
    auto offs = ball_offsets(g, r);
    double in_acc = 0, out_acc = 0;
    Index total = 0;
    for (const auto& o : offs) {
      Index nid = shifted(g, m0, o);
      if (nid < 0) continue;
      ++total;
      if (!u.finite(nid)) continue;
      if (V.contains(nid))
        in_acc += u[nid];
      else
        out_acc += std::abs(u[nid]);
    }
    MaskedMeanSample s;
    s.r = r;
    double c_r = double(total) * cell;
    s.in_mass = total ? in_acc * cell / c_r : 0.0;
    s.out_mass = total ? out_acc * cell / c_r : 0.0;
    out.push_back(s);
  }
  return out;
}

std::vector<ConvergenceRow> mollifier_convergence(const ScalarField& phi,
                                                  const std::vector<Index>& points,
                                                  const std::vector<double>& eps_list) {
  const GridDomain& g = phi.grid();
  std::vector<ConvergenceRow> rows;
  for (double eps : eps_list) {
    auto ind = mollify(phi, UnityKernel::make(g, KernelKind::indicator, eps));
    auto smo = mollify(phi, UnityKernel::make(g, KernelKind::smooth_radial, eps));
    for (Index p : points) {
      ConvergenceRow r;
      r.point = p;
      r.eps = eps;
      bool oki = ind.field.finite(p), oks = smo.field.finite(p), okp = phi.finite(p);
      r.err_indicator = (oki && okp) ? std::abs(ind.field[p] - phi[p])
                                     : std::numeric_limits<double>::quiet_NaN();
      r.err_smooth = (oks && okp) ? std::abs(smo.field[p] - phi[p])
                                  : std::numeric_limits<double>::quiet_NaN();
      r.cross_deviation = (oki && oks) ? std::abs(ind.field[p] - smo.field[p])
                                       : std::numeric_limits<double>::quiet_NaN();
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace pplab
