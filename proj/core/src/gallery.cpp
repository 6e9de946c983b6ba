#include "pplab/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "pplab/calculus.hpp"
#include "pplab/radial.hpp"

namespace pplab {

namespace {

double get(const GalleryParams& p, const std::string& key, double def) {
  auto it = p.find(key);
  return it == p.end() ? def : it->second;
}

double norm2(const std::array<double, 4>& p, int dim) {
  double s = 0;
  for (int a = 0; a < dim; ++a) s += p[a] * p[a];
  return s;
}

using PointFn = std::function<double(const std::array<double, 4>&, int dim)>;

void sample(ScalarField& f, const GridDomain& g, const PointFn& fn, double singular_r2) {
  for (Index id = 0; id < g.num_nodes(); ++id) {
    auto p = g.point(id);
    if (singular_r2 > 0 && norm2(p, g.dim()) < singular_r2) {
      f.set_undefined(id);
      continue;
    }
    f.set(id, fn(p, g.dim()));
  }
}

constexpr double kA = 2.0 * 0.6931471805599453;  // 2 log 2: the B(0,1/2) -> B rescale shift

}  // namespace

std::vector<GalleryEntryInfo> gallery_list() {
  return {
      {"constant", "phi = c, psi = 0", {"c (default 1)"}, true, true},
      {"linear", "phi = Re z_1, psi = (|z|^2-1)/4", {}, true, true},
      {"sqnorm", "phi = |z|^2, psi = |z|^2-1", {}, true, true},
      {"loglog",
       "phi = (2log2 - log|z|^2)^{1/2-delta} with its radial dominator; the "
       "B(0,1/2) profile rescaled to the unit ball (gradient-form mass is "
       "invariant under the rescale)",
       {"delta (default 0.1, in (0,1/2))"},
       true,
       true},
      {"log_floor", "phi = max(log|z|, -c), psi = ((max(log|z|,-c)+c)^2-c^2)/2",
       {"c (default 3)"}, true, true},
      {"clipped_log", "phi = min(c log(1/|z|), M) with its radial dominator",
       {"c (default 8)", "M (default 33)"}, true, true},
      {"log_single", "phi = 0, psi = log(|z-a|/(1+|a|)) (unit point mass at a)",
       {"ax (default 0)", "ay (default 0)"}, true, true},
      {"log_sum",
       "phi = sum of two clipped log peaks, dominated by the scaled potentials "
       "with the Cauchy-Schwarz factor",
       {"c1 (default 1)", "c2 (default 0.5)", "sep (default 0.4)", "rho (default 2h)"},
       true,
       false},
  };
}

GalleryInstance gallery_instantiate(const std::string& name, const GridDomain& g,
                                    const GalleryParams& params) {
  GalleryInstance inst;
  inst.name = name;
  inst.pair.phi = ScalarField(g, 0.0);
  inst.pair.psi = ScalarField(g, 0.0);
  inst.pair.provenance = PairProvenance::analytic;
  const int k = g.k();
  const double h = g.h();

  if (name == "constant") {
    const double c = get(params, "c", 1.0);
    if (c < 0) throw GridError("gallery constant: c must be >= 0");
    sample(inst.pair.phi, g, [c](auto&, int) { return c; }, 0);
    sample(inst.pair.psi, g, [](auto&, int) { return 0.0; }, 0);
    inst.facts.push_back({"star_norm", c, 1e-12, "int c omega^k = c exactly"});
    return inst;
  }

  if (name == "linear") {
    sample(inst.pair.phi, g, [](auto& p, int) { return p[0]; }, 0);
    if (get(params, "poisson", 0.0) > 0) {
      if (k != 1) throw GridError("gallery linear: poisson dominator is k=1 only");
      PoissonResult pr = poisson_dominator(inst.pair.phi, g, {});
      if (!pr.converged) throw GridError("gallery linear: poisson solve did not converge");
      inst.pair.psi = std::move(pr.psi);
      inst.pair.provenance = PairProvenance::poisson_solved;
    } else {
      sample(inst.pair.psi, g, [](auto& p, int dim) { return (norm2(p, dim) - 1.0) / 4.0; }, 0);
    }
    inst.facts.push_back({"psi_mass", 0.5, 0.01, "lap psi = 1: mass = Leb(ball)/(2 pi^k)"});
    if (k == 1)
      inst.facts.push_back(
          {"phi_l1", 4.0 / (3.0 * norms::pi), 0.01, "int |x| over the disc = 4/3; times 1/pi"});
    return inst;
  }

  if (name == "sqnorm") {
    sample(inst.pair.phi, g, [](auto& p, int dim) { return norm2(p, dim); }, 0);
    sample(inst.pair.psi, g, [](auto& p, int dim) { return norm2(p, dim) - 1.0; }, 0);
    inst.facts.push_back({"psi_mass", 2.0, 0.01, "lap psi = 4 (k=1) / trace 2 (k=2)"});
    return inst;
  }

  if (name == "loglog") {
    const double delta = get(params, "delta", 0.1);
    if (!(delta > 0 && delta < 0.5)) throw GridError("gallery loglog: delta must be in (0,1/2)");
    const double s = 0.5 - delta;
    const double sing = 4 * h * h;  // |z| < 2h marked undefined
    auto phi = [s](const std::array<double, 4>& p, int dim) {
      double L = kA - std::log(norm2(p, dim));
      return std::pow(L, s);
    };
    const double cpsi = s * s / (2 * delta * (1 - 2 * delta));
    auto psi = [cpsi, delta](const std::array<double, 4>& p, int dim) {
      double L = kA - std::log(norm2(p, dim));
      return -cpsi * (std::pow(L, 1 - 2 * delta) - std::pow(kA, 1 - 2 * delta));
    };
    sample(inst.pair.phi, g, phi, sing);
    sample(inst.pair.psi, g, psi, sing);
    const double mass = s * s * std::pow(kA, -2 * delta) / delta;
    inst.facts.push_back({"psi_mass", mass, 0.01,
                          "closed form s^2 (2 log 2)^{-2 delta} / delta via t = -log r^2; "
                          "cross-check by radial quadrature"});
    // L1 of phi by radial quadrature (the profile is the same for k=1,2)
    double l1 = radial_volume_integral(
        k, [s](double r) { return std::pow(kA - 2 * std::log(r), s); }, 1e-12, 1.0);
    inst.facts.push_back(
        {"phi_l1", l1 * norms::omega_density(k), 0.02, "radial quadrature of phi omega^k"});
    return inst;
  }

  if (name == "log_floor") {
    const double c = get(params, "c", 3.0);
    if (!(c > 0)) throw GridError("gallery log_floor: c must be > 0");
    auto phi = [c](const std::array<double, 4>& p, int dim) {
      return std::max(0.5 * std::log(norm2(p, dim)), -c);
    };
    auto psi = [c](const std::array<double, 4>& p, int dim) {
      double m = std::max(0.5 * std::log(norm2(p, dim)), -c);
      return ((m + c) * (m + c) - c * c) / 2.0;
    };
    // the origin maps to the floor value exactly; no singular nodes
    sample(inst.pair.phi, g, phi, 0);
    sample(inst.pair.psi, g, psi, 0);
    Index o = g.origin();
    inst.pair.phi.set(o, -c);
    inst.pair.psi.set(o, -c * c / 2.0);
    inst.facts.push_back({"psi_mass", c, 0.01, "boundary flux r psi'(1) = c in both dimensions"});
    return inst;
  }

  if (name == "clipped_log") {
    const double c = get(params, "c", 8.0);
    const double M = get(params, "M", 33.0);
    if (!(c > 0 && M > 0)) throw GridError("gallery clipped_log: c and M must be > 0");
    auto phi = [c, M](const std::array<double, 4>& p, int dim) {
      return std::min(-0.5 * c * std::log(norm2(p, dim)), M);
    };
    auto psi = [c, M](const std::array<double, 4>& p, int dim) {
      double m = std::max(0.5 * std::log(norm2(p, dim)), -M / c);
      return ((c * m + M) * (c * m + M) - M * M) / 2.0;
    };
    sample(inst.pair.phi, g, phi, 0);
    sample(inst.pair.psi, g, psi, 0);
    Index o = g.origin();
    inst.pair.phi.set(o, M);
    inst.pair.psi.set(o, -M * M / 2.0);
    inst.facts.push_back({"psi_mass", c * M, 0.01, "boundary flux c M in both dimensions"});
    return inst;
  }

  if (name == "log_single") {
    std::array<double, 4> a{get(params, "ax", 0.0), get(params, "ay", 0.0), 0, 0};
    double na = std::sqrt(norm2(a, g.dim()));
    const double sing = 4 * h * h;
    auto psi = [a, na](const std::array<double, 4>& p, int dim) {
      double d2 = 0;
      for (int i = 0; i < dim; ++i) d2 += (p[i] - a[i]) * (p[i] - a[i]);
      return 0.5 * std::log(d2) - std::log(1.0 + na);
    };
    sample(inst.pair.phi, g, [](auto&, int) { return 0.0; }, 0);
    for (Index id = 0; id < g.num_nodes(); ++id) {
      auto p = g.point(id);
      double d2 = 0;
      for (int i = 0; i < g.dim(); ++i) d2 += (p[i] - a[i]) * (p[i] - a[i]);
      if (d2 < sing)
        inst.pair.psi.set_undefined(id);
      else
        inst.pair.psi.set(id, psi(p, g.dim()));
    }
    if (na == 0.0)
      inst.facts.push_back({"psi_mass", 1.0, 0.01, "dd^c log|z| wedge omega^{k-1} has unit mass"});
    return inst;
  }

  if (name == "log_sum") {
    if (k != 1) throw GridError("gallery log_sum: k=1 only");
    const double c1 = get(params, "c1", 1.0);
    const double c2 = get(params, "c2", 0.5);
    const double sep = get(params, "sep", 0.4);
    const double rho = get(params, "rho", 2 * h);
    const std::array<std::array<double, 4>, 2> centers{{{sep / 2, 0, 0, 0}, {-sep / 2, 0, 0, 0}}};
    const std::array<double, 2> coef{c1, c2};
    const double p_factor = 2.0;  // Cauchy-Schwarz over the two terms
    auto phi = [&](const std::array<double, 4>& p, int dim) {
      double acc = 0;
      for (int j = 0; j < 2; ++j) {
        double d2 = 0;
        for (int i = 0; i < dim; ++i) d2 += (p[i] - centers[j][i]) * (p[i] - centers[j][i]);
        double w = std::max(std::sqrt(d2), rho);
        double Rj = 1.0 + sep / 2;
        acc += coef[j] * std::log(Rj / w);
      }
      return acc;
    };
    auto psi = [&](const std::array<double, 4>& p, int dim) {
      double acc = 0;
      for (int j = 0; j < 2; ++j) {
        double d2 = 0;
        for (int i = 0; i < dim; ++i) d2 += (p[i] - centers[j][i]) * (p[i] - centers[j][i]);
        double w = std::max(std::sqrt(d2), rho);
        double Rj = 1.0 + sep / 2;
        double t = std::log(w / rho);
        double tmax = std::log(Rj / rho);
        acc += coef[j] * coef[j] * (t * t - tmax * tmax) / 2.0;
      }
      return p_factor * acc;
    };
    sample(inst.pair.phi, g, phi, 0);
    sample(inst.pair.psi, g, psi, 0);
    return inst;
  }

  throw GridError("gallery: unknown entry '" + name + "'");
}

Alpha2Witness alpha2_failure_witness(const GridDomain& g, double delta, double alpha,
                                     const std::vector<double>& r_list) {
  if (g.k() != 1) throw GridError("alpha2_failure_witness: k=1 only");
  if (!(delta > 0 && delta < 0.5)) throw GridError("alpha2_failure_witness: delta in (0,1/2)");
  if (!(alpha > 0)) throw GridError("alpha2_failure_witness: alpha must be positive");
  Alpha2Witness w;
  w.beta = alpha * (0.5 - delta);
  if (w.beta <= 1.0) {
    // bounded circle means prove nothing about subharmonic majorants
    w.inconclusive = true;
    return w;
  }
  const double s = 0.5 - delta;
  const int n_angles = 64;
  bool increasing = true;
  double prev = -std::numeric_limits<double>::infinity();
  std::vector<double> radii = r_list;
  std::sort(radii.begin(), radii.end(), std::greater<double>());  // ratio grows as r shrinks
  for (double r : radii) {
    if (!(r > 0 && r < 1)) throw GridError("alpha2_failure_witness: radii must be in (0,1)");
    double acc = 0;
    for (int t = 0; t < n_angles; ++t) {
      double th = 2 * norms::pi * t / n_angles;
      std::array<double, 4> p{r * std::cos(th), r * std::sin(th), 0, 0};
      double phi = std::pow(-std::log(norm2(p, 2)), s);
      acc += -std::pow(phi, alpha);
    }
    Alpha2Row row;
    row.r = r;
    row.circle_mean = acc / n_angles;
    const double l2 = -std::log(r * r);  // = 2 log(1/r)
    row.ratio = std::abs(row.circle_mean) / l2;
    row.oracle_ratio = std::pow(l2, w.beta - 1.0);
    w.max_rel_err =
        std::max(w.max_rel_err, std::abs(row.ratio - row.oracle_ratio) / row.oracle_ratio);
    if (row.ratio <= prev) increasing = false;
    prev = row.ratio;
    w.rows.push_back(row);
  }
  w.strictly_increasing = increasing;
  return w;
}

}  // namespace pplab
