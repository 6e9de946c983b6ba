#include "pplab/majorant.hpp"

#include <cmath>
#include <limits>

namespace pplab {

double default_lambda(double alpha) { return 0.5 * (std::pow(2.0, alpha) + 4.0); }

std::vector<Mask> level_sets(const ScalarField& phi, const ScalarField& psi, const Mask& K,
                             double lambda, int N) {
  const GridDomain& g = phi.grid();
  std::vector<Mask> out;
  out.reserve(N);
  for (int n = 1; n <= N; ++n) {
    const double phi_thr = std::pow(2.0, n);
    const double psi_thr = -std::pow(lambda, n);
    Mask m(g);
    for (Index id = 0; id < g.num_nodes(); ++id) {
      if (!K.contains(id)) continue;
      if (!phi.finite(id)) continue;  // singular nodes never certify a level
      if (phi[id] < phi_thr) continue;
      bool psi_ok;
      if (psi.flag(id) == ValueFlag::neg_inf)
        psi_ok = false;
      else if (!psi.finite(id))
        continue;
      else
        psi_ok = psi[id] >= psi_thr;
      if (psi_ok) m.set(id, true);
    }
    out.push_back(std::move(m));
  }
  return out;
}

TailSeries tail_series(const ScalarField& psi, double alpha, double lambda, int N) {
  if (!(lambda > std::pow(2.0, alpha)))
    throw GridError("tail_series: requires lambda > 2^alpha (series need not converge)");
  const GridDomain& g = psi.grid();
  TailSeries out;
  out.w = ScalarField(g, 0.0);
  double sup_abs_psi = 0.0;
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!g.in_ball(id)) continue;
    if (psi.flag(id) == ValueFlag::undefined) {
      out.w.set_undefined(id);
      continue;
    }
    double acc = 0.0;
    const bool ninf = psi.flag(id) == ValueFlag::neg_inf;
    double v = ninf ? 0.0 : psi[id];
    if (!ninf) sup_abs_psi = std::max(sup_abs_psi, std::abs(v));
    for (int n = 1; n <= N; ++n) {
      double ln = std::pow(lambda, n);
      double term = ninf ? -ln : std::max(v, -ln);
      acc += std::pow(2.0, n * alpha) * term / ln;
    }
    out.w.set(id, acc);
    if (ninf) out.bounded_psi = false;
  }
  if (psi.count_nonfinite() > 0) out.bounded_psi = false;
  // geometric bound on the dropped tail when psi is bounded:
  // sum_{n>N} (2^alpha/lambda)^n * sup|psi|
  const double q = std::pow(2.0, alpha) / lambda;
  out.dropped_bound = out.bounded_psi
                          ? sup_abs_psi * std::pow(q, N + 1) / (1.0 - q)
                          : std::numeric_limits<double>::infinity();
  return out;
}

std::pair<ScalarField, ScalarField> split_signed(const ScalarField& phi) {
  const GridDomain& g = phi.grid();
  ScalarField plus(g, 0.0), minus(g, 0.0);
  for (Index id = 0; id < g.num_nodes(); ++id) {
    switch (phi.flag(id)) {
      case ValueFlag::finite:
        plus.set(id, std::max(phi[id], 0.0));
        minus.set(id, std::max(-phi[id], 0.0));
        break;
      case ValueFlag::neg_inf:
        plus.set(id, 0.0);
        minus.set_undefined(id);  // phi^- = +inf is not representable
        break;
      case ValueFlag::undefined:
        plus.set_undefined(id);
        minus.set_undefined(id);
        break;
    }
  }
  return {std::move(plus), std::move(minus)};
}

MajorantBundle build_majorant(const WStarPair& pair, const Mask& K, const MajorantParams& params) {
  const GridDomain& g = pair.phi.grid();
  MajorantBundle b;
  b.alpha = params.alpha;
  b.lambda = params.lambda > 0 ? params.lambda : default_lambda(params.alpha);
  b.N = params.N;
  if (!(params.alpha >= 1.0 && params.alpha < 2.0))
    throw GridError("build_majorant: alpha must be in [1,2)");
  if (!(b.lambda > std::pow(2.0, params.alpha) && b.lambda < 4.0))
    throw GridError("build_majorant: lambda must satisfy 2^alpha < lambda < 4");
  for (Index id = 0; id < g.num_nodes(); ++id)
    if (K.contains(id) && pair.phi.finite(id) && pair.phi[id] < -1e-12)
      throw GridError("build_majorant: phi must be nonnegative on K (apply split_signed first)");

  b.k_masks = level_sets(pair.phi, pair.psi, K, b.lambda, b.N);

  // u*_n: relative extremal of K_n; empty levels contribute the zero field
  b.u_fields.reserve(b.N);
  for (int n = 1; n <= b.N; ++n) {
    const Mask& Kn = b.k_masks[n - 1];
    if (Kn.empty()) {
      b.u_fields.emplace_back(g, 0.0);
      continue;
    }
    EnvelopeOptions eo;
    eo.tol = params.tol * std::pow(2.0, -n * params.alpha);
    eo.method = params.method;
    EnvelopeResult env = relative_extremal(Kn, g, eo);
    if (!env.converged) b.converged = false;
    b.u_fields.push_back(std::move(env.u));
  }

  TailSeries tail = tail_series(pair.psi, params.alpha, b.lambda, b.N);
  b.w_tail = std::move(tail.w);

  // u = sum 2^{n alpha} u*_n + w_tail
  b.u = ScalarField(g, 0.0);
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!g.in_ball(id)) {
      b.u.set(id, 0.0);
      continue;
    }
    if (!b.w_tail.finite(id)) {
      b.u.set_undefined(id);
      continue;
    }
    double acc = b.w_tail[id];
    for (int n = 1; n <= b.N; ++n) acc += std::pow(2.0, n * params.alpha) * b.u_fields[n - 1][id];
    b.u.set(id, acc);
  }

  // exception mask: truncation cannot certify these nodes
  b.exception_mask = Mask(g);
  const double phi_cap = std::pow(2.0, b.N + 1);
  const double psi_floor = -std::pow(b.lambda, b.N);
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!K.contains(id)) continue;
    bool exc = false;
    if (!pair.phi.finite(id) || pair.phi[id] >= phi_cap) exc = true;
    if (!pair.psi.finite(id) || pair.psi[id] < psi_floor) exc = true;
    if (exc) b.exception_mask.set(id, true);
  }

  // node-wise claim on the certified region {phi >= 2} cap K minus exceptions:
  // 2^alpha u <= -phi^alpha up to the summed envelope tolerance N*tol
  b.violation_mask = Mask(g);
  const double slack = params.N * params.tol;
  const double two_a = std::pow(2.0, params.alpha);
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!K.contains(id) || b.exception_mask.contains(id)) continue;
    if (!pair.phi.finite(id) || !b.u.finite(id)) continue;
    const double ph = pair.phi[id];
    if (ph < 2.0) {
      // additive-constant variant reported over the whole mask
      if (two_a * b.u[id] > -std::pow(ph, params.alpha) + two_a + slack * two_a)
        ++b.global_bound_violations;
      continue;
    }
    ++b.certified_nodes;
    if (two_a * b.u[id] > -std::pow(ph, params.alpha) + slack * two_a) {
      ++b.violations;
      b.violation_mask.set(id, true);
    }
  }
  b.violation_fraction = b.certified_nodes ? double(b.violations) / double(b.certified_nodes) : 0.0;

  Mask interior(g);
  for (Index id = 0; id < g.num_nodes(); ++id)
    if (g.is_interior(id)) interior.set(id, true);
  b.psh_residual_u = psh_residual(b.u, DirectionSet::standard(g.k()), interior);

  IntegralResult l1 = [&] {
    ScalarField absu(g, 0.0);
    for (Index id = 0; id < g.num_nodes(); ++id) {
      if (b.u.finite(id))
        absu.set(id, std::abs(b.u[id]));
      else
        absu.set_undefined(id);
    }
    return integrate(absu, K);
  }();
  b.l1_norm_on_K = l1.value;

  b.finiteness_witness = -std::numeric_limits<double>::infinity();
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!g.in_ball(id) || !b.u.finite(id)) continue;
    if (b.u[id] > b.finiteness_witness) {
      b.finiteness_witness = b.u[id];
      b.witness_node = id;
    }
  }
  return b;
}

BudgetReport budget_sets(const std::vector<ScalarField>& u_fields, double alpha, int n0) {
  BudgetReport rep;
  rep.n0 = n0;
  if (u_fields.empty()) return rep;
  const GridDomain& g = u_fields.front().grid();
  rep.ball_measure = full_ball(g).measure();
  for (std::size_t i = 0; i < u_fields.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    const double scale = std::pow(2.0, n * alpha);
    Mask bn(g);
    for (Index id = 0; id < g.num_nodes(); ++id) {
      if (!g.in_ball(id)) continue;
      double rho = g.radius2(id) - 1.0;
      if (scale * u_fields[i][id] < rho / double(n * n)) bn.set(id, true);
    }
    rep.leb.push_back(bn.measure());
    rep.b_masks.push_back(std::move(bn));
  }
  for (std::size_t i = 0; i < rep.leb.size(); ++i)
    if (static_cast<int>(i) + 1 >= n0) rep.tail_sum_from_n0 += rep.leb[i];
  rep.nondegenerate = rep.tail_sum_from_n0 < rep.ball_measure;
  return rep;
}

}  // namespace pplab
