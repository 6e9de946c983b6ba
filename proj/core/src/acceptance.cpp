#include "pplab/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pplab/calculus.hpp"
#include "pplab/capacity.hpp"
#include "pplab/energy.hpp"
#include "pplab/envelope.hpp"
#include "pplab/gallery.hpp"
#include "pplab/grid.hpp"
#include "pplab/lebesgue.hpp"
#include "pplab/majorant.hpp"
#include "pplab/radial.hpp"
#include "pplab/wstar.hpp"

namespace pplab {

namespace {

constexpr double kPi = 3.14159265358979323846;
// closed-form gradient-energy mass of the delta=0.1 "loglog" entry,
// s^2 (2 log 2)^{-2 delta} / delta, frozen after the quadrature cross-check
constexpr double kLoglogMass = 1.4988179696895731;

double rel_err(double v, double target) { return std::abs(v - target) / std::abs(target); }


ScalarField exact_extremal_ball(const GridDomain& g, double r0) {
  ScalarField f(g, 0.0);
  const double L = std::log(1.0 / r0);
  for (Index id = 0; id < g.num_nodes(); ++id) {
    double r = std::sqrt(g.radius2(id));
    f.set(id, r > 0 ? std::max(-1.0, std::log(r) / L) : -1.0);
  }
  return f;
}

struct LineFit {
  double slope = 0, r2 = 1;
  int used = 0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  LineFit f;
  double sx = 0, sy = 0;
  const int n = static_cast<int>(xs.size());
  for (int i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  double mx = sx / n, my = sy / n, sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  f.slope = sxy / sxx;
  f.r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 1.0;
  f.used = n;
  return f;
}

// ---------------------------------------------------------------- criterion 1
CriterionResult c1_normalization() {
  CriterionResult r;
  r.id = 1;
  r.name = "normalization: int omega^k = 1; unit mass of dd^c max(log|z|,-3)";
  json d;

  {
    GridDomain g = make_ball_grid(1, 513);
    ScalarField w(g, norms::omega_density(1));
    double v = integrate(w, full_ball(g)).value;
    d["omega_k1_n513"] = v;
    d["omega_k1_rel_err"] = rel_err(v, 1.0);
    r.pass = rel_err(v, 1.0) <= 0.01;
  }
  {
    GridDomain g = make_ball_grid(2, 65);
    ScalarField w(g, norms::omega_density(2));
    double v = integrate(w, full_ball(g)).value;
    d["omega_k2_n65"] = v;
    d["omega_k2_rel_err"] = rel_err(v, 1.0);
    r.pass = r.pass && rel_err(v, 1.0) <= 0.01;
  }
  {
    GridDomain g = make_ball_grid(1, 513);
    auto inst = gallery_instantiate("log_floor", g, {{"c", 3.0}});
    MassResult m = ddc_mass(inst.pair.phi, full_ball(g));
    d["logmass_k1_n513"] = m.value;
    d["logmass_k1_flux"] = m.flux_value;
    d["logmass_k1_rel_err"] = rel_err(m.value, 1.0);
    r.pass = r.pass && rel_err(m.value, 1.0) <= 0.03;
  }
  {
    GridDomain g = make_ball_grid(2, 65);
    auto inst = gallery_instantiate("log_floor", g, {{"c", 3.0}});
    MassResult m = ddc_mass(inst.pair.phi, full_ball(g));
    d["logmass_k2_n65"] = m.value;
    d["logmass_k2_flux"] = m.flux_value;
    d["logmass_k2_rel_err"] = rel_err(m.value, 1.0);
    r.pass = r.pass && rel_err(m.value, 1.0) <= 0.15;
  }
  d["tolerances"] = {{"omega", 0.01}, {"logmass_k1", 0.03}, {"logmass_k2", 0.15}};
  d["oracle"] = "closed forms: Leb(B^{2k}) * density constants; unit point mass";
  r.details = std::move(d);
  return r;
}

// ---------------------------------------------------------------- criterion 2
CriterionResult c2_extremal() {
  CriterionResult r;
  r.id = 2;
  r.name = "relative extremal functions vs classical closed forms";
  json d;

  {
    GridDomain g = make_ball_grid(1, 513);
    EnvelopeOptions eo;
    eo.tol = 1e-10;
    eo.method = EnvelopeMethod::sor;
    EnvelopeResult env = relative_extremal(ball_mask(g, 0.3), g, eo);
    ScalarField ex = exact_extremal_ball(g, 0.3);
    double sup = 0;
    for (Index id = 0; id < g.num_nodes(); ++id)
      if (g.is_interior(id)) sup = std::max(sup, std::abs(env.u[id] - ex[id]));
    d["k1_disc03_n513_sup_err"] = sup;
    d["k1_iterations"] = env.iterations;
    d["k1_residual"] = env.residual;
    r.pass = env.converged && sup <= 1e-2;
  }
  {
    GridDomain g = make_ball_grid(2, 65);
    EnvelopeOptions eo;
    eo.tol = 1e-9;
    eo.method = EnvelopeMethod::sor;
    EnvelopeResult env = relative_extremal(ball_mask(g, 0.5), g, eo);
    ScalarField ex = exact_extremal_ball(g, 0.5);
    double sup = 0;
    for (Index id = 0; id < g.num_nodes(); ++id)
      if (g.is_interior(id)) sup = std::max(sup, std::abs(env.u[id] - ex[id]));
    d["k2_ball05_n65_sup_err"] = sup;
    d["k2_iterations"] = env.iterations;
    d["k2_residual"] = env.residual;
    r.pass = r.pass && env.converged && sup <= 3e-2;
  }
  d["tolerances"] = {{"k1_sup", 1e-2}, {"k2_sup", 3e-2}};
  d["oracle"] = "u*_E(z) = max(-1, log|z| / log(1/r0)) for centered balls";
  r.details = std::move(d);
  return r;
}

// ---------------------------------------------------------------- criterion 3
CriterionResult c3_capacity() {
  CriterionResult r;
  r.id = 3;
  r.name = "Bedford-Taylor capacity of balls and monotonicity";
  json d;
  r.pass = true;

  CapacityOptions co;
  co.tol = 1e-10;
  {
    GridDomain g = make_ball_grid(1, 1025);
    CapacityEstimate c = cap_bt(ball_mask(g, 0.3), g, co);
    const double exact = 1.0 / std::log(1.0 / 0.3);
    d["k1_disc03_n1025"] = c.value;
    d["k1_exact"] = exact;
    d["k1_rel_err"] = rel_err(c.value, exact);
    d["k1_mass_outside_E"] = c.mass_outside_E;
    r.pass = r.pass && c.converged && rel_err(c.value, exact) <= 0.03;
    r.pass = r.pass && c.mass_outside_E <= 0.10;
  }
  {
    GridDomain g = make_ball_grid(2, 65);
    CapacityOptions co2 = co;
    co2.tol = 1e-9;
    CapacityEstimate c = cap_bt(ball_mask(g, 0.5), g, co2);
    const double exact = std::pow(1.0 / std::log(2.0), 2);
    d["k2_ball05_n65"] = c.value;
    d["k2_raw"] = c.value_raw;
    d["k2_exact"] = exact;
    d["k2_rel_err"] = rel_err(c.value, exact);
    d["k2_clipped_mass"] = c.clipped_mass;
    r.pass = r.pass && c.converged && rel_err(c.value, exact) <= 0.15;
  }
  {
    GridDomain g = make_ball_grid(1, 513);
    std::vector<double> radii{0.2, 0.3, 0.4, 0.5, 0.6};
    std::vector<double> caps;
    for (double rad : radii) caps.push_back(cap_bt(ball_mask(g, rad), g, co).value);
    d["monotone_radii"] = radii;
    d["monotone_caps"] = caps;
    bool mono = true;
    for (std::size_t i = 0; i + 1 < caps.size(); ++i)
      if (caps[i] > caps[i + 1] * 1.05) mono = false;
    d["monotone_pass"] = mono;
    r.pass = r.pass && mono;
  }
  d["tolerances"] = {{"k1", 0.03}, {"k2", 0.15}, {"monotone_slack", 0.05}};
  d["oracle"] = "Cap(B(0,r), B) = (log(1/r))^{-k}";
  r.details = std::move(d);
  return r;
}

// ---------------------------------------------------------------- criterion 4
CriterionResult c4_loglog_mass() {
  CriterionResult r;
  r.id = 4;
  r.name = "gradient-energy mass of the loglog entry vs closed form";
  json d;

  // the closed form must match independent quadrature before being trusted
  const double delta = 0.1, s = 0.4, A = 2 * std::log(2.0);
  // mass = 2 s^2 int_A^inf t^{2s-2} dt, integrated in u with t = A e^u
  double quad = 2 * s * s *
                integrate_1d(
                    [&](double u) { return std::pow(A * std::exp(u), 2 * s - 2) * A * std::exp(u); },
                    0.0, 200.0, 1e-12);
  d["closed_form"] = kLoglogMass;
  d["quadrature"] = quad;
  d["quad_rel_err"] = rel_err(quad, kLoglogMass);
  bool quad_ok = rel_err(quad, kLoglogMass) <= 1e-3;

  GridDomain g = make_ball_grid(1, 1025);
  auto inst = gallery_instantiate("loglog", g, {{"delta", delta}});
  StarNorm sn = star_norm(inst.pair, g);
  d["mass_n1025"] = sn.mass;
  d["mass_rel_err"] = rel_err(sn.mass, kLoglogMass);
  d["star_norm"] = sn.value;
  d["l1_term"] = sn.l1_term;
  d["tolerances"] = {{"mass", 0.01}, {"quadrature_cross_check", 1e-3}};
  d["oracle"] = "s^2 (2log2)^{-2 delta}/delta by the t = -log r^2 substitution";
  r.pass = quad_ok && rel_err(sn.mass, kLoglogMass) <= 0.01;
  (void)delta;
  r.details = std::move(d);
  return r;
}

// ---------------------------------------------------------------- criterion 5
CriterionResult c5_majorant() {
  CriterionResult r;
  r.id = 5;
  r.name = "truncated psh majorant for the normalized loglog pair";
  json d;

  MajorantParams mp;
  mp.alpha = 1.5;
  mp.lambda = 0;  // default midpoint
  mp.N = 8;
  mp.tol = 1e-4;
  mp.method = EnvelopeMethod::sor;

  struct Run {
    double psh_res, l1, viol_frac, cap_viol;
    bool budget_ok;
    Index certified;
  };
  auto run_at = [&](int n) {
    GridDomain g = make_ball_grid(1, n);
    auto inst = gallery_instantiate("loglog", g, {{"delta", 0.1}});
    WStarPair norm = normalize_pair(inst.pair, g);
    Mask K = ball_mask(g, 0.7);
    MajorantBundle b = build_majorant(norm, K, mp);
    Run out;
    out.psh_res = b.psh_residual_u;
    out.l1 = b.l1_norm_on_K;
    out.viol_frac = b.violation_fraction;
    out.certified = b.certified_nodes;
    out.cap_viol = b.violation_mask.empty()
                       ? 0.0
                       : cap_bt(b.violation_mask, g, {1e-9, EnvelopeMethod::sor, true}).value;
    BudgetReport budget = budget_sets(b.u_fields, mp.alpha, 4);
    out.budget_ok = budget.nondegenerate;
    return out;
  };

  Run a = run_at(257);
  Run b = run_at(513);
  d["psh_residual_n257"] = a.psh_res;
  d["psh_residual_n513"] = b.psh_res;
  d["bound_psh_residual"] = mp.N * mp.tol;
  d["violation_fraction_n257"] = a.viol_frac;
  d["violation_fraction_n513"] = b.viol_frac;
  d["certified_nodes_n257"] = a.certified;
  d["certified_nodes_n513"] = b.certified;
  d["cap_violation_n257"] = a.cap_viol;
  d["cap_violation_n513"] = b.cap_viol;
  d["l1_n257"] = a.l1;
  d["l1_n513"] = b.l1;
  d["budget_nondegenerate_n513"] = b.budget_ok;

  bool pa = a.psh_res <= mp.N * mp.tol && b.psh_res <= mp.N * mp.tol;
  bool pb = a.viol_frac <= 1e-3 && b.viol_frac <= 1e-3 &&
            b.cap_viol <= 0.5 * a.cap_viol + 1e-12;
  bool pc = std::isfinite(a.l1) && std::isfinite(b.l1) &&
            std::abs(b.l1 - a.l1) <= 0.10 * std::max(std::abs(a.l1), std::abs(b.l1));
  bool pd = a.budget_ok && b.budget_ok;
  d["pass_a_psh"] = pa;
  d["pass_b_claim"] = pb;
  d["pass_c_l1_stable"] = pc;
  d["pass_d_budget"] = pd;
  r.pass = pa && pb && pc && pd;
  r.details = std::move(d);
  return r;
}

// ---------------------------------------------------------------- criterion 6
CriterionResult c6_capacity_decay() {
  CriterionResult r;
  r.id = 6;
  r.name = "capacity decay of level sets: fitted slope vs log(lambda/4)";
  json d;

  GridDomain g = make_ball_grid(1, 513);
  auto inst = gallery_instantiate("clipped_log", g, {{"c", 8.0}, {"M", 33.0}});
  Mask K = ball_mask(g, 0.85);
  ScalarField zero_psi(g, 0.0);  // levels cut by the phi thresholds alone
  const double lambda = 3.0;
  auto masks = level_sets(inst.pair.phi, zero_psi, K, lambda, 5);

  std::vector<std::pair<int, double>> caps;
  json levels = json::array();
  for (int n = 1; n <= 5; ++n) {
    const Mask& Kn = masks[n - 1];
    double c = Kn.empty() ? 0.0 : cap_bt(Kn, g, {1e-10, EnvelopeMethod::sor, true}).value;
    caps.emplace_back(n, c);
    levels.push_back({{"n", n}, {"nodes", Kn.count()}, {"cap", c},
                      {"exact", 8.0 / std::pow(2.0, n)}});
  }
  DecayFit fit = cap_decay_fit(caps);
  const double bound = std::log(lambda / 4.0) + 0.1;
  d["levels"] = levels;
  d["slope"] = fit.slope;
  d["r2"] = fit.r2;
  d["bound_slope"] = bound;
  d["lambda"] = lambda;
  d["oracle"] = "Cap(disc e^{-2^n/c}) = c/2^n: exact halving, slope -log 2";
  r.pass = fit.slope <= bound && fit.r2 >= 0.9;
  r.details = std::move(d);
  return r;
}

// ---------------------------------------------------------------- criterion 7
CriterionResult c7_energy(std::uint64_t seed) {
  CriterionResult r;
  r.id = 7;
  r.name = "energy probe growth exponents over n = 1..16";
  json d;

  GridDomain g = make_ball_grid(1, 257);
  auto inst = gallery_instantiate("loglog", g, {{"delta", 0.1}});
  Mask K = ball_mask(g, 0.7);
  TestDictionary dictA = TestDictionary::standard(g, 0);
  TestDictionary dictB = TestDictionary::standard(g, 1, seed);
  dictA.validate(g);
  dictB.validate(g);

  auto exponent = [&](const std::function<double(int)>& value) {
    std::vector<double> xs, ys;
    for (int n = 1; n <= 16; ++n) {
      double v = value(n);
      if (v > 0) {
        xs.push_back(std::log(double(n)));
        ys.push_back(std::log(v));
      }
    }
    if (xs.size() < 3) return std::numeric_limits<double>::quiet_NaN();
    return fit_line(xs, ys).slope;
  };

  double expJ = exponent([&](int n) {
    return probe_J(inst.pair, inst.pair.psi, n, 1, 0, K, dictA).value;
  });
  double expI0 = exponent([&](int n) {
    return probe_I(inst.pair, inst.pair.psi, n, 1, 0, K, dictA).value;
  });
  double expI1A = exponent([&](int n) {
    return probe_I(inst.pair, inst.pair.psi, n, 1, 1, K, dictA).value;
  });
  double expI1B = exponent([&](int n) {
    return probe_I(inst.pair, inst.pair.psi, n, 1, 1, K, dictB).value;
  });

  d["exponent_J_m1_p0"] = expJ;
  d["exponent_I_m1_p0"] = expI0;
  d["exponent_I_m1_p1_dictA"] = expI1A;
  d["exponent_I_m1_p1_dictB"] = expI1B;
  d["dict_stability"] = std::abs(expI1A - expI1B);
  d["bound_exponent"] = 1.3;
  d["bound_stability"] = 0.2;
  r.pass = expJ <= 1.3 && expI0 <= 1.3 && expI1A <= 1.3 && expI1B <= 1.3 &&
           std::abs(expI1A - expI1B) <= 0.2;
  r.details = std::move(d);
  return r;
}

// ---------------------------------------------------------------- criterion 8
CriterionResult c8_lebesgue(std::uint64_t seed) {
  CriterionResult r;
  r.id = 8;
  r.name = "Lebesgue-point analysis: averaging ratios and kernels";
  json d;
  r.pass = true;

  GridDomain g = make_ball_grid(1, 513);
  const double h = g.h();
  auto inst = gallery_instantiate("loglog", g, {{"delta", 0.1}});
  const ScalarField& phi = inst.pair.phi;

  // 20 random points where the entry is smooth (0.1 <= |z| <= 0.6)
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-0.6, 0.6);
  std::vector<Index> pts;
  while (pts.size() < 20) {
    double x = uni(rng), y = uni(rng);
    double rr = std::sqrt(x * x + y * y);
    if (rr < 0.1 || rr > 0.6) continue;
    std::array<int, 4> m{int(std::lround((x + 1) / h)), int(std::lround((y + 1) / h)), 0, 0};
    Index id = g.flat_index(m);
    if (std::find(pts.begin(), pts.end(), id) == pts.end()) pts.push_back(id);
  }

  std::vector<double> eps_list{4 * h, 8 * h, 16 * h, 32 * h};
  double worst_slope = std::numeric_limits<double>::infinity();
  for (Index p : pts) {
    auto samples = lebesgue_ratio(phi, p, eps_list);
    std::vector<double> xs, ys;
    for (auto& s : samples) {
      xs.push_back(std::log(s.eps));
      ys.push_back(std::log(std::max(s.ratio, 1e-300)));
    }
    worst_slope = std::min(worst_slope, fit_line(xs, ys).slope);
  }
  d["smooth_points"] = pts.size();
  d["worst_loglog_slope"] = worst_slope;
  r.pass = r.pass && worst_slope >= 0.9;

  {
    ScalarField hs(g, 0.0);
    for (Index id = 0; id < g.num_nodes(); ++id) {
      auto p = g.point(id);
      hs.set(id, p[0] >= 0 ? 1.0 : 0.0);
    }
    auto s = lebesgue_ratio(hs, g.origin(), {0.25});
    d["halfspace_A"] = s[0].ratio;
    d["halfspace_err"] = std::abs(s[0].ratio - 0.5);
    r.pass = r.pass && std::abs(s[0].ratio - 0.5) <= 0.01;
  }

  {
    // divergence at the singular point, against the radial-quadrature oracle
    ScalarField phi0 = phi;
    phi0.set(g.origin(), 0.0);  // canonical finite placeholder
    const double A = 2 * std::log(2.0), s_ = 0.4;
    std::vector<double> eps{0.125, 0.0625};
    auto samples = lebesgue_ratio(phi0, g.origin(), eps);
    json rows = json::array();
    bool ok = samples[1].ratio > samples[0].ratio;  // grows as eps shrinks
    for (std::size_t i = 0; i < eps.size(); ++i) {
      double oracle = radial_volume_integral(
                          1, [&](double rr) { return std::pow(A - 2 * std::log(rr), s_); }, 1e-12,
                          eps[i]) /
                      (kPi * eps[i] * eps[i]);
      rows.push_back({{"eps", eps[i]}, {"A", samples[i].ratio}, {"oracle", oracle}});
      ok = ok && rel_err(samples[i].ratio, oracle) <= 0.05;
    }
    d["singular_point"] = rows;
    r.pass = r.pass && ok;
  }

  {
    auto rows = mollifier_convergence(phi, pts, {4 * h, 32 * h});
    // per point: cross-kernel deviation at the fine scale well below the coarse
    bool ok = true;
    double worst_fine = 0;
    for (Index p : pts) {
      double dev_fine = -1, dev_coarse = -1;
      for (auto& row : rows) {
        if (row.point != p) continue;
        if (std::abs(row.eps - 4 * h) < 1e-12) dev_fine = row.cross_deviation;
        if (std::abs(row.eps - 32 * h) < 1e-12) dev_coarse = row.cross_deviation;
      }
      if (dev_fine < 0 || dev_coarse < 0 || std::isnan(dev_fine) || std::isnan(dev_coarse)) {
        ok = false;
        continue;
      }
      worst_fine = std::max(worst_fine, dev_fine);
      if (dev_fine > 0.6 * dev_coarse + 1e-9) ok = false;
    }
    d["cross_kernel_worst_fine"] = worst_fine;
    d["cross_kernel_ok"] = ok;
    r.pass = r.pass && ok;
  }
  r.details = std::move(d);
  return r;
}

// ---------------------------------------------------------------- criterion 9
CriterionResult c9_alpha2() {
  CriterionResult r;
  r.id = 9;
  r.name = "alpha > 2 failure witness: diverging circle-mean ratios";
  json d;

  GridDomain g = make_ball_grid(1, 513);
  std::vector<double> radii;
  for (int e = 2; e <= 12; ++e) radii.push_back(std::pow(2.0, -e));
  Alpha2Witness w = alpha2_failure_witness(g, 0.1, 3.0, radii);
  d["beta"] = w.beta;
  d["inconclusive"] = w.inconclusive;
  d["strictly_increasing"] = w.strictly_increasing;
  d["max_rel_err_vs_oracle"] = w.max_rel_err;
  json rows = json::array();
  for (auto& row : w.rows)
    rows.push_back({{"r", row.r}, {"ratio", row.ratio}, {"oracle", row.oracle_ratio}});
  d["rows"] = rows;
  r.pass = !w.inconclusive && w.strictly_increasing && w.max_rel_err <= 0.02;
  r.details = std::move(d);
  return r;
}

// --------------------------------------------------------------- criterion 10
CriterionResult c10_exp_moment() {
  CriterionResult r;
  r.id = 10;
  r.name = "weak Moser-Trudinger moments for 5 normalized pairs";
  json d;
  r.pass = true;

  struct Entry {
    const char* name;
    GalleryParams params;
  };
  std::vector<Entry> entries{{"constant", {{"c", 1.0}}},
                             {"linear", {}},
                             {"loglog", {{"delta", 0.1}}},
                             {"loglog", {{"delta", 0.2}}},
                             {"log_floor", {{"c", 3.0}}}};
  json rows = json::array();
  for (auto& e : entries) {
    double v[2];
    int ns[2] = {257, 513};
    for (int i = 0; i < 2; ++i) {
      GridDomain g = make_ball_grid(1, ns[i]);
      auto inst = gallery_instantiate(e.name, g, e.params);
      WStarPair norm = normalize_pair(inst.pair, g);
      ExpMoment m = exp_moment(norm.phi, ball_mask(g, 0.75), 0.25, 1.5);
      if (m.divergent) r.pass = false;
      v[i] = m.value;
    }
    double stab = std::abs(v[1] - v[0]) / std::max(std::abs(v[0]), std::abs(v[1]));
    rows.push_back({{"entry", e.name},
                    {"value_n257", v[0]},
                    {"value_n513", v[1]},
                    {"rel_change", stab}});
    if (!(stab <= 0.05)) r.pass = false;
  }
  d["pairs"] = rows;
  d["c"] = 0.25;
  d["alpha"] = 1.5;
  d["tolerance"] = 0.05;
  r.details = std::move(d);
  return r;
}

// --------------------------------------------------------------- criterion 11
CriterionResult c11_determinism(std::uint64_t seed) {
  CriterionResult r;
  r.id = 11;
  r.name = "determinism: repeated runs produce byte-identical reports";
  json d;

  auto produce = [&]() {
    GridDomain g = make_ball_grid(1, 129);
    auto inst = gallery_instantiate("loglog", g, {{"delta", 0.1}});
    StarNorm sn = star_norm(inst.pair, g);
    EnvelopeOptions eo;
    eo.tol = 1e-9;
    eo.method = EnvelopeMethod::sor;
    EnvelopeResult env = relative_extremal(ball_mask(g, 0.3), g, eo);
    auto mol = mollify(inst.pair.phi, UnityKernel::make(g, KernelKind::smooth_radial, 4 * g.h()));

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> pick(0, g.num_nodes() - 1);
    CsvWriter csv({"node", "value"});
    for (int i = 0; i < 16; ++i) {
      Index id = pick(rng);
      csv.add_row({std::to_string(id),
                   format_number(mol.field.finite(id) ? mol.field[id] : -1.0)});
    }
    json rep;
    rep["star_norm"] = format_number(sn.value);
    rep["mass"] = format_number(sn.mass);
    rep["envelope_residual"] = format_number(env.residual);
    rep["envelope_iterations"] = env.iterations;
    rep["csv"] = csv.str();
    return rep.dump(2);
  };

  std::string first = produce();
  std::string second = produce();
  d["bytes"] = first.size();
  d["identical"] = first == second;
  r.pass = first == second;
  r.details = std::move(d);
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  switch (id) {
    case 1: return c1_normalization();
    case 2: return c2_extremal();
    case 3: return c3_capacity();
    case 4: return c4_loglog_mass();
    case 5: return c5_majorant();
    case 6: return c6_capacity_decay();
    case 7: return c7_energy(opts.seed);
    case 8: return c8_lebesgue(opts.seed);
    case 9: return c9_alpha2();
    case 10: return c10_exp_moment();
    case 11: return c11_determinism(opts.seed);
    default: throw GridError("unknown acceptance criterion id " + std::to_string(id));
  }
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 11; ++id) {
    CriterionResult r = run_criterion(id, opts);
    if (opts.on_result) opts.on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace pplab
