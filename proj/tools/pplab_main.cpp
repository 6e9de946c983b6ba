// pplab: command-line front end for the pluripotential grid laboratory.
//
// Subcommands: capacity, envelope, majorant, energy, lebesgue, wstar,
// verify, gallery. Every run emits report.json and <subcommand>.csv under
// --out; identical config + seed gives byte-identical outputs.
// Exit codes: 0 pass, 1 check failure, 2 config error, 3 non-convergence.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <random>
#include <iostream>

#include "pplab/acceptance.hpp"
#include "pplab/calculus.hpp"
#include "pplab/capacity.hpp"
#include "pplab/energy.hpp"
#include "pplab/envelope.hpp"
#include "pplab/gallery.hpp"
#include "pplab/lebesgue.hpp"
#include "pplab/majorant.hpp"
#include "pplab/parallel.hpp"
#include "pplab/report.hpp"
#include "pplab/wstar.hpp"

namespace fs = std::filesystem;
using namespace pplab;

namespace {

struct Common {
  std::string out_dir = "out";
  int threads = 0;
  int resolution = 257;
  int k = 1;
  std::uint64_t seed = 20240901;
  std::vector<std::string> params;
  std::string entry = "loglog";
};

GalleryParams parse_params(const std::vector<std::string>& kv) {
  GalleryParams p;
  for (const auto& s : kv) {
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw GridError("bad --param '" + s + "' (expected key=value)");
    p[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
  }
  return p;
}

struct Check {
  std::string name;
  bool pass;
  double value;
  double bound;
  std::string oracle;
};

int emit(const Common& c, const std::string& sub, json results, const std::vector<Check>& checks,
         const std::string& csv, bool solver_failed = false) {
  bool all = true;
  json jc = json::array();
  for (const auto& ch : checks) {
    all = all && ch.pass;
    jc.push_back({{"name", ch.name},
                  {"pass", ch.pass},
                  {"value", format_number(ch.value)},
                  {"bound", format_number(ch.bound)},
                  {"oracle", ch.oracle}});
  }
  json rep;
  rep["subcommand"] = sub;
  rep["config"] = {{"resolution", c.resolution}, {"k", c.k},     {"entry", c.entry},
                   {"seed", c.seed},             {"threads", c.threads}};
  rep["results"] = std::move(results);
  rep["checks"] = std::move(jc);
  rep["pass"] = all && !solver_failed;

  fs::create_directories(c.out_dir);
  write_text_file((fs::path(c.out_dir) / "report.json").string(), rep.dump(2) + "\n");
  if (!csv.empty()) write_text_file((fs::path(c.out_dir) / (sub + ".csv")).string(), csv);
  std::cout << rep.dump(2) << "\n";
  if (solver_failed) return 3;
  return all ? 0 : 1;
}

int cmd_envelope(const Common& c, double radius, double sup_tol) {
  GridDomain g = make_ball_grid(c.k, c.resolution);
  EnvelopeOptions eo;
  eo.tol = 1e-10;
  eo.method = EnvelopeMethod::sor;
  EnvelopeResult env = relative_extremal(ball_mask(g, radius), g, eo);

  const double L = std::log(1.0 / radius);
  double sup = 0;
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!g.is_interior(id)) continue;
    double r = std::sqrt(g.radius2(id));
    double ex = r > 0 ? std::max(-1.0, std::log(r) / L) : -1.0;
    sup = std::max(sup, std::abs(env.u[id] - ex));
  }
  CsvWriter csv({"n_per_axis", "radius", "sup_err", "iterations", "residual", "psh_violation"});
  csv.add_row_numbers({double(c.resolution), radius, sup, double(env.iterations), env.residual,
                       env.psh_violation});
  json res;
  res["sup_err"] = sup;
  res["iterations"] = env.iterations;
  res["residual"] = env.residual;
  res["psh_violation"] = env.psh_violation;
  std::vector<Check> checks{{"closed_form_sup_err", sup <= sup_tol, sup, sup_tol,
                             "u*_E = max(-1, log|z|/log(1/r))"}};
  return emit(c, "envelope", std::move(res), checks, csv.str(), !env.converged);
}

int cmd_capacity(const Common& c, double radius, bool decay, double lambda, int levels) {
  GridDomain g = make_ball_grid(c.k, c.resolution);
  CapacityOptions co;
  co.tol = 1e-10;
  if (!decay) {
    CapacityEstimate est = cap_bt(ball_mask(g, radius), g, co);
    const double exact = std::pow(1.0 / std::log(1.0 / radius), g.k());
    CsvWriter csv({"n_per_axis", "radius", "cap", "cap_raw", "exact", "residual",
                   "mass_outside_E", "clipped_mass"});
    csv.add_row_numbers({double(c.resolution), radius, est.value, est.value_raw, exact,
                         est.residual, est.mass_outside_E, est.clipped_mass});
    json res;
    res["cap"] = est.value;
    res["exact"] = exact;
    res["rel_err"] = std::abs(est.value - exact) / exact;
    res["mass_outside_E"] = est.mass_outside_E;
    std::vector<Check> checks{{"mass_localization", est.mass_outside_E <= 0.10,
                               est.mass_outside_E, 0.10, "MA mass concentrates on closure(E)"}};
    return emit(c, "capacity", std::move(res), checks, csv.str(), !est.converged);
  }

  // level-set decay experiment on the clipped_log entry
  GalleryParams p = parse_params(c.params);
  if (!p.count("c")) p["c"] = 8.0;
  if (!p.count("M")) p["M"] = 33.0;
  auto inst = gallery_instantiate("clipped_log", g, p);
  Mask K = ball_mask(g, 0.85);
  ScalarField zero_psi(g, 0.0);
  auto masks = level_sets(inst.pair.phi, zero_psi, K, lambda, levels);
  std::vector<std::pair<int, double>> caps;
  CsvWriter csv({"n", "nodes", "cap"});
  for (int n = 1; n <= levels; ++n) {
    double v = masks[n - 1].empty() ? 0.0 : cap_bt(masks[n - 1], g, co).value;
    caps.emplace_back(n, v);
    csv.add_row_numbers({double(n), double(masks[n - 1].count()), v});
  }
  DecayFit fit = cap_decay_fit(caps);
  const double bound = std::log(lambda / 4.0) + 0.1;
  json res;
  res["slope"] = fit.slope;
  res["intercept"] = fit.intercept;
  res["r2"] = fit.r2;
  res["dropped"] = fit.dropped;
  std::vector<Check> checks{
      {"slope_bound", fit.slope <= bound, fit.slope, bound, "log Cap(K_n) vs n least squares"},
      {"fit_quality", fit.r2 >= 0.9, fit.r2, 0.9, "r^2 of the fit"}};
  return emit(c, "capacity", std::move(res), checks, csv.str());
}

int cmd_majorant(const Common& c, double alpha, double lambda, int N, double tol) {
  GridDomain g = make_ball_grid(c.k, c.resolution);
  auto inst = gallery_instantiate(c.entry, g, parse_params(c.params));
  WStarPair norm = normalize_pair(inst.pair, g);
  Mask K = ball_mask(g, 0.7);
  MajorantParams mp;
  mp.alpha = alpha;
  mp.lambda = lambda;
  mp.N = N;
  mp.tol = tol;
  mp.method = EnvelopeMethod::sor;
  MajorantBundle b = build_majorant(norm, K, mp);
  BudgetReport budget = budget_sets(b.u_fields, alpha, 4);

  CsvWriter csv({"n", "level_nodes", "budget_leb"});
  for (int n = 1; n <= N; ++n)
    csv.add_row_numbers({double(n), double(b.k_masks[n - 1].count()), budget.leb[n - 1]});
  json res;
  res["lambda"] = b.lambda;
  res["psh_residual"] = b.psh_residual_u;
  res["certified_nodes"] = b.certified_nodes;
  res["violation_fraction"] = b.violation_fraction;
  res["global_bound_violations"] = b.global_bound_violations;
  res["l1_norm_on_K"] = b.l1_norm_on_K;
  res["finiteness_witness"] = b.finiteness_witness;
  res["exception_nodes"] = b.exception_mask.count();
  res["budget_tail_sum"] = budget.tail_sum_from_n0;
  res["ball_measure"] = budget.ball_measure;
  std::vector<Check> checks{
      {"psh_residual", b.psh_residual_u <= N * tol, b.psh_residual_u, N * tol,
       "sum of psh terms stays psh within the summed envelope tolerance"},
      {"claim_violation_fraction", b.violation_fraction <= 1e-3, b.violation_fraction, 1e-3,
       "2^alpha u <= -phi^alpha on the certified region"},
      {"budget_nondegenerate", budget.nondegenerate,
       budget.tail_sum_from_n0, budget.ball_measure, "sum Leb(B_n) < Leb(ball) from n0=4"}};
  return emit(c, "majorant", std::move(res), checks, csv.str(), !b.converged);
}

int cmd_energy(const Common& c, int n_max, int m) {
  GridDomain g = make_ball_grid(c.k, c.resolution);
  auto inst = gallery_instantiate(c.entry, g, parse_params(c.params));
  Mask K = ball_mask(g, 0.7);
  TestDictionary dictA = TestDictionary::standard(g, 0);
  TestDictionary dictB = TestDictionary::standard(g, 1, c.seed);
  dictA.validate(g);
  dictB.validate(g);

  CsvWriter csv({"n", "J_m_p0", "I_m_p0", "I_m_p1_dictA", "I_m_p1_dictB"});
  std::vector<double> xs, yJ, yI0, yA, yB;
  for (int n = 1; n <= n_max; ++n) {
    double j0 = probe_J(inst.pair, inst.pair.psi, n, m, 0, K, dictA).value;
    double i0 = probe_I(inst.pair, inst.pair.psi, n, m, 0, K, dictA).value;
    double i1a = probe_I(inst.pair, inst.pair.psi, n, m, 1, K, dictA).value;
    double i1b = probe_I(inst.pair, inst.pair.psi, n, m, 1, K, dictB).value;
    csv.add_row_numbers({double(n), j0, i0, i1a, i1b});
    if (j0 > 0 && i0 > 0 && i1a > 0 && i1b > 0) {
      xs.push_back(std::log(double(n)));
      yJ.push_back(std::log(j0));
      yI0.push_back(std::log(i0));
      yA.push_back(std::log(i1a));
      yB.push_back(std::log(i1b));
    }
  }
  auto slope = [&](const std::vector<double>& ys) {
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
    }
    double mx = sx / xs.size(), my = sy / xs.size(), sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
  };
  double eJ = slope(yJ), eI0 = slope(yI0), eA = slope(yA), eB = slope(yB);
  json res;
  res["exponent_J"] = eJ;
  res["exponent_I_p0"] = eI0;
  res["exponent_I_p1_dictA"] = eA;
  res["exponent_I_p1_dictB"] = eB;
  std::vector<Check> checks{
      {"exponent_J", eJ <= 1.3, eJ, 1.3, "growth of the lower-bound probes"},
      {"exponent_I_p1", std::max(eA, eB) <= 1.3, std::max(eA, eB), 1.3, "same"},
      {"dict_stability", std::abs(eA - eB) <= 0.2, std::abs(eA - eB), 0.2,
       "exponent agreement across dictionaries"}};
  return emit(c, "energy", std::move(res), checks, csv.str());
}

int cmd_lebesgue(const Common& c, int n_points) {
  GridDomain g = make_ball_grid(c.k, c.resolution);
  auto inst = gallery_instantiate(c.entry, g, parse_params(c.params));
  const double h = g.h();

  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> uni(-0.6, 0.6);
  std::vector<Index> pts;
  while (static_cast<int>(pts.size()) < n_points) {
    std::array<int, 4> m{0, 0, 0, 0};
    double r2 = 0;
    for (int a = 0; a < g.dim(); ++a) {
      double x = uni(rng);
      m[a] = int(std::lround((x + 1) / h));
      double snapped = -1 + h * m[a];
      r2 += snapped * snapped;
    }
    if (r2 < 0.01 || r2 > 0.36) continue;
    Index id = g.flat_index(m);
    if (std::find(pts.begin(), pts.end(), id) == pts.end()) pts.push_back(id);
  }

  std::vector<double> eps{4 * h, 8 * h, 16 * h, 32 * h};
  CsvWriter csv({"point", "eps", "A", "err_indicator", "err_smooth", "cross_deviation"});
  double worst_slope = std::numeric_limits<double>::infinity();
  auto conv = mollifier_convergence(inst.pair.phi, pts, eps);
  for (Index p : pts) {
    auto samples = lebesgue_ratio(inst.pair.phi, p, eps);
    std::vector<double> xs, ys;
    for (auto& s : samples) {
      xs.push_back(std::log(s.eps));
      ys.push_back(std::log(std::max(s.ratio, 1e-300)));
      double ei = 0, es = 0, cd = 0;
      for (auto& row : conv)
        if (row.point == p && std::abs(row.eps - s.eps) < 1e-12) {
          ei = row.err_indicator;
          es = row.err_smooth;
          cd = row.cross_deviation;
        }
      csv.add_row_numbers({double(p), s.eps, s.ratio, ei, es, cd});
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
    }
    double mx = sx / xs.size(), my = sy / xs.size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    worst_slope = std::min(worst_slope, sxy / sxx);
  }
  json res;
  res["points"] = pts.size();
  res["worst_loglog_slope"] = worst_slope;
  std::vector<Check> checks{{"averaging_slope", worst_slope >= 0.9, worst_slope, 0.9,
                             "A(x,eps) decays like eps at Lebesgue points"}};
  return emit(c, "lebesgue", std::move(res), checks, csv.str());
}

int cmd_wstar(const Common& c, bool poisson, double exp_c, double exp_alpha) {
  GridDomain g = make_ball_grid(c.k, c.resolution);
  GalleryParams p = parse_params(c.params);
  if (poisson) p["poisson"] = 1.0;
  auto inst = gallery_instantiate(c.entry, g, p);
  StarNorm sn = star_norm(inst.pair, g);
  DominationReport dom =
      domination_check(inst.pair.phi, inst.pair.psi, interior_mask(g), 10 * g.h() * g.h());
  WStarPair norm = normalize_pair(inst.pair, g);
  ExpMoment mom = exp_moment(norm.phi, ball_mask(g, 0.75), exp_c, exp_alpha);

  CsvWriter csv({"n_per_axis", "star_norm", "l1_term", "mass", "mass_term",
                 "domination_violation_fraction", "exp_moment"});
  csv.add_row_numbers({double(c.resolution), sn.value, sn.l1_term, sn.mass, sn.mass_term,
                       dom.violating_fraction, mom.value});
  json res;
  res["star_norm"] = sn.value;
  res["l1_term"] = sn.l1_term;
  res["mass"] = sn.mass;
  res["mass_term"] = sn.mass_term;
  res["norm_kind"] = "witness (upper bound with the supplied dominator)";
  res["domination"] = {{"checked", dom.checked},
                       {"violations", dom.violations},
                       {"fraction", dom.violating_fraction},
                       {"worst", dom.worst}};
  res["exp_moment"] = mom.divergent ? std::string("inf") : format_number(mom.value);
  std::vector<Check> checks{{"domination_fraction", dom.violating_fraction <= 1e-3,
                             dom.violating_fraction, 1e-3,
                             "hessian(psi) - gradient_form(phi) PSD node-wise"}};
  return emit(c, "wstar", std::move(res), checks, csv.str());
}

int cmd_verify(const Common& c) {
  AcceptanceOptions ao;
  ao.seed = c.seed;
  ao.on_result = [](const CriterionResult& r) {
    std::cout << "criterion " << r.id << " [" << (r.pass ? "PASS" : "FAIL") << "] " << r.name
              << "\n"
              << std::flush;
  };
  auto results = run_acceptance(ao);
  CsvWriter csv({"id", "name", "pass"});
  json jr = json::array();
  bool all = true;
  for (auto& r : results) {
    csv.add_row({std::to_string(r.id), r.name, r.pass ? "1" : "0"});
    jr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"details", r.details}});
    all = all && r.pass;
  }
  json res;
  res["criteria"] = std::move(jr);
  std::vector<Check> checks{{"all_criteria", all, all ? 1.0 : 0.0, 1.0, "acceptance suite"}};
  return emit(c, "verify", std::move(res), checks, csv.str());
}

int cmd_gallery(const Common& c, const std::string& action, const std::string& name) {
  if (action == "list") {
    json out = json::array();
    for (auto& e : gallery_list())
      out.push_back({{"name", e.name},
                     {"summary", e.summary},
                     {"params", e.params},
                     {"k1", e.k1},
                     {"k2", e.k2}});
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  if (action == "show") {
    GridDomain g = make_ball_grid(c.k, c.resolution);
    auto inst = gallery_instantiate(name, g, parse_params(c.params));
    DominationReport dom =
        domination_check(inst.pair.phi, inst.pair.psi, interior_mask(g), 10 * g.h() * g.h());
    json out;
    out["name"] = inst.name;
    json facts = json::array();
    for (auto& f : inst.facts)
      facts.push_back(
          {{"name", f.name}, {"value", f.value}, {"rel_tol", f.rel_tol}, {"oracle", f.oracle}});
    out["facts"] = std::move(facts);
    out["domination_fraction"] = dom.violating_fraction;
    out["alpha_range"] = {inst.alpha_min, inst.alpha_max};
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  throw GridError("gallery: action must be list or show");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pplab: grid laboratory for plurisubharmonic envelopes, capacities and "
               "Lebesgue-point analysis"};
  app.set_config("--config");
  app.fallthrough();  // global flags may follow the subcommand

  Common c;
  app.add_option("--out", c.out_dir, "output directory")->envname("PPLAB_OUT");
  app.add_option("--threads", c.threads, "worker cap (0 = hardware)")->envname("PPLAB_THREADS");
  app.add_option("--resolution", c.resolution, "nodes per real axis (odd, >= 17)")
      ->envname("PPLAB_RESOLUTION");
  app.add_option("--seed", c.seed, "random seed for sampled points/shifts")
      ->envname("PPLAB_SEED");
  app.add_option("--k", c.k, "complex dimension (1 or 2)")->envname("PPLAB_K");
  app.add_option("--entry", c.entry, "gallery entry name");
  app.add_option("--param", c.params, "entry parameter key=value (repeatable)");

  double radius = 0.3, sup_tol = 1e-2, alpha = 1.5, lambda = 0.0, tol = 1e-4;
  double exp_c = 0.25, exp_alpha = 1.5;
  int levels = 8, n_max = 16, m_deg = 1, n_points = 20;
  bool decay = false, poisson = false;
  std::string gallery_action = "list", gallery_name;

  auto* env = app.add_subcommand("envelope", "relative extremal function vs closed form");
  env->add_option("--radius", radius, "disc/ball radius of E");
  env->add_option("--sup-tol", sup_tol, "closed-form sup-error bound");

  auto* cap = app.add_subcommand("capacity", "Bedford-Taylor capacity / decay of level sets");
  cap->add_option("--radius", radius, "disc/ball radius of E");
  cap->add_flag("--decay", decay, "run the level-set decay experiment");
  cap->add_option("--lambda", lambda, "level threshold base (decay mode)");
  cap->add_option("--levels", levels, "number of levels (decay mode)");

  auto* maj = app.add_subcommand("majorant", "truncated psh majorant construction");
  maj->add_option("--alpha", alpha, "exponent in [1,2)");
  maj->add_option("--lambda", lambda, "series base (0 = midpoint default)");
  maj->add_option("--levels", levels, "truncation N");
  maj->add_option("--tol", tol, "envelope tolerance budget");

  auto* ene = app.add_subcommand("energy", "probe growth over the level index");
  ene->add_option("--n-max", n_max, "largest level index");
  ene->add_option("--m", m_deg, "moment degree (<= 3)");

  auto* leb = app.add_subcommand("lebesgue", "averaging ratios and mollifier convergence");
  leb->add_option("--points", n_points, "number of sampled points");

  auto* wst = app.add_subcommand("wstar", "witness norm, domination, exponential moment");
  wst->add_flag("--poisson", poisson, "solve the dominator instead of the analytic one (k=1)");
  wst->add_option("--exp-c", exp_c, "moment constant");
  wst->add_option("--exp-alpha", exp_alpha, "moment exponent in [1,2)");

  auto* ver = app.add_subcommand("verify", "run the full acceptance suite");

  auto* gal = app.add_subcommand("gallery", "list or show registered analytic pairs");
  gal->add_option("action", gallery_action, "list | show");
  gal->add_option("name", gallery_name, "entry name (show)");

  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  set_max_threads(c.threads);
  try {
    if (app.got_subcommand(env)) {
      if (sup_tol == 1e-2 && c.k == 2) sup_tol = 3e-2;
      return cmd_envelope(c, radius, sup_tol);
    }
    if (app.got_subcommand(cap))
      return cmd_capacity(c, radius, decay, lambda > 0 ? lambda : 3.0, decay ? 5 : levels);
    if (app.got_subcommand(maj)) return cmd_majorant(c, alpha, lambda, levels, tol);
    if (app.got_subcommand(ene)) return cmd_energy(c, n_max, m_deg);
    if (app.got_subcommand(leb)) return cmd_lebesgue(c, n_points);
    if (app.got_subcommand(wst)) return cmd_wstar(c, poisson, exp_c, exp_alpha);
    if (app.got_subcommand(ver)) return cmd_verify(c);
    if (app.got_subcommand(gal)) return cmd_gallery(c, gallery_action, gallery_name);
  } catch (const GridError& e) {
    json err;
    err["error"] = e.what();
    std::cout << err.dump(2) << "\n";
    return 2;
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    std::cout << err.dump(2) << "\n";
    return 2;
  }
  return 2;
}
