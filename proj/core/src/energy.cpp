#include "pplab/energy.hpp"

#include <cmath>
#include <random>

#include "pplab/envelope.hpp"

namespace pplab {

namespace {

constexpr double kPhiClip = 1e3;

ScalarField sq_dist_member(const GridDomain& g, const std::array<double, 4>& a, double scale) {
  ScalarField v(g, 0.0);
  for (Index id = 0; id < g.num_nodes(); ++id) {
    auto p = g.point(id);
    double d2 = 0;
    for (int ax = 0; ax < g.dim(); ++ax) d2 += (p[ax] - a[ax]) * (p[ax] - a[ax]);
    v.set(id, d2 * scale);
  }
  return v;
}

ScalarField log_peak_member(const GridDomain& g, const std::array<double, 4>& a, double div) {
  double amax = 0;
  for (int ax = 0; ax < g.dim(); ++ax) amax += a[ax] * a[ax];
  const double norm = 1.0 + std::log(1.0 + std::sqrt(amax)) / div;
  ScalarField v(g, 0.0);
  for (Index id = 0; id < g.num_nodes(); ++id) {
    auto p = g.point(id);
    double d2 = 0;
    for (int ax = 0; ax < g.dim(); ++ax) d2 += (p[ax] - a[ax]) * (p[ax] - a[ax]);
    double val = d2 > 0 ? std::max(0.0, 1.0 + 0.5 * std::log(d2) / div) / norm : 0.0;
    v.set(id, val);
  }
  return v;
}

}  // namespace

TestDictionary TestDictionary::standard(const GridDomain& g, int variant, std::uint64_t seed) {
  TestDictionary d;
  auto push = [&](ScalarField f, std::string name) {
    d.members.push_back(std::move(f));
    d.names.push_back(std::move(name));
  };
  if (variant == 0) {
    {
      ScalarField v(g, 0.0);
      for (Index id = 0; id < g.num_nodes(); ++id) v.set(id, g.radius2(id));
      push(std::move(v), "sqnorm");
    }
    push(sq_dist_member(g, {0.5, 0, 0, 0}, 0.25), "sqdist+x");
    push(sq_dist_member(g, {-0.5, 0, 0, 0}, 0.25), "sqdist-x");
    push(sq_dist_member(g, {0, 0.5, 0, 0}, 0.25), "sqdist+y");
    const double div = g.k() == 1 ? 3.0 : 2.0;
    push(log_peak_member(g, {0, 0, 0, 0}, div), "logpeak0");
    push(log_peak_member(g, {0.3, 0, 0, 0}, div), "logpeak+x");
    {
      ScalarField v(g, 0.5);
      push(std::move(v), "const0.5");
    }
  } else {
    {
      ScalarField v(g, 0.0);
      for (Index id = 0; id < g.num_nodes(); ++id) {
        double r2 = g.radius2(id);
        v.set(id, r2 * r2);
      }
      push(std::move(v), "sqnorm2");
    }
    std::mt19937_64 rng(seed ? seed : 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> uni(-0.3, 0.3);
    for (int i = 0; i < 3; ++i) {
      std::array<double, 4> a{0, 0, 0, 0};
      for (int ax = 0; ax < g.dim(); ++ax) a[ax] = uni(rng);
      push(sq_dist_member(g, a, 0.25), "sqdist-r" + std::to_string(i));
    }
    const double div = g.k() == 1 ? 2.5 : 2.0;
    {
      std::array<double, 4> a{0, 0, 0, 0};
      a[0] = uni(rng);
      push(log_peak_member(g, a, div), "logpeak-r");
    }
    {
      ScalarField v(g, 0.0);
      push(std::move(v), "const0");
    }
  }
  return d;
}

void TestDictionary::validate(const GridDomain& g) const {
  Mask ball = full_ball(g);
  Mask interior(g);
  for (Index id = 0; id < g.num_nodes(); ++id)
    if (g.is_interior(id)) interior.set(id, true);
  const double tol = 10 * g.h() * g.h();
  for (std::size_t i = 0; i < members.size(); ++i) {
    const ScalarField& v = members[i];
    for (Index id = 0; id < g.num_nodes(); ++id) {
      if (!ball.contains(id)) continue;
      if (!v.finite(id) || v[id] < 0.0 || v[id] > 1.0)
        throw GridError("dictionary member out of [0,1]: " + names[i]);
    }
    double r = psh_residual(v, DirectionSet::standard(g.k()), interior);
    if (r > tol)
      throw GridError("dictionary member fails the psh check: " + names[i]);
  }
}

ScalarField h_level(const ScalarField& psi, int n) {
  if (n < 1) throw GridError("h_level: n must be >= 1");
  const GridDomain& g = psi.grid();
  ScalarField h(g, 0.0);
  for (Index id = 0; id < g.num_nodes(); ++id) {
    switch (psi.flag(id)) {
      case ValueFlag::finite:
        if (psi[id] > 1e-12) throw GridError("h_level: psi must be <= 0");
        h.set(id, 1.0 + std::max(psi[id], -double(n)) / double(n));
        break;
      case ValueFlag::neg_inf:
        h.set(id, 0.0);
        break;
      case ValueFlag::undefined:
        h.set_undefined(id);
        break;
    }
  }
  return h;
}

TCurrentResult t_current(const ScalarField& psi, int n, double tol) {
  const GridDomain& g = psi.grid();
  ScalarField hn = h_level(psi, n);
  ScalarField hn2(g, 0.0);
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (hn.finite(id))
      hn2.set(id, hn[id] * hn[id]);
    else
      hn2.set_undefined(id);
  }

  TCurrentResult out;
  out.T = complex_hessian(hn2);
  // T = (dd^c h^2)/2
  HermitianField grad = gradient_form(hn);
  HermitianField hess = complex_hessian(hn);

  Index bad_grad = 0, bad_hdd = 0;
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!g.is_interior(id)) continue;
    if (!out.T.defined(id) || !grad.defined(id) || !hess.defined(id)) continue;
    ++out.checked;
    const double t11 = 0.5 * out.T.a11(id), t22 = 0.5 * out.T.a22(id);
    const std::complex<double> t12 = 0.5 * out.T.a12(id);
    auto psd = [&](double a11, double a22, std::complex<double> a12) {
      if (g.k() == 1) return a11 >= -tol;
      return (a11 + a22) >= -tol && (a11 * a22 - std::norm(a12)) >= -tol;
    };
    if (!psd(t11 - grad.a11(id), t22 - grad.a22(id), t12 - grad.a12(id))) ++bad_grad;
    const double h0 = hn[id];
    if (!psd(t11 - h0 * hess.a11(id), t22 - h0 * hess.a22(id), t12 - h0 * hess.a12(id)))
      ++bad_hdd;
  }
  if (out.checked) {
    out.grad_violation_fraction = double(bad_grad) / double(out.checked);
    out.hdd_violation_fraction = double(bad_hdd) / double(out.checked);
  }
  // halve T so it is dd^c h^2 / 2 for downstream use
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (out.T.defined(id)) out.T.set(id, 0.5 * out.T.a11(id), 0.5 * out.T.a22(id),
                                     0.5 * out.T.a12(id));
  }
  return out;
}

static double wedge_density_k2(const HermitianField& A, const HermitianField& B, Index id) {
  return norms::k2_wedge_density *
         (A.a11(id) * B.a22(id) + A.a22(id) * B.a11(id) -
          2.0 * std::real(A.a12(id) * std::conj(B.a12(id))));
}

static ProbeResult probe_impl(const WStarPair& pair, const ScalarField& psi, int n, int m,
                              int p_deg, const Mask& K, const TestDictionary& dict,
                              bool with_h2) {
  const GridDomain& g = pair.phi.grid();
  const int k = g.k();
  if (m < 0 || m > 3) throw GridError("probe: m must be in 0..3 (overflow guard)");
  const int max_p = with_h2 ? k : k - 1;
  if (p_deg < 0 || p_deg > max_p) throw GridError("probe: p out of range");
  if (p_deg > 0 && dict.members.empty()) throw GridError("probe: dictionary is empty");

  // the current factor: T_n for J; none for I (omega fills)
  TCurrentResult tc;
  const HermitianField* tn = nullptr;
  if (!with_h2) {
    tc = t_current(psi, n, 10 * g.h() * g.h());
    tn = &tc.T;
  }
  ScalarField hn = with_h2 ? h_level(psi, n) : ScalarField(g, 1.0);

  double cell = std::pow(g.h(), g.dim());

  // precompute dd^c v for dictionary members used
  std::vector<HermitianField> vh;
  if (p_deg > 0) {
    vh.reserve(dict.members.size());
    for (const auto& v : dict.members) vh.push_back(complex_hessian(v));
  }

  auto weight_at = [&](Index id) -> double {
    double ph = std::min(std::abs(pair.phi[id]), kPhiClip);
    double w = 1.0;
    for (int i = 0; i < m; ++i) w *= ph * ph;
    if (with_h2) w *= hn[id] * hn[id];
    return w;
  };

  auto integral_for = [&](const HermitianField* v1, const HermitianField* v2,
                          Index& skipped) -> double {
    double acc = 0.0;
    for (Index id = 0; id < g.num_nodes(); ++id) {
      if (!K.contains(id)) continue;
      if (!pair.phi.finite(id) || !hn.finite(id)) {
        ++skipped;
        continue;
      }
      double dens;
      if (k == 1) {
        const HermitianField* f = v1 ? v1 : tn;
        if (f == nullptr)
          dens = norms::omega_density(1);
        else if (f->defined(id))
          dens = norms::k1_trace_density * f->a11(id);
        else {
          ++skipped;
          continue;
        }
      } else {
        // collect the (1,1) factors present; omega fills the rest
        const HermitianField* f1 = v1;
        const HermitianField* f2 = v2 ? v2 : tn;
        if (f1 == nullptr) {
          f1 = f2;
          f2 = nullptr;
        }
        if (f1 == nullptr) {
          dens = norms::omega_density(2);
        } else if (f2 == nullptr) {
          if (!f1->defined(id)) {
            ++skipped;
            continue;
          }
          dens = norms::k2_trace_density * (f1->a11(id) + f1->a22(id));
        } else {
          if (!f1->defined(id) || !f2->defined(id)) {
            ++skipped;
            continue;
          }
          dens = wedge_density_k2(*f1, *f2, id);
        }
      }
      acc += weight_at(id) * dens;
    }
    return acc * cell;
  };

  ProbeResult out;
  if (p_deg == 0) {
    out.value = integral_for(nullptr, nullptr, out.skipped);
    return out;
  }
  if (p_deg == 1) {
    bool first = true;
    for (std::size_t i = 0; i < vh.size(); ++i) {
      Index sk = 0;
      double val = integral_for(&vh[i], nullptr, sk);
      if (first || val > out.value) {
        out.value = val;
        out.argmax = {static_cast<int>(i)};
        out.skipped = sk;
        first = false;
      }
    }
    return out;
  }
  // p_deg == 2 (k=2, probe_I only): symmetric in the two factors
  bool first = true;
  for (std::size_t i = 0; i < vh.size(); ++i) {
    for (std::size_t j = i; j < vh.size(); ++j) {
      Index sk = 0;
      double val = integral_for(&vh[i], &vh[j], sk);
      if (first || val > out.value) {
        out.value = val;
        out.argmax = {static_cast<int>(i), static_cast<int>(j)};
        out.skipped = sk;
        first = false;
      }
    }
  }
  return out;
}

ProbeResult probe_J(const WStarPair& pair, const ScalarField& psi, int n, int m, int p_deg,
                    const Mask& K, const TestDictionary& dict) {
  return probe_impl(pair, psi, n, m, p_deg, K, dict, /*with_h2=*/false);
}

ProbeResult probe_I(const WStarPair& pair, const ScalarField& psi, int n, int m, int p_deg,
                    const Mask& K, const TestDictionary& dict) {
  return probe_impl(pair, psi, n, m, p_deg, K, dict, /*with_h2=*/true);
}

}  // namespace pplab
