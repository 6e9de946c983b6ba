#include "pplab/wstar.hpp"

#include <cmath>
#include <limits>

#include "pplab/parallel.hpp"

namespace pplab {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct PoissonStencil {
  Index node;
  // per direction (+x,-x,+y,-y): neighbor coefficient (0 when the arm is cut)
  std::array<double, 4> c;
  std::array<Index, 4> nbr;
  double diag;
};

}  // namespace

PoissonResult poisson_dominator(const ScalarField& phi, const GridDomain& g,
                                const PoissonOptions& opts) {
  if (g.k() != 1)
    throw GridError("poisson_dominator: only k=1 (a scalar Poisson solve cannot certify the "
                    "k=2 matrix inequality; supply an analytic dominator)");

  GradientField grad = wirtinger_gradient(phi);
  ScalarField rhs(g, 0.0);
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (grad.defined(id))
      rhs.set(id, 4.0 * std::norm(grad.at(id, 0)));  // |grad phi|^2 = 4 |phi_z|^2
    else
      rhs.set(id, 0.0);
  }

  // unknowns: all nodes strictly inside |z| < 1; Dirichlet 0 on the circle,
  // reached by cut arms (Shortley-Weller) so the curved boundary is honored
  const double h = g.h();
  std::vector<PoissonStencil> sys;
  sys.reserve(g.num_nodes() / 2);
  std::vector<std::uint8_t> active(g.num_nodes(), 0);
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (g.radius2(id) < 1.0 - 1e-14) active[id] = 1;
  }
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!active[id]) continue;
    auto m = g.multi_index(id);
    auto p = g.point(id);
    PoissonStencil st;
    st.node = id;
    std::array<double, 4> arm;  // arm lengths in units of h
    const int dirs[4][2] = {{+1, 0}, {-1, 0}, {0, +1}, {0, -1}};
    for (int d = 0; d < 4; ++d) {
      std::array<int, 4> t = m;
      t[0] += dirs[d][0];
      t[1] += dirs[d][1];
      Index nid = g.in_box(t) ? g.flat_index(t) : -1;
      if (nid >= 0 && active[nid]) {
        arm[d] = 1.0;
        st.nbr[d] = nid;
      } else {
        // cut the arm at |z| = 1: |p + t*h*dir| = 1
        double dx = dirs[d][0], dy = dirs[d][1];
        double b = 2 * h * (p[0] * dx + p[1] * dy);
        double c = p[0] * p[0] + p[1] * p[1] - 1.0;
        double disc = b * b - 4 * h * h * c;
        double t1 = (-b + std::sqrt(std::max(disc, 0.0))) / (2 * h * h);
        arm[d] = std::min(std::max(t1, 1e-3), 1.0);
        st.nbr[d] = -1;
      }
    }
    // generalized 5-point Laplacian with unequal arms a (toward +) and b (-)
    double aE = arm[0], aW = arm[1], aN = arm[2], aS = arm[3];
    st.c[0] = 2.0 / (aE * (aE + aW));
    st.c[1] = 2.0 / (aW * (aE + aW));
    st.c[2] = 2.0 / (aN * (aN + aS));
    st.c[3] = 2.0 / (aS * (aN + aS));
    st.diag = st.c[0] + st.c[1] + st.c[2] + st.c[3];
    sys.push_back(st);
  }

  PoissonResult out;
  out.psi = ScalarField(g, 0.0);
  auto& v = out.psi.values();
  const Index max_iter =
      opts.max_iter > 0 ? opts.max_iter : Index(10) * g.n_per_axis() * g.n_per_axis();
  const double omega = opts.use_sor ? 2.0 / (1.0 + std::sin(kPi * h / 2.0)) : 0.8;
  const double h2 = h * h;

  auto residual_now = [&]() {
    double r = 0.0;
    for (const auto& st : sys) {
      double s = 0.0;
      for (int d = 0; d < 4; ++d)
        if (st.nbr[d] >= 0) s += st.c[d] * v[st.nbr[d]];
      double lap = (s - st.diag * v[st.node]) / h2;
      r = std::max(r, std::abs(lap - rhs[st.node]));
    }
    return r;
  };

  Index sweeps = 0;
  double res = std::numeric_limits<double>::infinity();
  std::vector<double> buf;
  if (!opts.use_sor) buf.assign(v.size(), 0.0);
  while (sweeps < max_iter) {
    if (opts.use_sor) {
      for (const auto& st : sys) {
        double s = 0.0;
        for (int d = 0; d < 4; ++d)
          if (st.nbr[d] >= 0) s += st.c[d] * v[st.nbr[d]];
        double val = (s - rhs[st.node] * h2) / st.diag;
        v[st.node] = (1 - omega) * v[st.node] + omega * val;
      }
    } else {
      // damped Jacobi reference scheme
      for (const auto& st : sys) {
        double s = 0.0;
        for (int d = 0; d < 4; ++d)
          if (st.nbr[d] >= 0) s += st.c[d] * v[st.nbr[d]];
        double val = (s - rhs[st.node] * h2) / st.diag;
        buf[st.node] = (1 - omega) * v[st.node] + omega * val;
      }
      for (const auto& st : sys) v[st.node] = buf[st.node];
    }
    ++sweeps;
    if (sweeps % 32 == 0 || sweeps == max_iter) {
      res = residual_now();
      if (res <= opts.tol) break;
    }
  }
  out.iterations = sweeps;
  out.residual = res;
  out.converged = res <= opts.tol;

  // psi <= 0 holds by the maximum principle; clamp rounding noise only
  for (const auto& st : sys) v[st.node] = std::min(v[st.node], 0.0);
  return out;
}

StarNorm star_norm(const WStarPair& p, const GridDomain& g) {
  StarNorm s;
  Mask ball = full_ball(g);

  // L1 term: int |phi| omega^k
  double cell = std::pow(g.h(), g.dim());
  double acc = 0.0;
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!ball.contains(id)) continue;
    if (!p.phi.finite(id)) {
      ++s.skipped;
      continue;
    }
    acc += std::abs(p.phi[id]);
  }
  s.l1_term = acc * cell * norms::omega_density(g.k());

  MassResult mr = ddc_mass(p.psi, ball);
  s.mass = mr.flux_value;
  if (s.mass < 0 && s.mass > -1e-12) s.mass = 0.0;
  if (s.mass < 0) throw GridError("star_norm: negative dominator mass (psi not psh?)");
  s.mass_term = std::sqrt(s.mass);
  s.value = s.l1_term + s.mass_term;
  return s;
}

ExpMoment exp_moment(const ScalarField& phi, const Mask& K, double c, double alpha) {
  if (!(alpha >= 1.0 && alpha < 2.0)) throw GridError("exp_moment: alpha must be in [1,2)");
  if (!(c > 0)) throw GridError("exp_moment: c must be positive");
  const GridDomain& g = phi.grid();
  double cell = std::pow(g.h(), g.dim());

  ExpMoment out;
  // log-sum-exp over the mask
  double m = -std::numeric_limits<double>::infinity();
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!K.contains(id)) continue;
    if (!phi.finite(id)) {
      ++out.skipped;
      continue;
    }
    m = std::max(m, c * std::pow(std::abs(phi[id]), alpha));
  }
  if (!std::isfinite(m)) {
    out.value = 0.0;
    return out;
  }
  double acc = 0.0;
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!K.contains(id) || !phi.finite(id)) continue;
    double e = c * std::pow(std::abs(phi[id]), alpha);
    if (e > 700.0) ++out.overflow_nodes;
    acc += std::exp(e - m);
  }
  out.log_value = m + std::log(acc * cell);
  if (out.log_value > 700.0) {
    out.divergent = true;
    out.value = std::numeric_limits<double>::infinity();
  } else {
    out.value = std::exp(out.log_value);
  }
  return out;
}

WStarPair normalize_pair(const WStarPair& p, const GridDomain& g) {
  StarNorm s = star_norm(p, g);
  if (!(s.value > 0)) throw GridError("normalize_pair: zero witness norm");
  WStarPair out;
  out.provenance = p.provenance;
  out.phi = p.phi;
  out.psi = p.psi;
  const double inv = 1.0 / s.value;
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (out.phi.finite(id)) out.phi.value(id) *= inv;
    if (out.psi.finite(id)) out.psi.value(id) *= inv * inv;
  }
  return out;
}

}  // namespace pplab
