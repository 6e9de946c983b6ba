#include "pplab/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pplab/parallel.hpp"

namespace pplab {

DirectionSet DirectionSet::standard(int k) {
  DirectionSet s;
  s.k = k;
  if (k == 1) {
    s.dirs.push_back({{1, 0, 0, 0}, {0, 1, 0, 0}});
    return s;
  }
  // complex direction (a, b): step of d with real layout (Re a, Im a, Re b, Im b);
  // i*d rotates each component by i.
  auto add = [&s](int ra, int ia, int rb, int ib) {
    Direction dir;
    dir.d = {ra, ia, rb, ib};
    dir.id = {-ia, ra, -ib, rb};
    s.dirs.push_back(dir);
  };
  add(1, 0, 0, 0);   // (1,0)
  add(0, 0, 1, 0);   // (0,1)
  add(1, 0, 1, 0);   // (1,1)
  add(1, 0, -1, 0);  // (1,-1)
  add(1, 0, 0, 1);   // (1,i)
  add(1, 0, 0, -1);  // (1,-i)
  add(2, 0, 1, 0);   // (2,1)
  add(1, 0, 2, 0);   // (1,2)
  return s;
}

namespace {

// one constraint with at least one arm cut at the unit circle
struct CutConstraint {
  double w[4];              // generalized stencil weights, positive
  double wsum;
  Index nbr[4];             // lattice source, or -1 when the arm hits the circle
  double fixed[4];          // Dirichlet value at the cut point
};

struct NodeCuts {
  Index begin = 0, end = 0;  // range into the cut-constraint table
};

struct SolveStructure {
  std::vector<Index> active;        // unknown nodes, sweep order
  std::vector<std::uint8_t> avail;  // per active node: full-lattice directions
  std::vector<NodeCuts> cuts;       // per active node: cut constraints
  std::vector<CutConstraint> cut_table;
  std::array<Index, 8> off_d{};
  std::array<Index, 8> off_id{};
  int ndirs = 0;
};

// distance fraction t in (0,1] along step (lattice units) to the unit circle
double arm_fraction(const GridDomain& g, const std::array<double, 4>& p,
                    const std::array<int, 4>& step) {
  double a = 0, b = 0, c = -1.0;
  for (int ax = 0; ax < g.dim(); ++ax) {
    double s = g.h() * step[ax];
    a += s * s;
    b += 2 * p[ax] * s;
    c += p[ax] * p[ax];
  }
  double disc = std::max(b * b - 4 * a * c, 0.0);
  double t = (-b + std::sqrt(disc)) / (2 * a);
  return std::min(std::max(t, 1e-6), 1.0);
}

SolveStructure build_structure(const GridDomain& g, const DirectionSet& dirs,
                               const ScalarField* boundary_value, BandTreatment band,
                               const Mask* obstacle_cells = nullptr,
                               double obstacle_cell_value = -1.0) {
  if (dirs.dirs.empty()) throw GridError("envelope: direction set is empty");
  if (dirs.dirs.size() > 8) throw GridError("envelope: at most 8 directions supported");
  SolveStructure st;
  st.ndirs = static_cast<int>(dirs.dirs.size());
  for (int d = 0; d < st.ndirs; ++d) {
    Index od = 0, oid = 0;
    for (int a = 0; a < g.dim(); ++a) {
      od += static_cast<Index>(dirs.dirs[d].d[a]) * g.stride(a);
      oid += static_cast<Index>(dirs.dirs[d].id[a]) * g.stride(a);
    }
    st.off_d[d] = od;
    st.off_id[d] = oid;
  }

  const bool cut_mode = band == BandTreatment::cut_circle;
  st.active.reserve(g.num_nodes() / 2);
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (cut_mode) {
      if (g.radius2(id) < 1.0 - 1e-14) st.active.push_back(id);
    } else {
      if (g.is_interior(id)) st.active.push_back(id);
    }
  }
  st.avail.assign(st.active.size(), 0);
  st.cuts.assign(st.active.size(), {});

  auto lattice_usable = [&](const std::array<int, 4>& m, const std::array<int, 4>& step,
                            int sign) -> Index {
    std::array<int, 4> t = m;
    for (int a = 0; a < g.dim(); ++a) t[a] += sign * step[a];
    if (!g.in_box(t)) return -1;
    Index nid = g.flat_index(t);
    if (cut_mode) {
      // lattice sources must be unknowns or pinned in-ball data; outside the
      // open ball the arm is cut at the circle instead
      return g.radius2(nid) < 1.0 - 1e-14 ? nid : -1;
    }
    return g.in_ball(nid) ? nid : -1;
  };

  const bool contact_cuts = obstacle_cells != nullptr;
  for (std::size_t i = 0; i < st.active.size(); ++i) {
    Index id = st.active[i];
    const bool in_obstacle = contact_cuts && obstacle_cells->contains(id);
    auto m = g.multi_index(id);
    auto p = g.point(id);
    std::uint8_t bits = 0;
    st.cuts[i].begin = static_cast<Index>(st.cut_table.size());
    for (int d = 0; d < st.ndirs; ++d) {
      const auto& dir = dirs.dirs[d];
      const std::array<const std::array<int, 4>*, 2> axes{&dir.d, &dir.id};
      Index nbr[4];
      bool clean = true;
      bool contact = false;
      for (int a2 = 0; a2 < 2; ++a2) {
        for (int s2 = 0; s2 < 2; ++s2) {
          int slot = 2 * a2 + s2;
          nbr[slot] = lattice_usable(m, *axes[a2], s2 == 0 ? +1 : -1);
          if (nbr[slot] < 0) clean = false;
          // arm entering the obstacle cells from outside: half-cell cut
          if (!in_obstacle && nbr[slot] >= 0 && contact_cuts &&
              obstacle_cells->contains(nbr[slot]))
            contact = true;
        }
      }
      if (clean && !contact) {
        bits |= static_cast<std::uint8_t>(1u << d);
        continue;
      }
      if (!clean && !cut_mode) continue;  // pinned mode: direction skipped at the rim
      if (!clean && contact) contact = false;  // rare: circle cut takes precedence
      if (clean && contact) {
        // the plain lattice constraint stays active alongside the cut one
        bits |= static_cast<std::uint8_t>(1u << d);
      }

      CutConstraint cc{};
      for (int a2 = 0; a2 < 2; ++a2) {
        double t_arm[2] = {1.0, 1.0};
        double v_arm[2] = {0.0, 0.0};
        Index n_arm[2] = {nbr[2 * a2 + 0], nbr[2 * a2 + 1]};
        for (int s2 = 0; s2 < 2; ++s2) {
          if (n_arm[s2] < 0) {
            // cut at the unit circle; Dirichlet data from the first lattice
            // point past the cut when the caller supplied it
            std::array<int, 4> step = *axes[a2];
            if (s2 == 1)
              for (int ax = 0; ax < 4; ++ax) step[ax] = -step[ax];
            t_arm[s2] = arm_fraction(g, p, step);
            std::array<int, 4> t = m;
            for (int ax = 0; ax < g.dim(); ++ax) t[ax] += step[ax];
            if (g.in_box(t) && boundary_value && boundary_value->finite(g.flat_index(t)))
              v_arm[s2] = (*boundary_value)[g.flat_index(t)];
          } else if (contact && obstacle_cells->contains(n_arm[s2])) {
            // interface half a lattice spacing before the first obstacle node
            double la2 = 0;
            for (int ax = 0; ax < g.dim(); ++ax)
              la2 += double((*axes[a2])[ax]) * (*axes[a2])[ax];
            t_arm[s2] = 1.0 - 0.5 / std::sqrt(la2);
            v_arm[s2] = obstacle_cell_value;
            n_arm[s2] = -1;
          }
        }
        double cp = 2.0 / (t_arm[0] * (t_arm[0] + t_arm[1]));
        double cm = 2.0 / (t_arm[1] * (t_arm[0] + t_arm[1]));
        cc.w[2 * a2 + 0] = cp;
        cc.w[2 * a2 + 1] = cm;
        cc.nbr[2 * a2 + 0] = n_arm[0];
        cc.nbr[2 * a2 + 1] = n_arm[1];
        cc.fixed[2 * a2 + 0] = v_arm[0];
        cc.fixed[2 * a2 + 1] = v_arm[1];
      }
      cc.wsum = cc.w[0] + cc.w[1] + cc.w[2] + cc.w[3];
      st.cut_table.push_back(cc);
    }
    st.cuts[i].end = static_cast<Index>(st.cut_table.size());
    st.avail[i] = bits;
  }
  return st;
}

inline double direction_minimum(const double* u, Index id, const SolveStructure& st,
                                std::size_t i) {
  double m = std::numeric_limits<double>::infinity();
  const std::uint8_t bits = st.avail[i];
  for (int d = 0; d < st.ndirs; ++d) {
    if (!(bits & (1u << d))) continue;
    double avg = 0.25 * (u[id + st.off_d[d]] + u[id - st.off_d[d]] + u[id + st.off_id[d]] +
                         u[id - st.off_id[d]]);
    m = std::min(m, avg);
  }
  for (Index c = st.cuts[i].begin; c < st.cuts[i].end; ++c) {
    const CutConstraint& cc = st.cut_table[c];
    double acc = 0.0;
    for (int s = 0; s < 4; ++s)
      acc += cc.w[s] * (cc.nbr[s] >= 0 ? u[cc.nbr[s]] : cc.fixed[s]);
    m = std::min(m, acc / cc.wsum);
  }
  return m;
}

}  // namespace

EnvelopeResult psh_envelope(const ScalarField& obstacle, const ScalarField& boundary_value,
                            const DirectionSet& dirs, const EnvelopeOptions& opts) {
  const GridDomain& g = obstacle.grid();
  if (dirs.k != g.k()) throw GridError("envelope: direction set dimension mismatch");
  SolveStructure st = build_structure(g, dirs, &boundary_value, opts.band, opts.obstacle_cells,
                                      opts.obstacle_cell_value);

  ScalarField u(g, 0.0);
  double floor_value = 0.0;
  const bool cut_mode = opts.band == BandTreatment::cut_circle;
  for (Index id = 0; id < g.num_nodes(); ++id) {
    bool unknown = cut_mode ? g.radius2(id) < 1.0 - 1e-14 : g.is_interior(id);
    if (unknown) {
      if (!obstacle.finite(id))
        throw GridError("envelope: obstacle must be finite on the solve region");
      u.set(id, obstacle[id]);
      floor_value = std::min(floor_value, obstacle[id]);
    } else if (g.in_ball(id)) {
      if (!boundary_value.finite(id))
        throw GridError("envelope: boundary value must be finite on the boundary band");
      u.set(id, boundary_value[id]);
      floor_value = std::min(floor_value, boundary_value[id]);
    } else {
      u.set(id, 0.0);
    }
  }

  const Index max_iter =
      opts.max_iter > 0 ? opts.max_iter : Index(10) * g.n_per_axis() * g.n_per_axis();
  const Index n_active = static_cast<Index>(st.active.size());

  auto residual_now = [&](const std::vector<double>& v) {
    double r = 0.0;
    for (Index i = 0; i < n_active; ++i) {
      Index id = st.active[i];
      double m = direction_minimum(v.data(), id, st, i);
      double upd = std::min(obstacle[id], m);
      r = std::max(r, std::abs(v[id] - upd));
    }
    return r;
  };

  EnvelopeResult out;
  Index sweeps = 0;
  double res = std::numeric_limits<double>::infinity();
  const Index check_every = 16;

  if (opts.method == EnvelopeMethod::jacobi) {
    std::vector<double> cur = u.values();
    std::vector<double> nxt = cur;
    while (sweeps < max_iter) {
      parallel_for(n_active, [&](Index b, Index e) {
        for (Index i = b; i < e; ++i) {
          Index id = st.active[i];
          double m = direction_minimum(cur.data(), id, st, i);
          nxt[id] = std::min(obstacle[id], m);
        }
      });
      std::swap(cur, nxt);
      ++sweeps;
      if (sweeps % check_every == 0 || sweeps == max_iter) {
        res = residual_now(cur);
        if (res <= opts.tol) break;
      }
    }
    u.values() = cur;
  } else {
    // In-place sweeps. A single direction admits classical projected
    // over-relaxation; with several directions the min-operator makes
    // omega > 1 oscillate, so those run plain alternating Gauss-Seidel.
    std::vector<double>& v = u.values();
    constexpr double pi = 3.14159265358979323846;
    const double omega = st.ndirs == 1 ? 2.0 / (1.0 + std::sin(pi * g.h() / 2.0)) : 1.0;
    while (sweeps < max_iter) {
      const bool fwd = (sweeps % 2 == 0);
      for (Index s = 0; s < n_active; ++s) {
        Index i = fwd ? s : n_active - 1 - s;
        Index id = st.active[i];
        double m = direction_minimum(v.data(), id, st, i);
        double cand = v[id] + omega * (m - v[id]);
        v[id] = std::min(obstacle[id], std::max(floor_value, cand));
      }
      ++sweeps;
      if (sweeps % check_every == 0 || sweeps == max_iter) {
        res = residual_now(v);
        if (res <= opts.tol) break;
      }
    }
  }

  out.iterations = sweeps;
  out.residual = res;
  out.converged = res <= opts.tol;
  out.u = std::move(u);
  out.psh_violation = psh_residual(out.u, dirs, interior_mask(g));
  return out;
}

EnvelopeResult relative_extremal(const Mask& E, const GridDomain& g,
                                 const EnvelopeOptions& opts) {
  if (E.empty()) throw GridError("relative_extremal: E is empty");
  const double lim = 1.0 - 2.0 * g.h();
  for (Index id = 0; id < g.num_nodes(); ++id)
    if (E.contains(id) && g.radius2(id) > lim * lim + 1e-12)
      throw GridError("relative_extremal: E must stay within |z| <= 1 - 2h");

  ScalarField obstacle(g, 0.0), boundary(g, 0.0);
  for (Index id = 0; id < g.num_nodes(); ++id)
    if (E.contains(id)) obstacle.set(id, -1.0);
  EnvelopeOptions eo = opts;
  eo.band = BandTreatment::cut_circle;  // honors u -> 0 on the sphere itself
  eo.obstacle_cells = &E;               // -1 is attained on the cells of E
  eo.obstacle_cell_value = -1.0;
  return psh_envelope(obstacle, boundary, DirectionSet::standard(g.k()), eo);
}

double psh_residual(const ScalarField& u, const DirectionSet& dirs, const Mask& m) {
  const GridDomain& g = u.grid();
  SolveStructure st = build_structure(g, dirs, nullptr, BandTreatment::pinned);
  const double* v = u.values().data();
  double worst = 0.0;
  for (std::size_t i = 0; i < st.active.size(); ++i) {
    Index id = st.active[i];
    if (!m.contains(id) || !u.finite(id)) continue;
    std::uint8_t bits = st.avail[i];
    for (int d = 0; d < st.ndirs; ++d) {
      if (!(bits & (1u << d))) continue;
      Index pd = id + st.off_d[d], md = id - st.off_d[d];
      Index pi = id + st.off_id[d], mi = id - st.off_id[d];
      if (!u.finite(pd) || !u.finite(md) || !u.finite(pi) || !u.finite(mi)) continue;
      double avg = 0.25 * (v[pd] + v[md] + v[pi] + v[mi]);
      worst = std::max(worst, v[id] - avg);
    }
  }
  return worst;
}

}  // namespace pplab
