#include "pplab/grid.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "pplab/parallel.hpp"

namespace pplab {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n); }

int max_threads() {
  int n = g_max_threads.load();
  if (n > 0) return n;
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

GridDomain::GridDomain(int k, int n_per_axis) : k_(k), n_(n_per_axis) {
  if (k != 1 && k != 2)
    throw GridError("unsupported complex dimension k=" + std::to_string(k) + " (expected 1 or 2)");
  if (n_per_axis < 17) throw GridError("n_per_axis must be >= 17");
  if (n_per_axis % 2 == 0) throw GridError("n_per_axis must be odd so the origin is a node");

  h_ = 2.0 / (n_ - 1);
  total_ = 1;
  for (int a = 0; a < dim(); ++a) total_ *= n_;
  Index s = 1;
  for (int a = dim() - 1; a >= 0; --a) {
    strides_[a] = s;
    s *= n_;
  }

  cls_.resize(total_);
  const double inner = (1.0 - h_) * (1.0 - h_);
  std::array<int, 4> m{0, 0, 0, 0};
  for (Index id = 0; id < total_; ++id) {
    double r2 = 0;
    for (int a = 0; a < dim(); ++a) {
      double c = coord(m[a]);
      r2 += c * c;
    }
    std::uint8_t c;
    if (r2 < inner - 1e-14)
      c = static_cast<std::uint8_t>(NodeClass::interior);
    else if (r2 <= 1.0 + 1e-14)
      c = static_cast<std::uint8_t>(NodeClass::boundary);
    else
      c = static_cast<std::uint8_t>(NodeClass::exterior);
    cls_[id] = c;
    for (int a = dim() - 1; a >= 0; --a) {
      if (++m[a] < n_) break;
      m[a] = 0;
    }
  }
}

Index GridDomain::origin() const {
  std::array<int, 4> m{0, 0, 0, 0};
  for (int a = 0; a < dim(); ++a) m[a] = (n_ - 1) / 2;
  return flat_index(m);
}

Mask::Mask(const GridDomain& g, bool fill) : grid_(&g), bits_(g.num_nodes(), 0) {
  if (fill) {
    for (Index id = 0; id < g.num_nodes(); ++id) {
      if (g.in_ball(id)) {
        bits_[id] = 1;
        ++count_;
      }
    }
  }
}

void Mask::set(Index node, bool value) {
  bool in = value && grid_->in_ball(node);  // masks never leave the closed ball
  if (in && !bits_[node]) ++count_;
  if (!in && bits_[node]) --count_;
  bits_[node] = in ? 1 : 0;
}

double Mask::measure() const {
  double cell = 1.0;
  for (int a = 0; a < grid_->dim(); ++a) cell *= grid_->h();
  return static_cast<double>(count_) * cell;
}

ScalarField::ScalarField(const GridDomain& g, double fill)
    : grid_(&g), v_(g.num_nodes(), fill), flag_(g.num_nodes(), 0) {}

void ScalarField::set(Index node, double value) {
  v_[node] = value;
  flag_[node] = static_cast<std::uint8_t>(ValueFlag::finite);
}

void ScalarField::set_neg_inf(Index node) {
  v_[node] = -std::numeric_limits<double>::infinity();
  flag_[node] = static_cast<std::uint8_t>(ValueFlag::neg_inf);
}

void ScalarField::set_undefined(Index node) {
  v_[node] = std::numeric_limits<double>::quiet_NaN();
  flag_[node] = static_cast<std::uint8_t>(ValueFlag::undefined);
}

Index ScalarField::count_nonfinite() const {
  Index c = 0;
  for (auto f : flag_)
    if (f != 0) ++c;
  return c;
}

GridDomain make_ball_grid(int k, int n_per_axis) { return GridDomain(k, n_per_axis); }

Mask ball_mask(const GridDomain& g, const std::array<double, 4>& center, double r) {
  if (!(r > 0)) throw GridError("ball_mask requires r > 0");
  Mask m(g);
  const double r2 = r * r;
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!g.in_ball(id)) continue;
    auto p = g.point(id);
    double d2 = 0;
    for (int a = 0; a < g.dim(); ++a) {
      double d = p[a] - center[a];
      d2 += d * d;
    }
    if (d2 <= r2 + 1e-14) m.set(id, true);
  }
  return m;
}

Mask ball_mask(const GridDomain& g, double r) { return ball_mask(g, {0, 0, 0, 0}, r); }

Mask full_ball(const GridDomain& g) { return Mask(g, true); }

Mask interior_mask(const GridDomain& g) {
  Mask m(g);
  for (Index id = 0; id < g.num_nodes(); ++id)
    if (g.is_interior(id)) m.set(id, true);
  return m;
}

IntegralResult integrate(const ScalarField& f, const Mask& m) {
  const GridDomain& g = f.grid();
  double cell = 1.0;
  for (int a = 0; a < g.dim(); ++a) cell *= g.h();

  IntegralResult out;
  double sum = 0.0;
  Index used = 0;
  const auto& bits = m.raw();
  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!bits[id]) continue;
    if (!f.finite(id)) {
      ++out.skipped;
      continue;
    }
    sum += f[id];
    ++used;
  }
  if (used == 0 && out.skipped > 0)
    throw GridError("integrate: every node of the mask is non-finite");
  out.value = sum * cell;
  return out;
}

Mask dilate(const Mask& m, double radius) {
  const GridDomain& g = m.grid();
  Mask out(g);
  if (m.empty()) return out;
  const int reach = static_cast<int>(std::ceil(radius / g.h()));
  const double r2 = radius * radius;

  // collect lattice offsets within the euclidean radius once
  std::vector<std::array<int, 4>> offs;
  std::array<int, 4> o{0, 0, 0, 0};
  const int d = g.dim();
  std::vector<int> range;
  for (int v = -reach; v <= reach; ++v) range.push_back(v);
  std::vector<std::array<int, 4>> stack;
  // simple nested loops via recursion-free enumeration
  Index total = 1;
  for (int a = 0; a < d; ++a) total *= static_cast<Index>(range.size());
  for (Index t = 0; t < total; ++t) {
    Index q = t;
    double rr = 0;
    for (int a = d - 1; a >= 0; --a) {
      o[a] = range[q % range.size()];
      q /= range.size();
      rr += double(o[a]) * o[a];
    }
    for (int a = d; a < 4; ++a) o[a] = 0;
    if (rr * g.h() * g.h() <= r2 + 1e-14) offs.push_back(o);
  }

  for (Index id = 0; id < g.num_nodes(); ++id) {
    if (!m.contains(id)) continue;
    auto mi = g.multi_index(id);
    for (const auto& off : offs) {
      std::array<int, 4> t = mi;
      for (int a = 0; a < d; ++a) t[a] += off[a];
      if (!g.in_box(t)) continue;
      Index nid = g.flat_index(t);
      if (g.in_ball(nid)) out.set(nid, true);
    }
  }
  return out;
}

}  // namespace pplab
