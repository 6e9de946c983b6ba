#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pplab {

using Index = std::int64_t;

/// Classification of a node of the bounding box [-1,1]^{2k} relative to the
/// closed unit ball: interior (|z| < 1-h), boundary band (1-h <= |z| <= 1),
/// exterior (|z| > 1).
enum class NodeClass : std::uint8_t { interior = 0, boundary = 1, exterior = 2 };

enum class ValueFlag : std::uint8_t { finite = 0, neg_inf = 1, undefined = 2 };

/// Uniform real grid over [-1,1]^{2k} for k = 1 or 2 complex dimensions.
/// Nodes are addressed either by a flat index or by a multi-index over the
/// 2k real axes; axis 2j is Re z_{j+1}, axis 2j+1 is Im z_{j+1}.
class GridDomain {
public:
  GridDomain(int k, int n_per_axis);

  int k() const { return k_; }
  int dim() const { return 2 * k_; }
  int n_per_axis() const { return n_; }
  double h() const { return h_; }
  Index num_nodes() const { return total_; }

  double coord(int axis_index) const { return -1.0 + h_ * axis_index; }

  NodeClass node_class(Index node) const { return static_cast<NodeClass>(cls_[node]); }
  bool in_ball(Index node) const { return cls_[node] != static_cast<std::uint8_t>(NodeClass::exterior); }
  bool is_interior(Index node) const { return cls_[node] == static_cast<std::uint8_t>(NodeClass::interior); }

  Index stride(int axis) const { return strides_[axis]; }

  std::array<int, 4> multi_index(Index node) const {
    std::array<int, 4> m{0, 0, 0, 0};
    for (int a = dim() - 1; a >= 0; --a) {
      m[a] = static_cast<int>(node % n_);
      node /= n_;
    }
    return m;
  }

  Index flat_index(const std::array<int, 4>& m) const {
    Index id = 0;
    for (int a = 0; a < dim(); ++a) id = id * n_ + m[a];
    return id;
  }

  bool in_box(const std::array<int, 4>& m) const {
    for (int a = 0; a < dim(); ++a)
      if (m[a] < 0 || m[a] >= n_) return false;
    return true;
  }

  /// Real coordinates of a node (x1, y1[, x2, y2]).
  std::array<double, 4> point(Index node) const {
    auto m = multi_index(node);
    std::array<double, 4> p{0, 0, 0, 0};
    for (int a = 0; a < dim(); ++a) p[a] = coord(m[a]);
    return p;
  }

  double radius2(Index node) const {
    auto p = point(node);
    double s = 0;
    for (int a = 0; a < dim(); ++a) s += p[a] * p[a];
    return s;
  }

  /// Flat index of the origin node (n_per_axis odd, so it exists).
  Index origin() const;

private:
  int k_;
  int n_;
  double h_;
  Index total_;
  std::array<Index, 4> strides_{};
  std::vector<std::uint8_t> cls_;
};

/// Boolean node set; always a subset of the closed unit ball.
class Mask {
public:
  Mask() = default;
  explicit Mask(const GridDomain& g, bool fill = false);

  const GridDomain& grid() const { return *grid_; }
  bool contains(Index node) const { return bits_[node] != 0; }
  void set(Index node, bool value);
  Index count() const { return count_; }
  bool empty() const { return count_ == 0; }
  Index size() const { return static_cast<Index>(bits_.size()); }

  /// Lebesgue measure of the mask as a Riemann sum (count * h^{2k}).
  double measure() const;

  const std::vector<std::uint8_t>& raw() const { return bits_; }

private:
  const GridDomain* grid_ = nullptr;
  std::vector<std::uint8_t> bits_;
  Index count_ = 0;
};

/// Real values on grid nodes with explicit -inf / undefined markers.
/// Arithmetic helpers follow extended-real rules; undefined propagates.
class ScalarField {
public:
  ScalarField() = default;
  explicit ScalarField(const GridDomain& g, double fill = 0.0);

  const GridDomain& grid() const { return *grid_; }
  Index size() const { return static_cast<Index>(v_.size()); }

  double operator[](Index node) const { return v_[node]; }
  double& value(Index node) { return v_[node]; }
  ValueFlag flag(Index node) const { return static_cast<ValueFlag>(flag_[node]); }
  bool finite(Index node) const { return flag_[node] == 0; }

  void set(Index node, double value);
  void set_neg_inf(Index node);
  void set_undefined(Index node);

  Index count_nonfinite() const;

  const std::vector<double>& values() const { return v_; }
  std::vector<double>& values() { return v_; }
  const std::vector<std::uint8_t>& flags() const { return flag_; }
  std::vector<std::uint8_t>& flags() { return flag_; }

private:
  const GridDomain* grid_ = nullptr;
  std::vector<double> v_;
  std::vector<std::uint8_t> flag_;
};

struct IntegralResult {
  double value = 0.0;
  Index skipped = 0;  // nodes excluded because the integrand was not finite
};

/// Build the masked box grid for the unit ball in C^k.
/// n_per_axis must be odd and >= 17 so the origin is a node.
GridDomain make_ball_grid(int k, int n_per_axis);

/// Nodes with |z - center| <= r, intersected with the closed unit ball.
Mask ball_mask(const GridDomain& g, const std::array<double, 4>& center, double r);
Mask ball_mask(const GridDomain& g, double r);  // centered at 0

/// Riemann sum sum f * h^{2k} over the mask, in flat-index order.
/// Non-finite nodes are skipped and counted; an entirely non-finite mask
/// (non-empty) is an error.
IntegralResult integrate(const ScalarField& f, const Mask& m);

/// Mask of all in-ball nodes (interior + boundary band).
Mask full_ball(const GridDomain& g);

/// Mask of the interior nodes only.
Mask interior_mask(const GridDomain& g);

/// Mask dilation by a euclidean radius (used for mass-localization reports).
Mask dilate(const Mask& m, double radius);

struct GridError : std::runtime_error {
  explicit GridError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pplab
