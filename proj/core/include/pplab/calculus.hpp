#pragma once

#include <complex>
#include <optional>

#include "pplab/grid.hpp"

namespace pplab {

/// Normalization ledger for d^c = (i/2pi)(dbar - d), re-derived on monomials
/// and pinned by unit tests:
///   dd^c u            = (lap u / 2pi) dLeb            (k=1)
///   dd^c log|z|       = delta_0                        (k=1)
///   omega             = (1/2) dd^c |z|^2,  int_B omega^k = 1   (k=1,2)
///   dd^c u ^ omega    = (lap u / 2pi^2) dLeb           (k=2)
///   (dd^c u)^2        = (8/pi^2) det(u_{i jbar}) dLeb  (k=2)
///   d u ^ d^c u       = (|grad u|^2 / 2pi) dLeb        (k=1)
///   A ^ B             = (4/pi^2)(A11 B22 + A22 B11 - 2 Re(A12 conj B12)) dLeb (k=2)
/// In the (i/pi) dz_i ^ dzbar_j basis the coefficient matrix of dd^c u is the
/// complex Hessian d^2 u / dz_i dzbar_j, and omega has matrix I/2.
namespace norms {
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double k1_trace_density = 2.0 / pi;        // density of (i/pi) A11 dz^dzbar
inline constexpr double k2_trace_density = 2.0 / (pi * pi); // coeff of (A11+A22) for ^ omega
inline constexpr double k2_det_density = 8.0 / (pi * pi);
inline constexpr double k2_wedge_density = 4.0 / (pi * pi);
inline double omega_density(int k) { return k == 1 ? 1.0 / pi : 2.0 / (pi * pi); }
}  // namespace norms

/// Per-node k x k Hermitian coefficient matrix of a (1,1)-current in the
/// (i/pi) dz_i ^ dzbar_j basis. Hermitian symmetry is exact by construction.
class HermitianField {
public:
  HermitianField() = default;
  HermitianField(const GridDomain& g);

  const GridDomain& grid() const { return *grid_; }
  bool defined(Index id) const { return ok_[id] != 0; }
  double a11(Index id) const { return a11_[id]; }
  double a22(Index id) const { return a22_[id]; }
  std::complex<double> a12(Index id) const { return {re12_[id], im12_[id]}; }
  double trace(Index id) const { return grid_->k() == 1 ? a11_[id] : a11_[id] + a22_[id]; }
  double det(Index id) const {
    if (grid_->k() == 1) return a11_[id];
    return a11_[id] * a22_[id] - (re12_[id] * re12_[id] + im12_[id] * im12_[id]);
  }
  bool positive(Index id, double tol = 0.0) const;

  void set(Index id, double a11, double a22, std::complex<double> a12);
  void set_undefined(Index id);

private:
  const GridDomain* grid_ = nullptr;
  std::vector<double> a11_, a22_, re12_, im12_;
  std::vector<std::uint8_t> ok_;
};

/// k complex Wirtinger derivatives per node.
struct GradientField {
  const GridDomain* grid = nullptr;
  std::vector<std::complex<double>> d;  // layout: node * k + j
  std::vector<std::uint8_t> ok;
  std::complex<double> at(Index node, int j) const { return d[node * grid->k() + j]; }
  bool defined(Index node) const { return ok[node] != 0; }
};

namespace stencil {
/// Second-order first/second differences along one real axis; centered where
/// both neighbors are usable, one-sided into the ball in the boundary band.
/// Undefined (nullopt) when a required value is missing or not finite.
std::optional<double> d1(const ScalarField& f, std::array<int, 4> m, int axis);
std::optional<double> d2(const ScalarField& f, std::array<int, 4> m, int axis);
std::optional<double> d2_mixed(const ScalarField& f, std::array<int, 4> m, int a, int b);
}  // namespace stencil

/// (d f/d z_1, ..., d f/d z_k) with d/dz_j = (d/dx_j - i d/dy_j)/2.
GradientField wirtinger_gradient(const ScalarField& f);

/// Coefficient matrix of d f ^ d^c f: A_ij = (df/dz_i) conj(df/dz_j).
HermitianField gradient_form(const ScalarField& f);

/// Complex Hessian A_ij = d^2 f / dz_i dzbar_j (Hermitian-symmetrized).
HermitianField complex_hessian(const ScalarField& f);

struct MassResult {
  double value = 0.0;      // Riemann sum of the trace density over the mask
  double flux_value = 0.0; // discrete Gauss route (mask-boundary flux)
  Index skipped = 0;       // mask nodes without a defined Hessian
  Index flux_dropped = 0;  // mask nodes excluded from the flux contour
};

/// int_m dd^c f ^ omega^{k-1}. The Riemann value integrates the discrete
/// Hessian trace; the flux value sums (f_out - f_in) over mask-boundary axis
/// edges, which sees point masses hiding below grid scale and is exact for
/// singular potentials as long as f is finite on the contour.
MassResult ddc_mass(const ScalarField& f, const Mask& m);

struct MaResult {
  double value = 0.0;
  double clipped_mass = 0.0;  // magnitude of negative-determinant mass set to 0
  Index skipped = 0;
};

/// int_m (dd^c f)^k. k=1 coincides with ddc_mass; k=2 integrates the
/// determinant density with negative determinants clipped to 0 and the
/// clipped mass reported.
MaResult ma_mass(const ScalarField& f, const Mask& m);

struct DominationReport {
  double violating_fraction = 0.0;
  double worst = 0.0;  // largest PSD margin violation among checked nodes
  Index checked = 0;
  Index violations = 0;
  Index skipped = 0;
  bool pass(double) const { return violations == 0; }
};

/// Node-wise PSD test of complex_hessian(psi) - gradient_form(phi) on m.
/// k=1 tests the scalar sign; k=2 tests trace >= -tol and det >= -tol.
DominationReport domination_check(const ScalarField& phi, const ScalarField& psi, const Mask& m,
                                  double tol);

}  // namespace pplab
