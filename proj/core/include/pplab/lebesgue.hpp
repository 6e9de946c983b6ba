#pragma once

#include "pplab/grid.hpp"

namespace pplab {

enum class KernelKind { indicator, smooth_radial };

/// Discrete approximation-of-unity kernel: nonnegative weights on lattice
/// offsets within |y| <= eps, summing to 1. The density bound
/// eps^{2k} * (max weight / h^{2k}) <= M is a constructor invariant with
/// M = 2 x the indicator normalization (the smooth profile is
/// chi(y) ~ (1 - |y/eps|^6)_+, whose peak stays below twice the uniform
/// level in both dimensions).
struct UnityKernel {
  KernelKind kind = KernelKind::indicator;
  double eps = 0.0;
  std::vector<std::array<int, 4>> offsets;
  std::vector<double> weights;
  double max_density_ratio = 0.0;  // eps^{2k} * max weight / h^{2k}

  static UnityKernel make(const GridDomain& g, KernelKind kind, double eps);
};

struct MollifyResult {
  ScalarField field;                  // undefined outside the evaluation zone
  double max_excluded_fraction = 0.0; // worst per-node excluded kernel mass
  Index evaluated = 0;
};

/// Discrete convolution with the kernel. Evaluation is restricted to nodes
/// at distance >= eps from the boundary band; non-finite inputs under the
/// kernel are excluded with reweighting and the excluded mass is reported.
MollifyResult mollify(const ScalarField& phi, const UnityKernel& kern);

struct LebesgueSample {
  double eps;
  double ratio;  // average of |phi(x0+y) - phi(x0)| over the discrete eps-ball
};

/// Eq-style averaging ratio A(x0, eps) for each eps in the list.
std::vector<LebesgueSample> lebesgue_ratio(const ScalarField& phi, Index x0,
                                           const std::vector<double>& eps_list);

struct DensityRatioSample {
  double r;
  double b_r;    // Leb(B(x0,r) cap E_delta)
  double c_r;    // Leb(B(x0,r))
  double ratio;  // b_r / c_r
};

std::vector<DensityRatioSample> density_ratio(const ScalarField& u, Index x0, double delta,
                                              const std::vector<double>& r_list);

struct MaskedMeanSample {
  double r;
  double in_mass;   // c_r^{-1} int_{B cap V} u
  double out_mass;  // c_r^{-1} int_{B \ V} |u|
};

std::vector<MaskedMeanSample> masked_mean(const ScalarField& u, Index x0,
                                          const std::vector<double>& r_list, const Mask& V);

struct ConvergenceRow {
  Index point;
  double eps;
  double err_indicator;   // |phi_eps(x) - phi(x)|, indicator kernel
  double err_smooth;      // same for the smooth radial kernel
  double cross_deviation; // |phi_eps^{ind}(x) - phi_eps^{smooth}(x)|
};

std::vector<ConvergenceRow> mollifier_convergence(const ScalarField& phi,
                                                  const std::vector<Index>& points,
                                                  const std::vector<double>& eps_list);

}  // namespace pplab
