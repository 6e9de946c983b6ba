#pragma once

#include <functional>

namespace pplab {

/// Adaptive Simpson quadrature on [a,b]; used for the radial closed-form
/// facts of the gallery and as an independent oracle in tests.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-10, int max_depth = 48);

/// int_B(0,R) f(|z|) dLeb in C^k: surface-measure weighted 1-D quadrature.
double radial_volume_integral(int k, const std::function<double(double)>& f, double r_lo,
                              double r_hi, double tol = 1e-10);

}  // namespace pplab
