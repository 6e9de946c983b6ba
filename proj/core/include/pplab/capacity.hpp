#pragma once

#include "pplab/calculus.hpp"
#include "pplab/envelope.hpp"
#include "pplab/grid.hpp"

namespace pplab {

struct CapacityEstimate {
  double value = 0.0;      // MA mass of the (smoothed) extremal function
  double value_raw = 0.0;  // same without the smoothing pass
  int resolution = 0;
  double residual = 0.0;        // envelope solver residual
  double mass_outside_E = 0.0;  // fraction of MA mass off the 3h-dilation of E
  double clipped_mass = 0.0;
  bool converged = true;
};

struct CapacityOptions {
  double tol = 1e-9;
  EnvelopeMethod method = EnvelopeMethod::sor;
  bool smooth = true;  // one mollification pass at scale 2h before ma_mass
};

/// Bedford-Taylor capacity through the extremal-function identity:
/// u*_E from relative_extremal, then the Monge-Ampere mass over the ball.
/// k=1 integrates by the discrete Gauss flux (exact for measures hiding at
/// grid scale); k=2 integrates the clipped determinant density of the
/// mollified envelope.
CapacityEstimate cap_bt(const Mask& E, const GridDomain& g, const CapacityOptions& opts = {});

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int used = 0;
  int dropped = 0;  // zero capacities certify the bound trivially and are dropped
};

/// Least-squares fit of log Cap(K_n) against n.
DecayFit cap_decay_fit(const std::vector<std::pair<int, double>>& caps);

}  // namespace pplab
