#pragma once

#include "pplab/grid.hpp"

namespace pplab {

/// A complex direction for the discrete submean constraint, stored as the
/// lattice steps of d and i*d over the 2k real axes. The four stencil
/// points x+d, x-d, x+id, x-id lie on a circle inside the complex line
/// through the direction.
struct Direction {
  std::array<int, 4> d{0, 0, 0, 0};
  std::array<int, 4> id{0, 0, 0, 0};
};

struct DirectionSet {
  int k = 1;
  std::vector<Direction> dirs;

  /// k=1: the single complex axis. k=2: eight complex lines including both
  /// axes, (1,+-1) and (1,+-i), plus (2,1) and (1,2).
  static DirectionSet standard(int k);
};

enum class EnvelopeMethod {
  jacobi,  // simultaneous updates; reference scheme
  sor      // in-place sweeps with over-relaxation; same fixed point, faster
};

enum class BandTreatment {
  pinned,     // boundary-band nodes are fixed at boundary_value
  cut_circle  // band nodes are unknowns; stencil arms are cut at |z| = 1
};

struct EnvelopeOptions {
  double tol = 1e-8;
  Index max_iter = 0;  // 0 = default 10 * n_per_axis^2
  EnvelopeMethod method = EnvelopeMethod::jacobi;
  BandTreatment band = BandTreatment::pinned;
  // When set, stencil arms entering this mask are cut halfway to the first
  // node inside it, where the obstacle value is imposed. This is the
  // mask-as-cell-union convention: the interface of a node set lies half a
  // cell beyond its outermost nodes, matching the Riemann-sum reading of
  // masks used everywhere else.
  const Mask* obstacle_cells = nullptr;
  double obstacle_cell_value = -1.0;
};

struct EnvelopeResult {
  ScalarField u;
  Index iterations = 0;
  double residual = 0.0;       // max |u - update(u)| at exit
  double psh_violation = 0.0;  // psh_residual of u over the interior
  bool converged = false;
};

/// Largest field u <= obstacle satisfying the discrete submean inequality
/// u(x) <= (1/4)[u(x+d)+u(x-d)+u(x+id)+u(x-id)] for every direction whose
/// full stencil stays inside the closed ball. Boundary-band nodes are pinned
/// to boundary_value; iteration starts from the obstacle and decreases.
EnvelopeResult psh_envelope(const ScalarField& obstacle, const ScalarField& boundary_value,
                            const DirectionSet& dirs, const EnvelopeOptions& opts = {});

/// Relative extremal function of E: obstacle -1 on E and 0 elsewhere,
/// boundary value 0, standard direction set.
EnvelopeResult relative_extremal(const Mask& E, const GridDomain& g,
                                 const EnvelopeOptions& opts = {});

/// max over nodes of m and directions of u(x) - four-point average, floored
/// at 0. Nodes whose stencil leaves the ball or hits a non-finite value are
/// skipped.
double psh_residual(const ScalarField& u, const DirectionSet& dirs, const Mask& m);

}  // namespace pplab
