#pragma once

#include "pplab/calculus.hpp"
#include "pplab/grid.hpp"

namespace pplab {

enum class PairProvenance { analytic, poisson_solved, user_supplied };

/// A W*-style pair: phi with a negative psh dominator psi, T = dd^c psi,
/// certifying d phi ^ d^c phi <= T.
struct WStarPair {
  ScalarField phi;
  ScalarField psi;
  PairProvenance provenance = PairProvenance::user_supplied;
};

struct PoissonOptions {
  double tol = 1e-8;  // residual stop ||lap psi - rhs||_inf <= tol
  Index max_iter = 0;
  bool use_sor = true;  // damped-Jacobi reference scheme when false
};

struct PoissonResult {
  ScalarField psi;
  Index iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Solve lap psi = |grad phi|^2 on the open unit disc with psi = 0 on the
/// circle |z| = 1 (cut-cell arms through the boundary band). k = 1 only:
/// dd^c psi then equals d phi ^ d^c phi in the continuum and psi <= 0 by
/// the maximum principle.
PoissonResult poisson_dominator(const ScalarField& phi, const GridDomain& g,
                                const PoissonOptions& opts = {});

struct StarNorm {
  double value = 0.0;      // l1_term + mass_term
  double l1_term = 0.0;    // int_B |phi| omega^k
  double mass = 0.0;       // int_B dd^c psi ^ omega^{k-1} (flux route)
  double mass_term = 0.0;  // sqrt(mass)
  Index skipped = 0;       // non-finite nodes excluded from the L1 term
};

/// Witness norm: int |phi| omega^k + (int dd^c psi ^ omega^{k-1})^{1/2} with
/// the supplied psi; an upper bound for the infimum-based norm. The mass is
/// integrated by the discrete Gauss flux so interior singularities of psi
/// are captured.
StarNorm star_norm(const WStarPair& p, const GridDomain& g);

struct ExpMoment {
  double value = 0.0;
  double log_value = 0.0;
  bool divergent = false;
  Index overflow_nodes = 0;
  Index skipped = 0;
};

/// int_K e^{c |phi|^alpha} dLeb for alpha in [1,2), computed in log-sum form.
ExpMoment exp_moment(const ScalarField& phi, const Mask& K, double c, double alpha);

/// Rescale (phi, psi) -> (phi/s, psi/s^2) with s = star_norm so the result
/// has witness norm 1; the quadratic/linear scaling preserves domination.
WStarPair normalize_pair(const WStarPair& p, const GridDomain& g);

}  // namespace pplab
