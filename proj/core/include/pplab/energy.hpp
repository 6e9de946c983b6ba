#pragma once

#include <cstdint>
#include <string>

#include "pplab/calculus.hpp"
#include "pplab/grid.hpp"
#include "pplab/wstar.hpp"

namespace pplab {

/// Finite dictionary of psh test fields with 0 <= v <= 1 on the ball.
/// Probe suprema over the full psh cone are replaced by maxima over these
/// members, so probe values are lower bounds of the true suprema.
struct TestDictionary {
  std::vector<ScalarField> members;
  std::vector<std::string> names;

  /// variant 0: |z|^2, quarter square-distances to axis shifts, clipped log
  /// peaks, a constant. variant 1: |z|^4 plus seeded random shifts.
  static TestDictionary standard(const GridDomain& g, int variant, std::uint64_t seed = 0);

  /// range [0,1] exact and psh_residual <= 10 h^2 for every member
  void validate(const GridDomain& g) const;
};

/// h_n = 1 + max(psi, -n)/n in [0,1]; equals 0 on {psi <= -n}.
ScalarField h_level(const ScalarField& psi, int n);

struct TCurrentResult {
  HermitianField T;  // dd^c h_n^2 / 2
  double grad_violation_fraction = 0.0;  // T_n - dh_n ^ d^c h_n not PSD beyond tol
  double hdd_violation_fraction = 0.0;   // T_n - h_n dd^c h_n not PSD beyond tol
  Index checked = 0;
};

TCurrentResult t_current(const ScalarField& psi, int n, double tol);

struct ProbeResult {
  double value = 0.0;
  std::vector<int> argmax;  // dictionary indices attaining the max
  Index skipped = 0;
};

/// J_{n,m,p,K}: max over p-tuples of int_K phi^{2m} dd^c v_1 ^ ... ^ dd^c v_p
/// ^ T_n ^ omega^{k-1-p}; phi is clipped at 1e3 and m <= 3.
ProbeResult probe_J(const WStarPair& pair, const ScalarField& psi, int n, int m, int p_deg,
                    const Mask& K, const TestDictionary& dict);

/// I_{n,m,p,K}: same with integrand h_n^2 phi^{2m} and ... ^ omega^{k-p}.
ProbeResult probe_I(const WStarPair& pair, const ScalarField& psi, int n, int m, int p_deg,
                    const Mask& K, const TestDictionary& dict);

}  // namespace pplab
