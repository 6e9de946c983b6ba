#pragma once

#include "pplab/envelope.hpp"
#include "pplab/grid.hpp"
#include "pplab/wstar.hpp"

namespace pplab {

/// K_n = { z in K : phi(z) >= 2^n and psi(z) >= -lambda^n }, n = 1..N.
/// Threshold ties go into the set. Empty masks are expected for large n.
std::vector<Mask> level_sets(const ScalarField& phi, const ScalarField& psi, const Mask& K,
                             double lambda, int N);

struct TailSeries {
  ScalarField w;              // partial sum to N of 2^{n alpha} max(psi,-lambda^n)/lambda^n
  double dropped_bound = 0.0; // sup-norm bound on the dropped tail (bounded psi)
  bool bounded_psi = true;
};

TailSeries tail_series(const ScalarField& psi, double alpha, double lambda, int N);

struct MajorantParams {
  double alpha = 1.5;
  double lambda = 0.0;  // 0 = midpoint default (2^alpha + 4)/2
  int N = 8;
  double tol = 1e-4;    // envelope n is solved to tol * 2^{-n alpha}
  EnvelopeMethod method = EnvelopeMethod::sor;
};

struct MajorantBundle {
  double alpha = 0, lambda = 0;
  int N = 0;
  std::vector<Mask> k_masks;
  std::vector<ScalarField> u_fields;  // u*_n (empty level sets contribute 0)
  ScalarField w_tail;
  ScalarField u;  // sum_{n<=N} 2^{n alpha} u*_n + tail
  Mask exception_mask;  // phi >= 2^{N+1} or psi < -lambda^N: truncation cannot certify
  // verification report
  Index certified_nodes = 0;   // {phi >= 2} cap K minus exceptions
  Index violations = 0;        // 2^alpha u > -phi^alpha + slack there
  double violation_fraction = 0.0;
  Mask violation_mask;
  double psh_residual_u = 0.0;
  double l1_norm_on_K = 0.0;
  double finiteness_witness = 0.0;  // max of u over defined nodes ( > -inf )
  Index witness_node = -1;
  Index global_bound_violations = 0;  // 2^alpha u <= -phi^alpha + 2^alpha, all of K
  bool converged = true;
};

/// Assemble the truncated psh majorant for a normalized pair with phi >= 0 on
/// K and verify 2^alpha u <= -phi^alpha node-wise on the certified region.
MajorantBundle build_majorant(const WStarPair& pair, const Mask& K, const MajorantParams& params);

/// phi = phi_plus - phi_minus with both parts nonnegative (exact identity).
std::pair<ScalarField, ScalarField> split_signed(const ScalarField& phi);

struct BudgetReport {
  std::vector<Mask> b_masks;  // B_n = { 2^{n alpha} u*_n < rho / n^2 }, rho = |z|^2 - 1
  std::vector<double> leb;    // Leb(B_n)
  double tail_sum_from_n0 = 0.0;
  int n0 = 4;
  double ball_measure = 0.0;
  bool nondegenerate = false;  // sum_{n>=n0} Leb(B_n) < Leb(ball)
};

BudgetReport budget_sets(const std::vector<ScalarField>& u_fields, double alpha, int n0 = 4);

double default_lambda(double alpha);

}  // namespace pplab
