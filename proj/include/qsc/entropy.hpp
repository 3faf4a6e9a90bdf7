#pragma once

#include "qsc/metrics.hpp"
#include "qsc/states.hpp"

// Conditional min-entropy and the chain rules used to track it through
// protocol transformations.
//
//   H_min(A|B) = -log2 min { tr sigma : 1_A (x) sigma >= rho_AB, sigma >= 0 }
//
// The minimization is solved directly with a log-det barrier Newton method
// on psi_mu(sigma) = tr sigma - mu logdet(1 (x) sigma - rho); positivity of
// sigma is implied since 1 (x) sigma >= rho >= 0 forces tr_A of it
// nonnegative. The reported entropy -log2 tr(sigma_hat) is a certified lower
// bound on H_min (sigma_hat is feasible), converging to it as mu drops.
//
// Smoothing (eps > 0) returns certified lower bounds on H_min^eps obtained
// from explicit candidates inside the purified-distance eps-ball: capping
// the largest eigenvalues of rho at a level c keeps it co-diagonal with rho,
// where the generalized fidelity has the closed form
//   F(rho_c, rho) = sum_{lambda <= c} lambda + sum_{lambda > c} sqrt(lambda c).
//
// Chain rules are instantiated at eps = 0 (each lemma holds for every
// eps >= 0, so this yields valid end-to-end theorem instances):
//   H(X|BZ) >= H(X|B) - log|Z|          (discarding classical Z)
//   H(X|BC) >= H(X|BZ) - log|C|         (Z from measuring C projectively)
//   H(X|BC) >= H(X|B) - 2 log|C|        (their combination)

namespace qsc {

struct MinEntropyResult {
  double lambda = 0.0;            // bits
  DensityOperator optimal_sigma;  // normalized dual witness
  double feasibility_gap = 0.0;   // max(0, -lambda_min(1 (x) sigma - rho))
  int iterations = 0;             // Newton steps used
  bool converged = true;
};

// condition_on names the registers of the conditioning system; the rest of
// the space is the A part. Subnormalized input is allowed, zero trace is not.
MinEntropyResult min_entropy(const DensityOperator& rho,
                             const std::vector<std::string>& condition_on);

// 2^{-H_min(X|B)} for a normalized CQ state.
double guessing_probability(const CQState& cq);

struct SmoothPolicy {
  enum class Mode { exact_zero, lower_bound_candidates };
  double epsilon = 0.0;
  Mode mode = Mode::exact_zero;
  int candidate_count = 8;
};

struct SmoothMinEntropyResult {
  double lambda = 0.0;           // certified lower bound on H_min^eps
  bool candidate_found = true;   // false: fell back to the eps = 0 value
  int candidates_tried = 0;
};

SmoothMinEntropyResult smooth_min_entropy(
    const DensityOperator& rho, const std::vector<std::string>& condition_on,
    const SmoothPolicy& policy);

struct InequalityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // lhs - rhs
  bool holds = false;  // slack >= -1e-7
};

// H(X|BZ) >= H(X|B) - log|Z| with Z a classical register of rho.
InequalityReport check_classical_chain_rule(
    const DensityOperator& rho_xbz, const std::vector<std::string>& x,
    const std::vector<std::string>& b, const std::string& z, double eps);

// H(X|BC) >= H(X|BZ) - log|C| with Z the outcome of measuring C in the
// given orthonormal basis (columns of `basis`).
InequalityReport check_measurement_bound(const DensityOperator& rho_xbc,
                                         const std::vector<std::string>& x,
                                         const std::vector<std::string>& b,
                                         const std::string& c,
                                         const Mat& basis, double eps);

// H(X|BC) >= H(X|B) - 2 log|C|.
InequalityReport check_quantum_chain_rule(const DensityOperator& rho_xbc,
                                          const std::vector<std::string>& x,
                                          const std::vector<std::string>& b,
                                          const std::string& c, double eps);

}  // namespace qsc
