#pragma once

#include "qsc/states.hpp"

// Distance and closeness measures.
//
//   D(rho, tau)  = (1/2) ||rho - tau||_1
//   F(rho, tau)  = ||sqrt(rho) sqrt(tau)||_1
//   Fbar         = F + sqrt((1 - tr rho)(1 - tr tau))   (subnormalized states)
//   P(rho, tau)  = sqrt(1 - Fbar^2)
//
// CQ states rho_XB = sum_x P(x)|x><x| (x) rho_B^x are kept blockwise; the
// mixture-distance identity ||rho^0_XB - rho^1_XB||_1 = sum_x ||P_0(x)rho_0^x
// - P_1(x)rho_1^x||_1 makes every CQ distance a sum of small trace norms.
// The distance from uniform  duni(X|B) = min_sigma D(rho_XB, 1/2^l (x) sigma)
// is a convex minimization over sigma; see the solver notes in duni.cpp.

namespace qsc {

double trace_distance(const Mat& rho, const Mat& tau);
double fidelity(const Mat& rho, const Mat& tau);

double trace_distance(const DensityOperator& rho, const DensityOperator& tau);
double fidelity(const DensityOperator& rho, const DensityOperator& tau);
double generalized_fidelity(const DensityOperator& rho,
                            const DensityOperator& tau);
double purified_distance(const DensityOperator& rho,
                         const DensityOperator& tau);

struct CQState {
  int ell = 1;                    // strings are ell-bit values
  RegisterSpace quantum_space;    // layout shared by all conditionals
  std::vector<int> alphabet;      // distinct values in [0, 2^ell)
  std::vector<double> weights;    // P(x), aligned with alphabet
  std::vector<Mat> conditionals;  // normalized states, aligned with alphabet
};

// Validates the invariants: distinct alphabet in range, weights >= 0 summing
// to at most 1, conditionals normalized within tolerance.
CQState make_cq_state(int ell, RegisterSpace quantum_space,
                      std::vector<int> alphabet, std::vector<double> weights,
                      std::vector<Mat> conditionals);

double weight_sum(const CQState& cq);

// Full embedding sum_x P(x)|x><x| (x) rho^x on X(2^ell) (x) B; the labeled
// version prefixes a register named x_name.
Mat cq_density(const CQState& cq);
DensityOperator cq_joint(const CQState& cq, const std::string& x_name = "X");

// (1/2) sum_x || P_a(x) rho_a^x - P_b(x) rho_b^x ||_1 over the union of the
// alphabets; blockwise evaluation of the embedded trace distance.
double cq_mixture_distance(const CQState& a, const CQState& b);

struct UniformDistanceResult {
  double value = 0.0;
  DensityOperator optimal_sigma;
  int iterations = 0;         // cutting planes added
  double certified_gap = 0.0;  // best value minus proven lower bound
  bool converged = true;
};

// min over sigma of D(rho_XB, uniform_X (x) sigma); requires a normalized CQ
// state. The result's value re-evaluates at optimal_sigma by construction.
UniformDistanceResult dist_from_uniform(const CQState& cq);

// Evaluates the objective above at a fixed sigma (used for certification).
double uniform_objective(const CQState& cq, const Mat& sigma);

// For a binary uniform CQ state, returns (duni(X|B), D(rho^0, rho^1)) and
// enforces the implication D <= 2 duni (+1e-8 slack).
std::pair<double, double> hiding_implies_close(const CQState& cq);

}  // namespace qsc
