#include "qsc/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qsc/entropy.hpp"

namespace qsc {

namespace {

constexpr double kSlackTol = 1e-7;

BoundReport evaluate(const std::string& kind, int resource_terms, int n,
                     int ell, double epsilon, double delta) {
  if (n < 1) throw std::invalid_argument("bound: n must be at least 1");
  if (ell < 1) throw std::invalid_argument("bound: ell must be at least 1");
  if (!(epsilon >= 0.0) || !(epsilon <= 1.0))
    throw std::invalid_argument("bound: epsilon must lie in [0, 1]");
  if (!(delta >= 0.0) || !(delta <= 1.0))
    throw std::invalid_argument("bound: delta must lie in [0, 1]");

  BoundReport r;
  r.kind = kind;
  r.n = n;
  r.ell = ell;
  r.epsilon = epsilon;
  r.delta = delta;
  r.argument =
      (1.0 - delta) * (1.0 - delta) / 4.0 - std::sqrt(2.0 * epsilon);
  r.argument_valid = r.argument > 0.0;
  if (!r.argument_valid) {
    r.rhs = std::numeric_limits<double>::infinity();
    r.satisfied = true;
    r.margin = std::numeric_limits<double>::infinity();
    return r;
  }
  r.rhs = resource_terms * static_cast<double>(n) -
          2.0 * std::log2(r.argument) - 1.0;
  r.margin = r.rhs - ell;
  r.satisfied = r.margin >= 0.0;
  return r;
}

double hmin_of_view(const UniformExecution& ue, ViewKind kind) {
  CQState cq = cq_view(ue, kind);
  DensityOperator joint = cq_joint(cq, "X");
  return min_entropy(joint, cq.quantum_space.names()).lambda;
}

}  // namespace

BoundReport classical_bound(int n, int ell, double epsilon, double delta) {
  return evaluate("classical", 1, n, ell, epsilon, delta);
}

BoundReport quantum_bound(int n, int ell, double epsilon, double delta) {
  return evaluate("quantum", 2, n, ell, epsilon, delta);
}

EntropyGapReport entropy_gap_check(const ProtocolIR& p) {
  EntropyGapReport r;
  switch (p.resources.kind) {
    case ResourceDecl::Kind::none:
      r.kind = "none";
      r.capacity = 0.0;
      break;
    case ResourceDecl::Kind::classical_bc:
      r.kind = "classical_bc";
      r.capacity = static_cast<double>(p.resources.total());
      break;
    case ResourceDecl::Kind::qubit_bc:
      r.kind = "qubit_bc";
      r.capacity = 2.0 * static_cast<double>(p.resources.n_a);
      break;
  }
  UniformExecution ue =
      execute_uniform(resource_free(p), Phase::commit);
  r.hmin_b = hmin_of_view(ue, ViewKind::bob);
  r.hmin_bc = hmin_of_view(ue, ViewKind::bob_and_c);
  r.slack = r.hmin_bc - (r.hmin_b - r.capacity);
  r.holds = r.slack >= -kSlackTol;
  return r;
}

}  // namespace qsc
