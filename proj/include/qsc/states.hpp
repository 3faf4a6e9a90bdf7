#pragma once

#include <utility>

#include "qsc/matrix.hpp"
#include "qsc/registers.hpp"

// Pure states and density operators tied to a register space.
//
// Marginals are taken by direct summation over the traced-out multi-index:
//   rho_S(s,s') = sum_r rho(g(s,r), g(s',r)),
// purification by eigendecomposition with an ancilla of the same dimension
// appended at the end of the register order:
//   |psi> = sum_k sqrt(lambda_k) |v_k>|k>,   tr_anc |psi><psi| = rho,
// and local operators act through gather/apply/scatter over an IndexMap, so
// no full-space operator matrix is ever formed for state evolution.

namespace qsc {

struct PureState {
  RegisterSpace space;
  Vec amps;

  // Validates unit norm within the configured tolerance.
  static PureState make(RegisterSpace sp, Vec a);
  // Size check only; the caller guarantees the content.
  static PureState trusted(RegisterSpace sp, Vec a);
};

struct DensityOperator {
  RegisterSpace space;
  Mat rho;

  // Validates shape, hermiticity, positivity, and trace <= 1 (subnormalized
  // operators are allowed; generalized fidelity needs them).
  static DensityOperator make(RegisterSpace sp, Mat m);
  static DensityOperator trusted(RegisterSpace sp, Mat m);

  double trace_real() const;
};

// Basis vector |digits> in the canonical register order.
PureState basis_state(const RegisterSpace& sp, const std::vector<int>& digits);
int basis_index(const RegisterSpace& sp, const std::vector<int>& digits);

DensityOperator density(const PureState& psi);
PureState tensor(const PureState& a, const PureState& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);

// Marginal on `kept`, in the caller's order; the complement is traced out.
DensityOperator marginal(const DensityOperator& d,
                         const std::vector<std::string>& kept);
DensityOperator marginal(const PureState& psi,
                         const std::vector<std::string>& kept);
// Traces out the named registers; the rest keeps canonical order.
DensityOperator partial_trace(const DensityOperator& d,
                              const std::vector<std::string>& traced);

// Same registers, reordered canonical order.
PureState permuted(const PureState& psi,
                   const std::vector<std::string>& order);
DensityOperator permuted(const DensityOperator& d,
                         const std::vector<std::string>& order);

PureState purify(const DensityOperator& d, const std::string& ancilla_name);

// u acts on the named registers (caller's order), identity elsewhere.
void apply_unitary(PureState& psi, const Mat& u,
                   const std::vector<std::string>& names);

// Full-space matrix acting as m on the named registers, identity elsewhere.
Mat operator_on(const RegisterSpace& space, const Mat& m,
                const std::vector<std::string>& names);

// Isometry from the named input registers into (input x new): rows are
// indexed by (input index) * (new total dim) + (new index), columns by the
// input index. The new registers are appended at the end of the register
// order. Enforces isom† isom = 1.
PureState extend_with(const PureState& psi, const Mat& isom,
                      const std::vector<std::string>& in_names,
                      const std::vector<Register>& new_regs);

// Computational-basis projection of one register onto `value`: returns the
// outcome probability and the renormalized post-measurement state with that
// register removed. Zero-probability outcomes return an empty state.
std::pair<double, PureState> project_out(const PureState& psi,
                                         const std::string& name, int value);

Mat copy_isometry(int d);  // |y> -> |y>|y>

}  // namespace qsc
