#include "qsc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "qsc/eig.hpp"
#include "qsc/policy.hpp"

namespace qsc {

double trace_distance(const Mat& rho, const Mat& tau) {
  return 0.5 * trace_norm_hermitian(sub(rho, tau));
}

double fidelity(const Mat& rho, const Mat& tau) {
  if (rho.rows != tau.rows || rho.cols != tau.cols)
    throw std::invalid_argument("fidelity: shape mismatch");
  return nuclear_norm(mul(sqrtm_psd(rho), sqrtm_psd(tau)));
}

static void require_same_space(const DensityOperator& rho,
                               const DensityOperator& tau, const char* op) {
  if (!rho.space.same_layout(tau.space))
    throw std::invalid_argument(std::string(op) + ": register space mismatch");
}

double trace_distance(const DensityOperator& rho, const DensityOperator& tau) {
  require_same_space(rho, tau, "trace_distance");
  return trace_distance(rho.rho, tau.rho);
}

double fidelity(const DensityOperator& rho, const DensityOperator& tau) {
  require_same_space(rho, tau, "fidelity");
  return fidelity(rho.rho, tau.rho);
}

double generalized_fidelity(const DensityOperator& rho,
                            const DensityOperator& tau) {
  require_same_space(rho, tau, "generalized_fidelity");
  double a = std::max(0.0, 1.0 - rho.trace_real());
  double b = std::max(0.0, 1.0 - tau.trace_real());
  return fidelity(rho.rho, tau.rho) + std::sqrt(a * b);
}

double purified_distance(const DensityOperator& rho,
                         const DensityOperator& tau) {
  double f = std::min(1.0, generalized_fidelity(rho, tau));
  return std::sqrt(std::max(0.0, 1.0 - f * f));
}

CQState make_cq_state(int ell, RegisterSpace quantum_space,
                      std::vector<int> alphabet, std::vector<double> weights,
                      std::vector<Mat> conditionals) {
  const double tol = policy().validity_tol;
  if (ell < 1 || ell > 20) throw std::invalid_argument("cq state: bad ell");
  if (alphabet.empty()) throw std::invalid_argument("cq state: empty alphabet");
  if (alphabet.size() != weights.size() ||
      alphabet.size() != conditionals.size())
    throw std::invalid_argument("cq state: field lengths differ");
  std::set<int> seen;
  double total = 0.0;
  int d = quantum_space.total_dim();
  for (size_t i = 0; i < alphabet.size(); ++i) {
    int x = alphabet[i];
    if (x < 0 || x >= (1 << ell))
      throw std::invalid_argument("cq state: symbol out of range");
    if (!seen.insert(x).second)
      throw std::invalid_argument("cq state: duplicate symbol");
    if (weights[i] < -tol)
      throw std::invalid_argument("cq state: negative weight");
    total += weights[i];
    const Mat& c = conditionals[i];
    if (!c.square() || c.rows != d)
      throw std::invalid_argument("cq state: conditional shape mismatch");
    if (std::abs(trace(c) - cx(1.0)) > 1e-9)
      throw std::invalid_argument("cq state: conditional not normalized");
    DensityOperator::make(quantum_space, c);  // hermiticity and positivity
  }
  if (total > 1.0 + tol)
    throw std::invalid_argument("cq state: weights sum beyond 1");
  return CQState{ell, std::move(quantum_space), std::move(alphabet),
                 std::move(weights), std::move(conditionals)};
}

double weight_sum(const CQState& cq) {
  double s = 0.0;
  for (double w : cq.weights) s += w;
  return s;
}

Mat cq_density(const CQState& cq) {
  int nx = 1 << cq.ell;
  int d = cq.quantum_space.total_dim();
  Mat out(nx * d, nx * d);
  for (size_t i = 0; i < cq.alphabet.size(); ++i) {
    int base = cq.alphabet[i] * d;
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        out(base + r, base + c) = cq.weights[i] * cq.conditionals[i](r, c);
  }
  return out;
}

DensityOperator cq_joint(const CQState& cq, const std::string& x_name) {
  if (cq.quantum_space.has(x_name))
    throw std::invalid_argument("cq joint: register name '" + x_name +
                                "' already in use");
  std::vector<Register> regs = {{x_name, 1 << cq.ell}};
  for (const Register& r : cq.quantum_space.registers()) regs.push_back(r);
  RegisterSpace sp(std::move(regs), policy().internal_dimension_cap);
  return DensityOperator::trusted(std::move(sp), cq_density(cq));
}

double cq_mixture_distance(const CQState& a, const CQState& b) {
  if (a.ell != b.ell ||
      a.quantum_space.total_dim() != b.quantum_space.total_dim())
    throw std::invalid_argument("cq mixture distance: shape mismatch");
  int d = a.quantum_space.total_dim();
  std::set<int> symbols(a.alphabet.begin(), a.alphabet.end());
  symbols.insert(b.alphabet.begin(), b.alphabet.end());

  auto block = [d](const CQState& cq, int x) {
    for (size_t i = 0; i < cq.alphabet.size(); ++i)
      if (cq.alphabet[i] == x) return scale(cq.conditionals[i], cq.weights[i]);
    return Mat::zero(d, d);
  };

  double total = 0.0;
  for (int x : symbols)
    total += trace_norm_hermitian(sub(block(a, x), block(b, x)));
  return 0.5 * total;
}

double uniform_objective(const CQState& cq, const Mat& sigma) {
  int nx = 1 << cq.ell;
  int d = cq.quantum_space.total_dim();
  if (!sigma.square() || sigma.rows != d)
    throw std::invalid_argument("uniform objective: sigma shape mismatch");
  Mat uniform_part = scale(sigma, 1.0 / nx);
  double total = 0.0;
  std::set<int> present(cq.alphabet.begin(), cq.alphabet.end());
  for (size_t i = 0; i < cq.alphabet.size(); ++i)
    total += trace_norm_hermitian(
        sub(scale(cq.conditionals[i], cq.weights[i]), uniform_part));
  // Symbols with zero weight still contribute their ||sigma/2^l||_1 block.
  int missing = nx - static_cast<int>(present.size());
  if (missing > 0) total += missing * trace_norm_hermitian(uniform_part);
  return 0.5 * total;
}

std::pair<double, double> hiding_implies_close(const CQState& cq) {
  if (cq.ell != 1 || cq.alphabet.size() != 2)
    throw std::invalid_argument("hiding_implies_close: need a binary state");
  if (std::abs(cq.weights[0] - 0.5) > 1e-9 ||
      std::abs(cq.weights[1] - 0.5) > 1e-9)
    throw std::invalid_argument("hiding_implies_close: weights must be 1/2");
  double d_unif = dist_from_uniform(cq).value;
  int i0 = (cq.alphabet[0] == 0) ? 0 : 1;
  double d = trace_distance(cq.conditionals[i0], cq.conditionals[1 - i0]);
  if (d > 2.0 * d_unif + 1e-8)
    throw std::runtime_error(
        "hiding_implies_close: conditional distance exceeds 2x distance from "
        "uniform");
  return {d_unif, d};
}

}  // namespace qsc
