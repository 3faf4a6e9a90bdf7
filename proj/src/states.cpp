#include "qsc/states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qsc/eig.hpp"
#include "qsc/policy.hpp"

namespace qsc {

PureState PureState::make(RegisterSpace sp, Vec a) {
  PureState s = trusted(std::move(sp), std::move(a));
  double n = vec_norm(s.amps);
  if (std::abs(n - 1.0) > policy().validity_tol)
    throw std::invalid_argument("pure state: norm " + std::to_string(n) +
                                " is not 1");
  return s;
}

PureState PureState::trusted(RegisterSpace sp, Vec a) {
  if (static_cast<int>(a.size()) != sp.total_dim())
    throw std::invalid_argument("pure state: amplitude count mismatch");
  return PureState{std::move(sp), std::move(a)};
}

DensityOperator DensityOperator::make(RegisterSpace sp, Mat m) {
  const double tol = policy().validity_tol;
  if (!m.square() || m.rows != sp.total_dim())
    throw std::invalid_argument("density operator: shape mismatch");
  if (!is_hermitian(m, tol))
    throw std::invalid_argument("density operator: not Hermitian");
  cx t = trace(m);
  if (std::abs(t.imag()) > tol || t.real() < -tol || t.real() > 1.0 + tol)
    throw std::invalid_argument("density operator: trace outside [0, 1]");
  Mat shifted = m;
  for (int i = 0; i < m.rows; ++i) shifted(i, i) += tol;
  Mat l;
  if (!cholesky(shifted, l))
    throw std::invalid_argument("density operator: not positive semidefinite");
  return trusted(std::move(sp), std::move(m));
}

DensityOperator DensityOperator::trusted(RegisterSpace sp, Mat m) {
  if (!m.square() || m.rows != sp.total_dim())
    throw std::invalid_argument("density operator: shape mismatch");
  return DensityOperator{std::move(sp), std::move(m)};
}

double DensityOperator::trace_real() const { return trace(rho).real(); }

int basis_index(const RegisterSpace& sp, const std::vector<int>& digits) {
  if (static_cast<int>(digits.size()) != sp.count())
    throw std::invalid_argument("basis index: digit count mismatch");
  int g = 0;
  for (int k = 0; k < sp.count(); ++k) {
    if (digits[k] < 0 || digits[k] >= sp.at(k).dim)
      throw std::invalid_argument("basis index: digit out of range for '" +
                                  sp.at(k).name + "'");
    g = g * sp.at(k).dim + digits[k];
  }
  return g;
}

PureState basis_state(const RegisterSpace& sp,
                      const std::vector<int>& digits) {
  Vec a(sp.total_dim(), cx(0.0));
  a[basis_index(sp, digits)] = 1.0;
  return PureState::trusted(sp, std::move(a));
}

DensityOperator density(const PureState& psi) {
  int n = psi.space.total_dim();
  Mat r(n, n);
  for (int i = 0; i < n; ++i) {
    if (psi.amps[i] == cx(0.0)) continue;
    for (int j = 0; j < n; ++j)
      r(i, j) = psi.amps[i] * std::conj(psi.amps[j]);
  }
  return DensityOperator::trusted(psi.space, std::move(r));
}

static RegisterSpace joined(const RegisterSpace& a, const RegisterSpace& b) {
  std::vector<Register> regs = a.registers();
  regs.insert(regs.end(), b.registers().begin(), b.registers().end());
  return RegisterSpace(std::move(regs), std::max(a.cap(), b.cap()));
}

PureState tensor(const PureState& a, const PureState& b) {
  RegisterSpace sp = joined(a.space, b.space);
  int db = b.space.total_dim();
  Vec out(sp.total_dim());
  for (int i = 0; i < a.space.total_dim(); ++i)
    for (int j = 0; j < db; ++j) out[i * db + j] = a.amps[i] * b.amps[j];
  return PureState::trusted(std::move(sp), std::move(out));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator::trusted(joined(a.space, b.space),
                                  kron(a.rho, b.rho));
}

DensityOperator marginal(const DensityOperator& d,
                         const std::vector<std::string>& kept) {
  IndexMap m = make_index_map(d.space, kept);
  Mat out(m.sub_dim, m.sub_dim);
  for (int s = 0; s < m.sub_dim; ++s)
    for (int t = 0; t < m.sub_dim; ++t) {
      cx acc = 0.0;
      for (int r = 0; r < m.rest_dim; ++r)
        acc += d.rho(m.global(s, r), m.global(t, r));
      out(s, t) = acc;
    }
  return DensityOperator::trusted(d.space.subset(kept), std::move(out));
}

DensityOperator marginal(const PureState& psi,
                         const std::vector<std::string>& kept) {
  IndexMap m = make_index_map(psi.space, kept);
  Mat out(m.sub_dim, m.sub_dim);
  for (int s = 0; s < m.sub_dim; ++s)
    for (int t = 0; t <= s; ++t) {
      cx acc = 0.0;
      for (int r = 0; r < m.rest_dim; ++r)
        acc += psi.amps[m.global(s, r)] * std::conj(psi.amps[m.global(t, r)]);
      out(s, t) = acc;
      out(t, s) = std::conj(acc);
    }
  return DensityOperator::trusted(psi.space.subset(kept), std::move(out));
}

DensityOperator partial_trace(const DensityOperator& d,
                              const std::vector<std::string>& traced) {
  return marginal(d, d.space.without(traced).names());
}

PureState permuted(const PureState& psi,
                   const std::vector<std::string>& order) {
  if (static_cast<int>(order.size()) != psi.space.count())
    throw std::invalid_argument("permute: order must list every register");
  IndexMap m = make_index_map(psi.space, order);
  Vec out(psi.amps.size());
  for (int s = 0; s < m.sub_dim; ++s) out[s] = psi.amps[m.sub_off[s]];
  return PureState::trusted(psi.space.subset(order), std::move(out));
}

DensityOperator permuted(const DensityOperator& d,
                         const std::vector<std::string>& order) {
  if (static_cast<int>(order.size()) != d.space.count())
    throw std::invalid_argument("permute: order must list every register");
  IndexMap m = make_index_map(d.space, order);
  Mat out(d.rho.rows, d.rho.cols);
  for (int s = 0; s < m.sub_dim; ++s)
    for (int t = 0; t < m.sub_dim; ++t)
      out(s, t) = d.rho(m.sub_off[s], m.sub_off[t]);
  return DensityOperator::trusted(d.space.subset(order), std::move(out));
}

PureState purify(const DensityOperator& d, const std::string& ancilla_name) {
  int n = d.space.total_dim();
  if (n < 2) throw std::invalid_argument("purify: space too small");
  if (d.space.has(ancilla_name))
    throw std::invalid_argument("purify: ancilla name '" + ancilla_name +
                                "' already in use");
  std::vector<Register> regs = d.space.registers();
  regs.push_back({ancilla_name, n});
  RegisterSpace sp(std::move(regs), policy().internal_dimension_cap);
  EigResult e = eig_hermitian(d.rho);
  Vec out(static_cast<size_t>(n) * n, cx(0.0));
  for (int k = 0; k < n; ++k) {
    double w = std::sqrt(std::max(0.0, e.values[k]));
    if (w == 0.0) continue;
    for (int i = 0; i < n; ++i)
      out[static_cast<size_t>(i) * n + k] = w * e.vectors(i, k);
  }
  return PureState::trusted(std::move(sp), std::move(out));
}

void apply_unitary(PureState& psi, const Mat& u,
                   const std::vector<std::string>& names) {
  IndexMap m = make_index_map(psi.space, names);
  if (!u.square() || u.rows != m.sub_dim)
    throw std::invalid_argument("apply unitary: operator shape mismatch");
  Vec in(m.sub_dim), out(m.sub_dim);
  for (int r = 0; r < m.rest_dim; ++r) {
    for (int s = 0; s < m.sub_dim; ++s) in[s] = psi.amps[m.global(s, r)];
    for (int s = 0; s < m.sub_dim; ++s) {
      cx acc = 0.0;
      const cx* row = &u.a[static_cast<size_t>(s) * u.cols];
      for (int t = 0; t < m.sub_dim; ++t) acc += row[t] * in[t];
      out[s] = acc;
    }
    for (int s = 0; s < m.sub_dim; ++s) psi.amps[m.global(s, r)] = out[s];
  }
}

Mat operator_on(const RegisterSpace& space, const Mat& m,
                const std::vector<std::string>& names) {
  IndexMap im = make_index_map(space, names);
  if (!m.square() || m.rows != im.sub_dim)
    throw std::invalid_argument("operator_on: operator shape mismatch");
  Mat out(space.total_dim(), space.total_dim());
  for (int s = 0; s < im.sub_dim; ++s)
    for (int t = 0; t < im.sub_dim; ++t) {
      cx v = m(s, t);
      if (v == cx(0.0)) continue;
      for (int r = 0; r < im.rest_dim; ++r)
        out(im.global(s, r), im.global(t, r)) = v;
    }
  return out;
}

PureState extend_with(const PureState& psi, const Mat& isom,
                      const std::vector<std::string>& in_names,
                      const std::vector<Register>& new_regs) {
  IndexMap old_map = make_index_map(psi.space, in_names);
  int d_in = old_map.sub_dim;
  int d_new = 1;
  for (const Register& r : new_regs) d_new *= r.dim;
  if (isom.cols != d_in || isom.rows != d_in * d_new)
    throw std::invalid_argument("extend_with: isometry shape mismatch");
  Mat gram = mul(adjoint(isom), isom);
  for (int i = 0; i < d_in; ++i) gram(i, i) -= 1.0;
  if (max_abs(gram) > policy().validity_tol)
    throw std::invalid_argument("extend_with: matrix is not an isometry");

  RegisterSpace sp = psi.space.appended(new_regs);
  std::vector<std::string> out_names = in_names;
  for (const Register& r : new_regs) out_names.push_back(r.name);
  IndexMap new_map = make_index_map(sp, out_names);

  Vec out(sp.total_dim(), cx(0.0));
  Vec in(d_in);
  for (int r = 0; r < old_map.rest_dim; ++r) {
    for (int s = 0; s < d_in; ++s) in[s] = psi.amps[old_map.global(s, r)];
    for (int row = 0; row < isom.rows; ++row) {
      cx acc = 0.0;
      for (int s = 0; s < d_in; ++s) acc += isom(row, s) * in[s];
      out[new_map.global(row, r)] = acc;
    }
  }
  return PureState::trusted(std::move(sp), std::move(out));
}

std::pair<double, PureState> project_out(const PureState& psi,
                                         const std::string& name, int value) {
  IndexMap m = make_index_map(psi.space, {name});
  if (value < 0 || value >= m.sub_dim)
    throw std::invalid_argument("project_out: value out of range");
  double w = 0.0;
  for (int r = 0; r < m.rest_dim; ++r)
    w += std::norm(psi.amps[m.global(value, r)]);
  if (w < 1e-24) return {0.0, PureState{}};
  double inv = 1.0 / std::sqrt(w);
  Vec out(m.rest_dim);
  for (int r = 0; r < m.rest_dim; ++r)
    out[r] = psi.amps[m.global(value, r)] * inv;
  return {w, PureState::trusted(psi.space.without({name}), std::move(out))};
}

Mat copy_isometry(int d) {
  Mat m(d * d, d);
  for (int y = 0; y < d; ++y) m(y * d + y, y) = 1.0;
  return m;
}

}  // namespace qsc
