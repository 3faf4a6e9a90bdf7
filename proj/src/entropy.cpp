#include "qsc/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qsc/eig.hpp"
#include "qsc/policy.hpp"

// Barrier solver notes.
//
// With rho permuted to [A..., B...] order, each stage minimizes
//   psi_mu(sigma) = tr sigma - mu logdet W,    W = 1_A (x) sigma - rho,
// by damped Newton steps over the orthonormal Hermitian basis {H_k} of the
// B space:
//   grad_k  = tr(G H_k),    G = 1_B - mu tr_A(W^{-1}),
//   Hess_kl = mu tr(W^{-1} (1 (x) H_k) W^{-1} (1 (x) H_l)).
// Expanding the trace in A/B block indices turns the Hessian into one
// contraction reused by every entry:
//   Hess_kl = mu sum_{j,m,n,i} H_k(j,m) C[j,m,n,i] H_l(n,i),
//   C[j,m,n,i] = sum_{a,b} W^{-1}((a,i),(b,j)) W^{-1}((b,m),(a,n)),
// an O(d^2 d_B^2) build feeding each entry through the at most two nonzeros
// per basis element. Every accepted iterate keeps W positive definite, so
// -log2 tr sigma is a certified lower bound on H_min no matter where the
// iteration stops; mu is lowered until the barrier gap mu * d drops below
// 1e-10 of the achieved trace.

namespace qsc {

namespace {

constexpr double kSlackTol = 1e-7;

struct BasisElem {
  int n = 0;
  int r[2] = {0, 0};
  int c[2] = {0, 0};
  cx v[2] = {cx(0.0, 0.0), cx(0.0, 0.0)};
};

// Orthonormal Hermitian basis: E_tt, then (E_pq + E_qp)/sqrt(2) and
// i(E_pq - E_qp)/sqrt(2) for p < q.
std::vector<BasisElem> herm_basis(int d) {
  std::vector<BasisElem> basis;
  basis.reserve(static_cast<size_t>(d) * d);
  for (int t = 0; t < d; ++t) {
    BasisElem e;
    e.n = 1;
    e.r[0] = t;
    e.c[0] = t;
    e.v[0] = cx(1.0, 0.0);
    basis.push_back(e);
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (int p = 0; p < d; ++p) {
    for (int q = p + 1; q < d; ++q) {
      BasisElem re;
      re.n = 2;
      re.r[0] = p;
      re.c[0] = q;
      re.v[0] = cx(s, 0.0);
      re.r[1] = q;
      re.c[1] = p;
      re.v[1] = cx(s, 0.0);
      basis.push_back(re);
      BasisElem im;
      im.n = 2;
      im.r[0] = p;
      im.c[0] = q;
      im.v[0] = cx(0.0, s);
      im.r[1] = q;
      im.c[1] = p;
      im.v[1] = cx(0.0, -s);
      basis.push_back(im);
    }
  }
  return basis;
}

InequalityReport finish_report(double lhs, double rhs) {
  InequalityReport rep;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.slack = lhs - rhs;
  rep.holds = rep.slack >= -kSlackTol;
  return rep;
}

void require_eps_zero(double eps, const char* who) {
  if (eps != 0.0)
    throw std::invalid_argument(std::string(who) +
                                ": instantiated at eps = 0 only");
}

void require_partition(const RegisterSpace& sp, std::vector<std::string> flat,
                       const char* who) {
  std::vector<std::string> all = sp.names();
  std::sort(all.begin(), all.end());
  std::sort(flat.begin(), flat.end());
  if (all != flat)
    throw std::invalid_argument(
        std::string(who) + ": the named registers must partition the space");
}

}  // namespace

MinEntropyResult min_entropy(const DensityOperator& rho,
                             const std::vector<std::string>& condition_on) {
  const RegisterSpace bspace = rho.space.subset(condition_on);
  const RegisterSpace aspace = rho.space.without(condition_on);
  const int da = aspace.total_dim();
  const int db = bspace.total_dim();
  const int d = da * db;
  if (db > 32 || d > 256)
    throw std::invalid_argument(
        "min_entropy: dimensions exceed the dense solver limits");
  const double tr_rho = rho.trace_real();
  if (tr_rho < 1e-14)
    throw std::invalid_argument("min_entropy: input has zero trace");

  std::vector<std::string> order = aspace.names();
  order.insert(order.end(), condition_on.begin(), condition_on.end());
  const Mat rp = permuted(rho, order).rho;

  const double lmax =
      std::max(eigvals_hermitian(rp).front(), 1e-300);
  Mat sigma = scale(Mat::identity(db), cx(1.1 * lmax, 0.0));

  const std::vector<BasisElem> basis = herm_basis(db);
  const int nk = static_cast<int>(basis.size());
  const Mat eye_a = Mat::identity(da);

  MinEntropyResult out;
  const int newton_cap = 500;
  int total = 0;
  bool converged = true;

  // psi and feasibility at a candidate sigma; false when W is not PD.
  auto eval = [&](const Mat& s, double mu, double& psi) -> bool {
    Mat w = sub(kron(eye_a, s), rp);
    Mat l;
    if (!cholesky(w, l)) return false;
    psi = trace(s).real() - mu * cholesky_logdet(l);
    return true;
  };

  std::vector<cx> ctab(static_cast<size_t>(db) * db * db * db);
  std::vector<double> grad(nk), hess, rhs;

  double mu = trace(sigma).real() / d;
  for (;;) {
    // Center at the current mu.
    for (;;) {
      const Mat w = sub(kron(eye_a, sigma), rp);
      const Mat winv = hpd_inverse(w);

      // G = 1_B - mu tr_A(W^{-1}).
      Mat g = Mat::identity(db);
      for (int i = 0; i < db; ++i)
        for (int j = 0; j < db; ++j) {
          cx acc(0.0, 0.0);
          for (int a = 0; a < da; ++a) acc += winv(a * db + i, a * db + j);
          g(i, j) -= mu * acc;
        }

      for (int j = 0; j < db; ++j)
        for (int m = 0; m < db; ++m)
          for (int n = 0; n < db; ++n)
            for (int i = 0; i < db; ++i) {
              cx acc(0.0, 0.0);
              for (int a = 0; a < da; ++a)
                for (int b = 0; b < da; ++b)
                  acc += winv(a * db + i, b * db + j) *
                         winv(b * db + m, a * db + n);
              ctab[static_cast<size_t>(((j * db + m) * db + n)) * db + i] =
                  acc;
            }

      for (int k = 0; k < nk; ++k) {
        cx acc(0.0, 0.0);
        for (int t = 0; t < basis[k].n; ++t)
          acc += g(basis[k].c[t], basis[k].r[t]) * basis[k].v[t];
        grad[k] = acc.real();
      }

      hess.assign(static_cast<size_t>(nk) * nk, 0.0);
      for (int k = 0; k < nk; ++k)
        for (int l2 = 0; l2 <= k; ++l2) {
          cx acc(0.0, 0.0);
          for (int s = 0; s < basis[k].n; ++s)
            for (int t = 0; t < basis[l2].n; ++t) {
              const int j = basis[k].r[s], m = basis[k].c[s];
              const int n = basis[l2].r[t], i = basis[l2].c[t];
              acc += basis[k].v[s] * basis[l2].v[t] *
                     ctab[static_cast<size_t>(((j * db + m) * db + n)) * db +
                          i];
            }
          const double hval = mu * acc.real();
          hess[static_cast<size_t>(k) * nk + l2] = hval;
          hess[static_cast<size_t>(l2) * nk + k] = hval;
        }

      rhs.assign(grad.begin(), grad.end());
      for (double& r : rhs) r = -r;
      std::vector<double> hcopy = hess;
      bool solved = spd_solve(hcopy, nk, rhs);
      double ridge = 1e-12;
      while (!solved && ridge < 1.0) {
        hcopy = hess;
        double dmax = 0.0;
        for (int k = 0; k < nk; ++k)
          dmax = std::max(dmax, hess[static_cast<size_t>(k) * nk + k]);
        for (int k = 0; k < nk; ++k)
          hcopy[static_cast<size_t>(k) * nk + k] += ridge * dmax;
        rhs.assign(grad.begin(), grad.end());
        for (double& r : rhs) r = -r;
        solved = spd_solve(hcopy, nk, rhs);
        ridge *= 100.0;
      }
      if (!solved) {
        converged = false;
        break;
      }

      double dec = 0.0;
      for (int k = 0; k < nk; ++k) dec -= grad[k] * rhs[k];
      const double smax = trace(sigma).real();
      const double tol = std::max(0.02 * mu, 1e-14 * smax);
      if (dec * 0.5 <= tol) break;
      if (total >= newton_cap) {
        converged = false;
        break;
      }

      Mat step = Mat::zero(db, db);
      for (int k = 0; k < nk; ++k)
        for (int t = 0; t < basis[k].n; ++t)
          step(basis[k].r[t], basis[k].c[t]) += rhs[k] * basis[k].v[t];

      double psi0 = 0.0;
      eval(sigma, mu, psi0);
      double alpha = 1.0;
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        const Mat cand = add(sigma, scale(step, cx(alpha, 0.0)));
        double psi1 = 0.0;
        if (eval(cand, mu, psi1) && psi1 <= psi0 - 0.25 * alpha * dec) {
          sigma = cand;
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      ++total;
      if (!accepted) {
        if (dec * 0.5 > 100.0 * tol) converged = false;
        break;
      }
    }

    const double s_now = trace(sigma).real();
    const double mu_floor = 1e-10 * s_now / d;
    if (mu <= mu_floor * (1.0 + 1e-9) || !converged) break;
    mu = std::max(mu / 8.0, mu_floor);
  }

  const double s_final = trace(sigma).real();
  out.lambda = -std::log2(s_final);
  out.iterations = total;
  out.converged = converged;
  const Mat w_final = sub(kron(eye_a, sigma), rp);
  out.feasibility_gap = std::max(0.0, -eigvals_hermitian(w_final).back());
  out.optimal_sigma = DensityOperator::make(
      bspace, scale(hermitize(sigma), cx(1.0 / s_final, 0.0)));
  return out;
}

double guessing_probability(const CQState& cq) {
  if (std::abs(weight_sum(cq) - 1.0) > 1e-9)
    throw std::invalid_argument(
        "guessing_probability: needs a normalized CQ state");
  const DensityOperator joint = cq_joint(cq, "X");
  return std::exp2(-min_entropy(joint, cq.quantum_space.names()).lambda);
}

SmoothMinEntropyResult smooth_min_entropy(
    const DensityOperator& rho, const std::vector<std::string>& condition_on,
    const SmoothPolicy& policy) {
  if (!(policy.epsilon >= 0.0 && policy.epsilon < 1.0))
    throw std::invalid_argument(
        "smooth_min_entropy: epsilon must lie in [0, 1)");
  if (policy.candidate_count <= 0)
    throw std::invalid_argument(
        "smooth_min_entropy: candidate_count must be positive");
  if (policy.mode == SmoothPolicy::Mode::exact_zero && policy.epsilon != 0.0)
    throw std::invalid_argument(
        "smooth_min_entropy: exact_zero mode requires epsilon = 0");

  SmoothMinEntropyResult out;
  out.lambda = min_entropy(rho, condition_on).lambda;
  if (policy.epsilon == 0.0) return out;

  const EigResult es = eig_hermitian(rho.rho);
  const int d = rho.rho.rows;
  std::vector<double> lam(es.values);
  for (double& v : lam) v = std::max(v, 0.0);
  double tr_all = 0.0;
  for (double v : lam) tr_all += v;
  const double lmax = lam.front();

  // Purified distance between rho and rho capped at level c; co-diagonal,
  // so the generalized fidelity is a scalar sum over the spectrum.
  auto pdist = [&](double c) -> double {
    double f = 0.0, trc = 0.0;
    for (double v : lam) {
      trc += std::min(v, c);
      f += (v <= c) ? v : std::sqrt(v * c);
    }
    double fbar = f + std::sqrt(std::max(0.0, 1.0 - tr_all) *
                                std::max(0.0, 1.0 - trc));
    fbar = std::min(fbar, 1.0);
    return std::sqrt(std::max(0.0, 1.0 - fbar * fbar));
  };

  bool any = false;
  for (int j = 1; j <= policy.candidate_count; ++j) {
    const double target = policy.epsilon * j / policy.candidate_count;
    ++out.candidates_tried;
    if (pdist(0.0) < target) continue;
    double lo = 0.0, hi = lmax;
    for (int it = 0; it < 90; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (pdist(mid) > target)
        lo = mid;
      else
        hi = mid;
    }
    const double c = hi;

    Mat m = Mat::zero(d, d);
    double trc = 0.0;
    for (int k = 0; k < d; ++k) {
      const double w = std::min(lam[k], c);
      trc += w;
      if (w == 0.0) continue;
      for (int r = 0; r < d; ++r)
        for (int col = 0; col < d; ++col)
          m(r, col) +=
              w * es.vectors(r, k) * std::conj(es.vectors(col, k));
    }
    if (trc < 1e-13) continue;
    const DensityOperator cand = DensityOperator::trusted(rho.space,
                                                          hermitize(m));
    if (purified_distance(cand, rho) > policy.epsilon + 1e-9) continue;
    any = true;
    out.lambda = std::max(out.lambda, min_entropy(cand, condition_on).lambda);
  }
  out.candidate_found = any;
  return out;
}

InequalityReport check_classical_chain_rule(
    const DensityOperator& rho_xbz, const std::vector<std::string>& x,
    const std::vector<std::string>& b, const std::string& z, double eps) {
  require_eps_zero(eps, "check_classical_chain_rule");
  std::vector<std::string> flat = x;
  flat.insert(flat.end(), b.begin(), b.end());
  flat.push_back(z);
  require_partition(rho_xbz.space, flat, "check_classical_chain_rule");

  // No coherence between distinct values of Z.
  const IndexMap map = make_index_map(rho_xbz.space, {z});
  double off = 0.0;
  for (int s = 0; s < map.sub_dim; ++s)
    for (int s2 = 0; s2 < map.sub_dim; ++s2) {
      if (s == s2) continue;
      for (int r = 0; r < map.rest_dim; ++r)
        for (int r2 = 0; r2 < map.rest_dim; ++r2)
          off = std::max(off, std::abs(rho_xbz.rho(map.global(s, r),
                                                   map.global(s2, r2))));
    }
  if (off > 1e-9)
    throw std::invalid_argument("check_classical_chain_rule: register '" + z +
                                "' carries coherence between its values");

  std::vector<std::string> bz = b;
  bz.push_back(z);
  const double lhs = min_entropy(rho_xbz, bz).lambda;
  std::vector<std::string> xb = x;
  xb.insert(xb.end(), b.begin(), b.end());
  const double hxb = min_entropy(marginal(rho_xbz, xb), b).lambda;
  const double rhs = hxb - std::log2(double(rho_xbz.space.dim_of(z)));
  return finish_report(lhs, rhs);
}

InequalityReport check_measurement_bound(const DensityOperator& rho_xbc,
                                         const std::vector<std::string>& x,
                                         const std::vector<std::string>& b,
                                         const std::string& c,
                                         const Mat& basis, double eps) {
  require_eps_zero(eps, "check_measurement_bound");
  std::vector<std::string> flat = x;
  flat.insert(flat.end(), b.begin(), b.end());
  flat.push_back(c);
  require_partition(rho_xbc.space, flat, "check_measurement_bound");

  const int dc = rho_xbc.space.dim_of(c);
  if (basis.rows != dc || basis.cols != dc)
    throw std::invalid_argument("check_measurement_bound: basis shape");
  if (max_abs(sub(mul(adjoint(basis), basis), Mat::identity(dc))) > 1e-9)
    throw std::invalid_argument(
        "check_measurement_bound: basis columns are not orthonormal");

  // Dephase C in the given basis: rho' = sum_z Pi_z rho Pi_z.
  Mat dephased = Mat::zero(rho_xbc.rho.rows, rho_xbc.rho.cols);
  for (int zv = 0; zv < dc; ++zv) {
    Mat proj(dc, dc);
    for (int i = 0; i < dc; ++i)
      for (int j = 0; j < dc; ++j)
        proj(i, j) = basis(i, zv) * std::conj(basis(j, zv));
    const Mat full = operator_on(rho_xbc.space, proj, {c});
    dephased = add(dephased, mul(full, mul(rho_xbc.rho, full)));
  }
  const DensityOperator rho_xbz =
      DensityOperator::trusted(rho_xbc.space, hermitize(dephased));

  std::vector<std::string> bc = b;
  bc.push_back(c);
  const double lhs = min_entropy(rho_xbc, bc).lambda;
  const double hxbz = min_entropy(rho_xbz, bc).lambda;
  const double rhs = hxbz - std::log2(double(dc));
  return finish_report(lhs, rhs);
}

InequalityReport check_quantum_chain_rule(const DensityOperator& rho_xbc,
                                          const std::vector<std::string>& x,
                                          const std::vector<std::string>& b,
                                          const std::string& c, double eps) {
  require_eps_zero(eps, "check_quantum_chain_rule");
  std::vector<std::string> flat = x;
  flat.insert(flat.end(), b.begin(), b.end());
  flat.push_back(c);
  require_partition(rho_xbc.space, flat, "check_quantum_chain_rule");

  std::vector<std::string> bc = b;
  bc.push_back(c);
  const double lhs = min_entropy(rho_xbc, bc).lambda;
  std::vector<std::string> xb = x;
  xb.insert(xb.end(), b.begin(), b.end());
  const double hxb = min_entropy(marginal(rho_xbc, xb), b).lambda;
  const double rhs = hxb - 2.0 * std::log2(double(rho_xbc.space.dim_of(c)));
  return finish_report(lhs, rhs);
}

}  // namespace qsc
