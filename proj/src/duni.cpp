#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qsc/eig.hpp"
#include "qsc/metrics.hpp"
#include "qsc/policy.hpp"

// Solver for duni(X|B) = min_sigma f(sigma), with
//   f(sigma) = (1/2) sum_x || P(x) rho^x - sigma/2^l ||_1.
//
// f is convex. At an evaluation point, the sign operators W_x = 2 Pi_x - 1
// (Pi_x the positive eigenprojector of the block difference) give
//   f(sigma') >= sum_x P(x) tr(Pi_x rho^x) - (1/2^l) tr((sum_x Pi_x) sigma')
// for every normalized sigma', with equality at the evaluation point. These
// tangent cuts feed a Kelley master problem
//   minimize t  s.t.  t >= b_j - <A_j, sigma>,  sigma >= 0, tr sigma = 1,
// whose optimum lower-bounds min f, while the best evaluated f(sigma)
// upper-bounds it. The master is solved with a log-barrier Newton method in
// coordinates over a traceless Hermitian basis; the barrier optimum at
// parameter mu is within mu * (cuts + dim) of the master optimum, which
// keeps the reported gap certified. Iterate until the gap closes.

namespace qsc {

namespace {

struct Cut {
  double c = 0.0;               // b_j - tr(A_j)/d, so s_j = t - c + a.theta
  std::vector<double> a;        // <A_j, B_k> per basis element
  Mat full;                     // A_j itself, for evaluating <A_j, sigma>
  double b = 0.0;
};

// Traceless Hermitian basis: off-diagonal pairs (E_ij+E_ji)/sqrt2 and
// i(E_ij-E_ji)/sqrt2, then diagonal directions E_tt - 1/d for t < d-1.
std::vector<Mat> traceless_basis(int d) {
  std::vector<Mat> basis;
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Mat re(d, d), im(d, d);
      re(i, j) = r;
      re(j, i) = r;
      im(i, j) = cx(0, r);
      im(j, i) = cx(0, -r);
      basis.push_back(re);
      basis.push_back(im);
    }
  for (int t = 0; t + 1 < d; ++t) {
    Mat m(d, d);
    for (int i = 0; i < d; ++i) m(i, i) = (i == t ? 1.0 : 0.0) - 1.0 / d;
    basis.push_back(m);
  }
  return basis;
}

double herm_inner(const Mat& a, const Mat& b) {
  cx s = 0.0;
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) s += a(i, j) * b(j, i);
  return s.real();
}

Mat sigma_at(const std::vector<Mat>& basis, const std::vector<double>& theta,
             int d) {
  Mat s = scale(Mat::identity(d), 1.0 / d);
  for (size_t k = 0; k < basis.size(); ++k)
    if (theta[k] != 0.0) s = add(s, scale(basis[k], theta[k]));
  return s;
}

// Tangent cut of f at sigma; also returns f(sigma).
Cut make_cut(const CQState& cq, const Mat& sigma,
             const std::vector<Mat>& basis, double* f_value) {
  int nx = 1 << cq.ell;
  int d = cq.quantum_space.total_dim();
  Mat uniform_part = scale(sigma, 1.0 / nx);

  Mat proj_sum(d, d);
  double b = 0.0, f = 0.0;
  for (int x = 0; x < nx; ++x) {
    Mat block = scale(uniform_part, -1.0);
    const Mat* cond = nullptr;
    double w = 0.0;
    for (size_t i = 0; i < cq.alphabet.size(); ++i)
      if (cq.alphabet[i] == x) {
        cond = &cq.conditionals[i];
        w = cq.weights[i];
        block = add(block, scale(*cond, w));
        break;
      }
    EigResult e = eig_hermitian(block);
    Mat pi(d, d);
    for (int k = 0; k < d; ++k) {
      if (e.values[k] <= 0.0) continue;
      f += e.values[k];
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          pi(i, j) += e.vectors(i, k) * std::conj(e.vectors(j, k));
    }
    proj_sum = add(proj_sum, pi);
    if (cond) b += w * herm_inner(pi, *cond);
  }
  // f currently holds sum_x tr(Pi_x M_x) = (1/2) sum_x ||M_x||_1 since the
  // blocks have total trace 0 for a normalized CQ state.
  *f_value = f;

  Cut cut;
  cut.full = scale(proj_sum, 1.0 / nx);
  cut.b = b;
  cut.c = b - trace(cut.full).real() / d;
  cut.a.resize(basis.size());
  for (size_t k = 0; k < basis.size(); ++k)
    cut.a[k] = herm_inner(cut.full, basis[k]);
  return cut;
}

struct MasterOutcome {
  std::vector<double> theta;
  double lower_bound;
  bool solved;
};

// Log-barrier Newton solve of the cut master problem, warm started at theta.
MasterOutcome solve_master(const std::vector<Cut>& cuts,
                           const std::vector<Mat>& basis, int d,
                           std::vector<double> theta, double mu_min) {
  int kk = static_cast<int>(basis.size());
  int n = kk + 1;  // theta plus t
  int jj = static_cast<int>(cuts.size());

  Mat sigma = sigma_at(basis, theta, d);
  Mat l;
  if (!cholesky(sigma, l)) {  // fall back to the analytic center seed
    std::fill(theta.begin(), theta.end(), 0.0);
    sigma = sigma_at(basis, theta, d);
  }
  auto slacks = [&](double t, const std::vector<double>& th,
                    std::vector<double>& s) {
    for (int j = 0; j < jj; ++j) {
      double dot = 0.0;
      for (int k = 0; k < kk; ++k) dot += cuts[j].a[k] * th[k];
      s[j] = t - cuts[j].c + dot;
    }
  };

  std::vector<double> s(jj);
  slacks(0.0, theta, s);
  double t = 0.0;
  for (int j = 0; j < jj; ++j) t = std::max(t, 0.0 - s[j]);
  t += 0.5;  // strictly feasible start
  slacks(t, theta, s);

  double mu = 0.125;
  bool solved_all = true;
  bool centered = false;
  std::vector<double> grad(n), hess(static_cast<size_t>(n) * n), step(n);
  std::vector<Mat> tmats(kk);

  while (true) {
    centered = false;
    for (int iter = 0; iter < 60; ++iter) {
      Mat w_inv = hpd_inverse(sigma);
      for (int k = 0; k < kk; ++k) tmats[k] = mul(w_inv, basis[k]);

      std::fill(grad.begin(), grad.end(), 0.0);
      std::fill(hess.begin(), hess.end(), 0.0);
      grad[kk] = 1.0;
      for (int j = 0; j < jj; ++j) {
        double inv = 1.0 / s[j], inv2 = inv * inv;
        grad[kk] -= mu * inv;
        hess[static_cast<size_t>(kk) * n + kk] += mu * inv2;
        for (int k = 0; k < kk; ++k) {
          grad[k] -= mu * cuts[j].a[k] * inv;
          hess[static_cast<size_t>(kk) * n + k] += mu * cuts[j].a[k] * inv2;
          for (int l2 = 0; l2 <= k; ++l2)
            hess[static_cast<size_t>(k) * n + l2] +=
                mu * cuts[j].a[k] * cuts[j].a[l2] * inv2;
        }
      }
      for (int k = 0; k < kk; ++k) {
        grad[k] -= mu * trace(tmats[k]).real();
        for (int l2 = 0; l2 <= k; ++l2) {
          cx tr2 = 0.0;
          for (int i = 0; i < d; ++i)
            for (int j2 = 0; j2 < d; ++j2)
              tr2 += tmats[k](i, j2) * tmats[l2](j2, i);
          hess[static_cast<size_t>(k) * n + l2] += mu * tr2.real();
        }
      }
      for (int i = 0; i < n; ++i)
        for (int j2 = i + 1; j2 < n; ++j2)
          hess[static_cast<size_t>(i) * n + j2] =
              hess[static_cast<size_t>(j2) * n + i];

      step = grad;
      std::vector<double> hcopy = hess;
      if (!spd_solve(hcopy, n, step)) {
        solved_all = false;
        break;
      }
      for (double& v : step) v = -v;
      double decrement = 0.0;
      for (int i = 0; i < n; ++i) decrement -= grad[i] * step[i];
      if (decrement < 1e-13 * std::max(1.0, std::abs(t))) {
        centered = true;
        break;
      }

      double alpha = 1.0;
      std::vector<double> th_try(kk);
      std::vector<double> s_try(jj);
      bool moved = false;
      for (int half = 0; half < 60; ++half, alpha *= 0.5) {
        for (int k = 0; k < kk; ++k) th_try[k] = theta[k] + alpha * step[k];
        double t_try = t + alpha * step[kk];
        slacks(t_try, th_try, s_try);
        bool ok = true;
        for (double v : s_try)
          if (v <= 0.0) ok = false;
        if (!ok) continue;
        Mat sig_try = sigma_at(basis, th_try, d);
        Mat lt;
        if (!cholesky(sig_try, lt)) continue;
        theta = th_try;
        t = t_try;
        s = s_try;
        sigma = sig_try;
        moved = true;
        break;
      }
      if (!moved) break;
    }
    if (mu <= mu_min) break;
    mu = std::max(mu / 8.0, mu_min);
  }

  // Barrier optimum at mu is within mu * (cuts + d) of the master optimum;
  // the bound is only claimed when the final centering converged.
  MasterOutcome out;
  out.theta = theta;
  out.lower_bound = t - mu * (jj + d);
  out.solved = solved_all && centered;
  return out;
}

}  // namespace

UniformDistanceResult dist_from_uniform(const CQState& cq) {
  if (std::abs(weight_sum(cq) - 1.0) > 1e-9)
    throw std::invalid_argument("dist_from_uniform: state not normalized");
  int d = cq.quantum_space.total_dim();

  UniformDistanceResult res;
  if (d == 1) {  // trivial side information: sigma is forced
    Mat one = Mat::identity(1);
    res.value = uniform_objective(cq, one);
    res.optimal_sigma = DensityOperator::trusted(cq.quantum_space, one);
    res.iterations = 0;
    res.certified_gap = 0.0;
    res.converged = true;
    return res;
  }

  std::vector<Mat> basis = traceless_basis(d);
  std::vector<double> theta(basis.size(), 0.0);
  std::vector<Cut> cuts;

  Mat sigma = sigma_at(basis, theta, d);
  Mat best_sigma = sigma;
  double upper = 0.0;
  double lower = 0.0;  // the objective is nonnegative
  const double target_gap = 1e-10;
  const int max_cuts = 200;
  const double mu_min = 0.25 * target_gap / (max_cuts + d);

  double f = 0.0;
  cuts.push_back(make_cut(cq, sigma, basis, &f));
  upper = f;

  int added = 1;
  while (added < max_cuts) {
    MasterOutcome m = solve_master(cuts, basis, d, theta, mu_min);
    theta = m.theta;
    if (m.solved) lower = std::max(lower, m.lower_bound);
    sigma = sigma_at(basis, theta, d);

    cuts.push_back(make_cut(cq, sigma, basis, &f));
    ++added;
    if (f < upper) {
      upper = f;
      best_sigma = sigma;
    }
    if (upper - lower <= target_gap) break;
  }

  double tr = trace(best_sigma).real();
  res.value = upper;
  res.optimal_sigma =
      DensityOperator::trusted(cq.quantum_space, scale(best_sigma, 1.0 / tr));
  res.iterations = added;
  res.certified_gap = std::max(0.0, upper - lower);
  res.converged = upper - lower <= target_gap;
  return res;
}

}  // namespace qsc
