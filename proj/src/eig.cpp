#include "qsc/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qsc/policy.hpp"

namespace qsc {

namespace {

double off_diag_norm(const Mat& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

EigResult eig_hermitian(const Mat& a0, bool want_vectors) {
  if (!a0.square()) throw std::invalid_argument("eig_hermitian: not square");
  double scale = std::max(1.0, max_abs(a0));
  if (!is_hermitian(a0, policy().validity_tol * scale))
    throw std::invalid_argument("eig_hermitian: input not Hermitian");

  int n = a0.rows;
  Mat a = hermitize(a0);
  Mat v = want_vectors ? Mat::identity(n) : Mat();

  const double fro = std::max(frob_norm(a), 1e-300);
  const double stop = 1e-14 * fro;
  const int max_sweeps = 100;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diag_norm(a) <= stop) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        cx g = a(p, q);
        double apq = std::abs(g);
        if (apq <= stop / (10.0 * n)) continue;

        // Rotate the (p,q) plane: phase the off-diagonal entry real, then
        // apply the classical symmetric Jacobi rotation.
        cx phi = std::conj(g) / apq;
        double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * apq);
        double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;
        cx sphi = s * phi;
        cx sphic = s * std::conj(phi);
        cx cphi = c * phi;

        // Left action of G†: rows p and q.
        for (int k = 0; k < n; ++k) {
          cx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sphic * aqk;
          a(q, k) = s * apk + c * std::conj(phi) * aqk;
        }
        // Right action of G: columns p and q.
        for (int k = 0; k < n; ++k) {
          cx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sphi * akq;
          a(k, q) = s * akp + cphi * akq;
        }
        if (want_vectors) {
          for (int k = 0; k < n; ++k) {
            cx vkp = v(k, p), vkq = v(k, q);
            v(k, p) = c * vkp - sphi * vkq;
            v(k, q) = s * vkp + cphi * vkq;
          }
        }
        a(p, q) = std::conj(a(q, p));  // keep the pair numerically Hermitian
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = a(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return diag[x] > diag[y]; });

  EigResult r;
  r.values.resize(n);
  for (int i = 0; i < n; ++i) r.values[i] = diag[order[i]];
  if (want_vectors) {
    r.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) r.vectors(i, j) = v(i, order[j]);
  }
  return r;
}

std::vector<double> eigvals_hermitian(const Mat& a) {
  return eig_hermitian(a, false).values;
}

SvdResult svd(const Mat& a) {
  if (a.rows == 0 || a.cols == 0) throw std::invalid_argument("svd: empty");
  int r = a.rows, c = a.cols;
  int k = std::min(r, c);

  EigResult e = eig_hermitian(mul(adjoint(a), a));
  SvdResult out;
  out.v = e.vectors;
  out.sigma.resize(k);
  for (int i = 0; i < k; ++i) out.sigma[i] = std::sqrt(std::max(0.0, e.values[i]));

  double cut = std::max(out.sigma.empty() ? 0.0 : out.sigma[0] * 1e-12, 1e-280);
  int rank = 0;
  while (rank < k && out.sigma[rank] > cut) ++rank;

  Mat thin(r, rank);
  for (int j = 0; j < rank; ++j) {
    Vec col(c);
    for (int i = 0; i < c; ++i) col[i] = out.v(i, j);
    Vec u = matvec(a, col);
    for (int i = 0; i < r; ++i) thin(i, j) = u[i] / out.sigma[j];
  }
  if (rank > 0) orthonormalize_columns(thin);
  out.u = complete_orthonormal(thin);
  return out;
}

double trace_norm_hermitian(const Mat& a) {
  double s = 0.0;
  for (double l : eigvals_hermitian(a)) s += std::abs(l);
  return s;
}

double nuclear_norm(const Mat& a) {
  // Eigenvalues of the Hermitian dilation [[0, a], [a†, 0]] are +-sigma_i
  // plus zeros, which keeps small singular values at full precision (the
  // Gram-matrix route in svd() loses them below sqrt(eps) * sigma_0).
  int r = a.rows, c = a.cols;
  Mat h(r + c, r + c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      h(i, r + j) = a(i, j);
      h(r + j, i) = std::conj(a(i, j));
    }
  double t = 0.0;
  for (double v : eigvals_hermitian(h))
    if (v > 0.0) t += v;
  return t;
}

Mat sqrtm_psd(const Mat& a) {
  EigResult e = eig_hermitian(a);
  int n = a.rows;
  Mat r(n, n);
  for (int k = 0; k < n; ++k) {
    double s = std::sqrt(std::max(0.0, e.values[k]));
    if (s == 0.0) continue;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        r(i, j) += s * e.vectors(i, k) * std::conj(e.vectors(j, k));
  }
  return r;
}

}  // namespace qsc
