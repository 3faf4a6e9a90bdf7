#include "qsc/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace qsc {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

static void require_same_shape(const Mat& x, const Mat& y, const char* op) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

Mat mul(const Mat& x, const Mat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("mul: shape mismatch");
  Mat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int k = 0; k < x.cols; ++k) {
      cx xik = x(i, k);
      if (xik == cx(0.0)) continue;
      const cx* yrow = &y.a[static_cast<size_t>(k) * y.cols];
      cx* rrow = &r.a[static_cast<size_t>(i) * r.cols];
      for (int j = 0; j < y.cols; ++j) rrow[j] += xik * yrow[j];
    }
  }
  return r;
}

Mat adjoint(const Mat& x) {
  Mat r(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r(j, i) = std::conj(x(i, j));
  return r;
}

Mat transpose(const Mat& x) {
  Mat r(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r(j, i) = x(i, j);
  return r;
}

Mat conjugated(const Mat& x) {
  Mat r(x.rows, x.cols);
  for (size_t i = 0; i < x.a.size(); ++i) r.a[i] = std::conj(x.a[i]);
  return r;
}

Mat add(const Mat& x, const Mat& y) {
  require_same_shape(x, y, "add");
  Mat r(x.rows, x.cols);
  for (size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] + y.a[i];
  return r;
}

Mat sub(const Mat& x, const Mat& y) {
  require_same_shape(x, y, "sub");
  Mat r(x.rows, x.cols);
  for (size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

Mat scale(const Mat& x, cx s) {
  Mat r(x.rows, x.cols);
  for (size_t i = 0; i < x.a.size(); ++i) r.a[i] = x.a[i] * s;
  return r;
}

Mat kron(const Mat& x, const Mat& y) {
  Mat r(x.rows * y.rows, x.cols * y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) {
      cx xij = x(i, j);
      if (xij == cx(0.0)) continue;
      for (int k = 0; k < y.rows; ++k)
        for (int l = 0; l < y.cols; ++l)
          r(i * y.rows + k, j * y.cols + l) = xij * y(k, l);
    }
  return r;
}

cx trace(const Mat& x) {
  if (!x.square()) throw std::invalid_argument("trace: not square");
  cx t = 0.0;
  for (int i = 0; i < x.rows; ++i) t += x(i, i);
  return t;
}

double frob_norm(const Mat& x) {
  double s = 0.0;
  for (const cx& v : x.a) s += std::norm(v);
  return std::sqrt(s);
}

double max_abs(const Mat& x) {
  double m = 0.0;
  for (const cx& v : x.a) m = std::max(m, std::abs(v));
  return m;
}

bool is_hermitian(const Mat& x, double tol) {
  if (!x.square()) return false;
  for (int i = 0; i < x.rows; ++i)
    for (int j = i; j < x.cols; ++j)
      if (std::abs(x(i, j) - std::conj(x(j, i))) > tol) return false;
  return true;
}

Mat hermitize(const Mat& x) {
  if (!x.square()) throw std::invalid_argument("hermitize: not square");
  Mat r(x.rows, x.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j)
      r(i, j) = 0.5 * (x(i, j) + std::conj(x(j, i)));
  return r;
}

Vec matvec(const Mat& x, const Vec& v) {
  if (x.cols != static_cast<int>(v.size()))
    throw std::invalid_argument("matvec: shape mismatch");
  Vec r(x.rows, cx(0.0));
  for (int i = 0; i < x.rows; ++i) {
    const cx* row = &x.a[static_cast<size_t>(i) * x.cols];
    cx s = 0.0;
    for (int j = 0; j < x.cols; ++j) s += row[j] * v[j];
    r[i] = s;
  }
  return r;
}

double vec_norm(const Vec& v) {
  double s = 0.0;
  for (const cx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

cx vec_dot(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("vec_dot: size mismatch");
  cx s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

void orthonormalize_columns(Mat& q) {
  for (int pass = 0; pass < 2; ++pass) {
    for (int j = 0; j < q.cols; ++j) {
      for (int k = 0; k < j; ++k) {
        cx proj = 0.0;
        for (int i = 0; i < q.rows; ++i) proj += std::conj(q(i, k)) * q(i, j);
        for (int i = 0; i < q.rows; ++i) q(i, j) -= proj * q(i, k);
      }
      double n = 0.0;
      for (int i = 0; i < q.rows; ++i) n += std::norm(q(i, j));
      n = std::sqrt(n);
      if (n < 1e-14)
        throw std::runtime_error("orthonormalize_columns: dependent columns");
      for (int i = 0; i < q.rows; ++i) q(i, j) /= n;
    }
  }
}

Mat complete_orthonormal(const Mat& thin) {
  int n = thin.rows;
  if (thin.cols > n)
    throw std::invalid_argument("complete_orthonormal: too many columns");
  Mat full(n, n);
  for (int j = 0; j < thin.cols; ++j)
    for (int i = 0; i < n; ++i) full(i, j) = thin(i, j);
  int have = thin.cols;
  for (int cand = 0; cand < n && have < n; ++cand) {
    Vec v(n, cx(0.0));
    v[cand] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < have; ++k) {
        cx proj = 0.0;
        for (int i = 0; i < n; ++i) proj += std::conj(full(i, k)) * v[i];
        for (int i = 0; i < n; ++i) v[i] -= proj * full(i, k);
      }
    }
    double nn = vec_norm(v);
    if (nn < 0.3) continue;  // candidate nearly inside the current span
    for (int i = 0; i < n; ++i) full(i, have) = v[i] / nn;
    ++have;
  }
  if (have < n)
    throw std::runtime_error("complete_orthonormal: basis completion failed");
  return full;
}

bool cholesky(const Mat& h, Mat& l) {
  if (!h.square()) throw std::invalid_argument("cholesky: not square");
  int n = h.rows;
  l = Mat(n, n);
  for (int j = 0; j < n; ++j) {
    double d = h(j, j).real();
    for (int k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (d <= 0.0 || !std::isfinite(d)) return false;
    double dj = std::sqrt(d);
    l(j, j) = dj;
    for (int i = j + 1; i < n; ++i) {
      cx s = h(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / dj;
    }
  }
  return true;
}

double cholesky_logdet(const Mat& l) {
  double s = 0.0;
  for (int i = 0; i < l.rows; ++i) s += std::log(l(i, i).real());
  return 2.0 * s;
}

Mat hpd_inverse(const Mat& h) {
  Mat l;
  if (!cholesky(h, l))
    throw std::runtime_error("hpd_inverse: matrix not positive definite");
  int n = h.rows;
  // Solve l l† X = I column by column.
  Mat inv(n, n);
  Vec y(n);
  for (int c = 0; c < n; ++c) {
    for (int i = 0; i < n; ++i) {
      cx s = (i == c) ? cx(1.0) : cx(0.0);
      for (int k = 0; k < i; ++k) s -= l(i, k) * y[k];
      y[i] = s / l(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
      cx s = y[i];
      for (int k = i + 1; k < n; ++k) s -= std::conj(l(k, i)) * inv(k, c);
      inv(i, c) = s / l(i, i);
    }
  }
  return hermitize(inv);
}

bool spd_solve(std::vector<double>& h, int n, std::vector<double>& rhs) {
  // In-place real Cholesky on the lower triangle of h, then two substitutions.
  for (int j = 0; j < n; ++j) {
    double d = h[static_cast<size_t>(j) * n + j];
    for (int k = 0; k < j; ++k) {
      double v = h[static_cast<size_t>(j) * n + k];
      d -= v * v;
    }
    if (d <= 0.0 || !std::isfinite(d)) return false;
    d = std::sqrt(d);
    h[static_cast<size_t>(j) * n + j] = d;
    for (int i = j + 1; i < n; ++i) {
      double s = h[static_cast<size_t>(i) * n + j];
      for (int k = 0; k < j; ++k)
        s -= h[static_cast<size_t>(i) * n + k] * h[static_cast<size_t>(j) * n + k];
      h[static_cast<size_t>(i) * n + j] = s / d;
    }
  }
  for (int i = 0; i < n; ++i) {
    double s = rhs[i];
    for (int k = 0; k < i; ++k) s -= h[static_cast<size_t>(i) * n + k] * rhs[k];
    rhs[i] = s / h[static_cast<size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = rhs[i];
    for (int k = i + 1; k < n; ++k)
      s -= h[static_cast<size_t>(k) * n + i] * rhs[k];
    rhs[i] = s / h[static_cast<size_t>(i) * n + i];
  }
  return true;
}

}  // namespace qsc
