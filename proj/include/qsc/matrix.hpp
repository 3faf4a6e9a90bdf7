#pragma once

#include <complex>
#include <string>
#include <vector>

// Dense complex matrices and vectors. All operator and state data in the
// library is stored row-major at full density; spaces are capped at a few
// hundred dimensions, so no sparsity or blocking is attempted.

namespace qsc {

using cx = std::complex<double>;
using Vec = std::vector<cx>;

struct Mat {
  int rows = 0, cols = 0;
  std::vector<cx> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  cx& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const cx& operator()(int i, int j) const {
    return a[static_cast<size_t>(i) * cols + j];
  }
  bool square() const { return rows == cols; }

  static Mat identity(int n);
  static Mat zero(int r, int c) { return Mat(r, c); }
};

Mat mul(const Mat& x, const Mat& y);
Mat adjoint(const Mat& x);
Mat transpose(const Mat& x);
Mat conjugated(const Mat& x);
Mat add(const Mat& x, const Mat& y);
Mat sub(const Mat& x, const Mat& y);
Mat scale(const Mat& x, cx s);
Mat kron(const Mat& x, const Mat& y);
cx trace(const Mat& x);
double frob_norm(const Mat& x);
double max_abs(const Mat& x);
bool is_hermitian(const Mat& x, double tol);
Mat hermitize(const Mat& x);  // (x + x†) / 2

Vec matvec(const Mat& x, const Vec& v);
double vec_norm(const Vec& v);
cx vec_dot(const Vec& x, const Vec& y);  // <x|y>, conjugate-linear in x

// Modified Gram-Schmidt with one re-orthogonalization pass. Columns are
// assumed numerically independent.
void orthonormalize_columns(Mat& q);

// Extends `thin` (orthonormal columns) to a full orthonormal basis of C^rows
// by sweeping canonical basis vectors. Deterministic.
Mat complete_orthonormal(const Mat& thin);

// h = l l† with l lower triangular. Returns false when h is not positive
// definite (used as the strict-feasibility test inside the barrier solvers).
bool cholesky(const Mat& h, Mat& l);
double cholesky_logdet(const Mat& l);
// Inverse of a Hermitian positive definite matrix through its Cholesky factor.
Mat hpd_inverse(const Mat& h);

// Dense real symmetric positive definite solve (Newton systems). Overwrites
// rhs with the solution; returns false when factorization breaks down.
bool spd_solve(std::vector<double>& h, int n, std::vector<double>& rhs);

}  // namespace qsc
