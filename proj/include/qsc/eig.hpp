#pragma once

#include "qsc/matrix.hpp"

// Self-contained Hermitian eigensolver (cyclic complex Jacobi) and an SVD
// built on it (eigendecomposition of m†m with polar completion of the left
// factor). Accuracy target: reconstruction residual below the configured
// tolerance for dimensions up to the register-space cap.

namespace qsc {

struct EigResult {
  std::vector<double> values;  // descending
  Mat vectors;                 // unitary, columns are eigenvectors: a = v diag v†
};

EigResult eig_hermitian(const Mat& a, bool want_vectors = true);
std::vector<double> eigvals_hermitian(const Mat& a);

struct SvdResult {
  Mat u;                      // rows x rows unitary
  std::vector<double> sigma;  // min(rows, cols) values, descending
  Mat v;                      // cols x cols unitary: a = u diag(sigma) v†
};

SvdResult svd(const Mat& a);

double trace_norm_hermitian(const Mat& a);  // sum |eigenvalues|
double nuclear_norm(const Mat& a);          // sum of singular values
Mat sqrtm_psd(const Mat& a);                // eigenvalues clamped at zero

}  // namespace qsc
