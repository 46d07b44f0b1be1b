#pragma once

#include <Eigen/Dense>

namespace qedcs::linalg {

using Matrix = Eigen::MatrixXcd;

// Eigenvalues (ascending) of a Hermitian matrix; the upper triangle is read.
// When vectors is non-null it receives the orthonormal eigenvectors.
Eigen::VectorXd hermitian_eigen(const Matrix& H, Matrix* vectors = nullptr);

// Singular values (descending).  With U and V non-null, A = U diag(s) V^H.
Eigen::VectorXd svd(const Matrix& A, Matrix* U = nullptr, Matrix* V = nullptr);

// Largest singular value of a Hermitian matrix (largest |eigenvalue|).
double hermitian_norm(const Matrix& H);

// Operator 2-norm of a general matrix.
double spectral_norm(const Matrix& A);

}  // namespace qedcs::linalg
