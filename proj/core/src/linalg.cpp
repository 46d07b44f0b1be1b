#include "qedcs/linalg.hpp"

#include <lapacke.h>

#include <string>

#include "qedcs/errors.hpp"

namespace qedcs::linalg {

namespace {

lapack_complex_double* lp(Matrix& m) { return reinterpret_cast<lapack_complex_double*>(m.data()); }

void check(lapack_int info, const char* routine) {
  if (info != 0) throw ConvergenceError(std::string(routine) + " failed with info " + std::to_string(info));
}

}  // namespace

Eigen::VectorXd hermitian_eigen(const Matrix& H, Matrix* vectors) {
  const lapack_int n = static_cast<lapack_int>(H.rows());
  Eigen::VectorXd w(n);
  if (n == 0) return w;
  Matrix A = H;
  const char jobz = vectors ? 'V' : 'N';
  check(LAPACKE_zheevd(LAPACK_COL_MAJOR, jobz, 'U', n, lp(A), n, w.data()), "zheevd");
  if (vectors) *vectors = std::move(A);
  return w;
}

Eigen::VectorXd svd(const Matrix& A, Matrix* U, Matrix* V) {
  const lapack_int m = static_cast<lapack_int>(A.rows());
  const lapack_int n = static_cast<lapack_int>(A.cols());
  const lapack_int k = std::min(m, n);
  Eigen::VectorXd s(k);
  if (k == 0) return s;
  Matrix B = A;
  if (U && V) {
    Matrix u(m, k), vt(k, n);
    check(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, lp(B), m, s.data(), lp(u), m, lp(vt), k), "zgesdd");
    *U = std::move(u);
    *V = vt.adjoint();
  } else {
    check(LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, lp(B), m, s.data(), nullptr, 1, nullptr, 1), "zgesdd");
  }
  return s;
}

double hermitian_norm(const Matrix& H) {
  if (H.size() == 0) return 0.0;
  const Eigen::VectorXd w = hermitian_eigen(H);
  return std::max(std::abs(w[0]), std::abs(w[w.size() - 1]));
}

double spectral_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  return svd(A)[0];
}

}  // namespace qedcs::linalg
