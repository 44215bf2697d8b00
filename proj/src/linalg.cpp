#include "wsc/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace wsc::linalg {

namespace {

Eigen::CompleteOrthogonalDecomposition<Matrix> cod(const Matrix& a, double rcond) {
  Eigen::CompleteOrthogonalDecomposition<Matrix> d(a);
  d.setThreshold(rcond);
  return d;
}

}  // namespace

Matrix pseudo_inverse(const Matrix& a, double rcond) {
  if (a.size() == 0) return Matrix::Zero(a.cols(), a.rows());
  return cod(a, rcond).pseudoInverse();
}

Vector min_norm_solve(const Matrix& a, const Vector& b, double rcond) {
  if (a.size() == 0) return Vector::Zero(a.cols());
  return cod(a, rcond).solve(b);
}

Index numerical_rank(const Matrix& a, double rcond) {
  if (a.size() == 0) return 0;
  return cod(a, rcond).rank();
}

Matrix orthonormal_range(const Matrix& a, double rcond) {
  if (a.size() == 0) return Matrix::Zero(a.rows(), 0);
  const auto d = cod(a, rcond);
  const Matrix q = d.householderQ() * Matrix::Identity(a.rows(), d.rank());
  return q;
}

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  const Matrix gram = a.rows() < a.cols() ? Matrix(a * a.transpose()) : Matrix(a.transpose() * a);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(eig.eigenvalues().maxCoeff(), 0.0));
}

Matrix symmetric_part(const Matrix& a) { return 0.5 * (a + a.transpose()); }

}  // namespace wsc::linalg
