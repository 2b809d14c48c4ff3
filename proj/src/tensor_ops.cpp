#include "hammerstein/tensor_ops.hpp"

#include <cmath>
#include <string>

#include "hammerstein/errors.hpp"

namespace hammerstein {

Matrix toeplitz_vec(const Vector& a, int n) {
  if (n < 1) throw InvalidArgument("toeplitz_vec: width must be positive");
  if (a.size() == 0) throw InvalidArgument("toeplitz_vec: empty source vector");
  const Eigen::Index m = a.size();
  Matrix T = Matrix::Zero(m, n);
  for (Eigen::Index j = 0; j < n && j < m; ++j) T.col(j).tail(m - j) = a.head(m - j);
  return T;
}

Matrix toeplitz_mat(const Matrix& A, int n) {
  if (n < 1) throw InvalidArgument("toeplitz_mat: width must be positive");
  if (A.size() == 0) throw InvalidArgument("toeplitz_mat: empty source matrix");
  const Eigen::Index m = A.rows();
  const Eigen::Index p = A.cols();
  Matrix T = Matrix::Zero(m, n * p);
  for (Eigen::Index j = 0; j < n && j < m; ++j) T.block(j, j * p, m - j, p) = A.topRows(m - j);
  return T;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return out;
}

Matrix reshape_kop(const Vector& theta, int n, int p) {
  if (n < 1 || p < 1 || theta.size() != static_cast<Eigen::Index>(n) * p)
    throw InvalidArgument("reshape_kop: length " + std::to_string(theta.size()) + " does not equal n*p = " +
                          std::to_string(static_cast<long>(n) * p));
  return Eigen::Map<const Matrix>(theta.data(), p, n);
}

double rank_one_ratio(const Vector& theta, int n, int p) {
  const Matrix M = reshape_kop(theta, n, p);
  const Vector s = Eigen::JacobiSVD<Matrix>(M).singularValues();
  if (s.size() < 2 || s[0] == 0.0) return 0.0;
  return s[1] / s[0];
}

int first_significant(const Vector& v, double tol) {
  const double cut = tol * v.norm();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > cut) return static_cast<int>(i);
  return -1;
}

double leading_sign(const Vector& v, double tol) {
  const int k = first_significant(v, tol);
  return (k >= 0 && v[k] < 0.0) ? -1.0 : 1.0;
}

KopFactorization decompose_kop(const Vector& theta, int n, int p, double rank_tol) {
  const Matrix M = reshape_kop(theta, n, p);
  if (theta.norm() == 0.0) throw InvalidArgument("decompose_kop: zero vector has no rank-one direction");

  const double ratio = rank_one_ratio(theta, n, p);
  if (!(ratio <= rank_tol))
    throw NotKopVector("decompose_kop: reshape is not rank one (sigma2/sigma1 = " + std::to_string(ratio) + ")",
                       ratio);

  Eigen::Index row = 0;
  M.rowwise().norm().maxCoeff(&row);
  const Vector g_row = M.row(row).transpose();
  Eigen::Index col = 0;
  g_row.cwiseAbs().maxCoeff(&col);

  const double norm = g_row.norm();
  const double sign = leading_sign(g_row);
  KopFactorization out;
  out.g = g_row * (sign / norm);
  out.c = M.col(col) * (norm * sign / g_row[col]);
  out.rank_ratio = ratio;
  return out;
}

}  // namespace hammerstein
