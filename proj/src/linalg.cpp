#include "poscomm/linalg.hpp"

namespace poscomm {

Scalar rank_threshold() { return pow(epsilon(), Scalar("0.6")); }

namespace {

// Scales every column to unit 2-norm; returns the scale factors applied.
Vector equilibrate(Matrix& a) {
  Vector scale(a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    Scalar norm = a.col(j).norm();
    scale(j) = norm == 0 ? Scalar(1) : Scalar(1) / norm;
    a.col(j) *= scale(j);
  }
  return scale;
}

}  // namespace

LeastSquaresResult least_squares(const Matrix& a, const Vector& b) {
  Matrix scaled = a;
  const Vector scale = equilibrate(scaled);
  Eigen::ColPivHouseholderQR<Matrix> qr(scaled);
  qr.setThreshold(rank_threshold());
  LeastSquaresResult out;
  out.rank = qr.rank();
  Vector y = qr.solve(b);
  out.x = y.cwiseProduct(scale);
  Vector r = a * out.x - b;
  out.residual = r.size() == 0 ? Scalar(0) : Scalar(r.cwiseAbs().maxCoeff());
  return out;
}

Eigen::Index numerical_rank(const Matrix& a) {
  Matrix scaled = a;
  equilibrate(scaled);
  Eigen::ColPivHouseholderQR<Matrix> qr(scaled);
  qr.setThreshold(rank_threshold());
  return qr.rank();
}

std::vector<Scalar> char_poly(const Matrix& m) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n) throw DomainError("char_poly: matrix is not square");
  std::vector<Scalar> k(static_cast<size_t>(n), Scalar(0));
  Matrix mk = Matrix::Zero(n, n);
  Scalar ck(1);
  const Matrix id = Matrix::Identity(n, n);
  for (Eigen::Index step = 1; step <= n; ++step) {
    mk = m * mk + ck * id;
    ck = -(m * mk).trace() / Scalar(static_cast<int>(step));
    k[static_cast<size_t>(n - step)] = ck;
  }
  return k;
}

}  // namespace poscomm
