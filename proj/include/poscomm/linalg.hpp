#pragma once

// Dense linear algebra over Scalar, backed by Eigen.

#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Dense>

#include <vector>

#include "poscomm/scalar.hpp"

namespace poscomm {

using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Relative threshold below which a pivot counts as zero: eps^0.6, i.e. about
/// 1e-20 at 113 bits and 3e-10 at 53 bits.
Scalar rank_threshold();

struct LeastSquaresResult {
  Vector x;
  Eigen::Index rank = 0;
  /// ||A x - b||_inf
  Scalar residual;
};

/// Column-pivoted Householder QR solve of min ||A x - b||. Columns are
/// equilibrated to unit norm first so the rank decision is scale free.
LeastSquaresResult least_squares(const Matrix& a, const Vector& b);

/// Numerical rank of A after column equilibration.
Eigen::Index numerical_rank(const Matrix& a);

/// Coefficients k_0..k_{m-1} of det(w I - M) = w^m + k_{m-1} w^{m-1} + ... + k_0,
/// by the Faddeev-LeVerrier recursion.
std::vector<Scalar> char_poly(const Matrix& m);

}  // namespace poscomm
