#pragma once

// Dense polynomials in the spectral parameter z.

#include <span>
#include <vector>

#include "poscomm/scalar.hpp"

namespace poscomm {

/// Polynomial c_0 + c_1 z + ... + c_d z^d.
///
/// Exact trailing zeros are always stripped, so degree() is the index of the
/// highest stored coefficient. Roundoff-sized leading coefficients survive
/// arithmetic; normalized() removes them against a relative threshold.
class ZPoly {
 public:
  ZPoly() = default;
  explicit ZPoly(std::vector<Scalar> coeffs);
  ZPoly(std::initializer_list<Scalar> coeffs);

  static ZPoly constant(const Scalar& c);
  static ZPoly monomial(int k, const Scalar& c = Scalar(1));

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Scalar>& coeffs() const { return coeffs_; }
  /// Coefficient of z^k; zero outside the stored range.
  Scalar coeff(int k) const;
  const Scalar& leading() const;

  Scalar max_abs() const;

  /// Drops trailing coefficients with |c| <= 1e-3 * tolerance * max_abs().
  ZPoly normalized(const Scalar& tolerance) const;

  ZPoly operator-() const;
  ZPoly& operator+=(const ZPoly& o);
  ZPoly& operator-=(const ZPoly& o);
  ZPoly& operator*=(const Scalar& s);

  friend ZPoly operator+(ZPoly a, const ZPoly& b) { return a += b; }
  friend ZPoly operator-(ZPoly a, const ZPoly& b) { return a -= b; }
  friend ZPoly operator*(ZPoly a, const Scalar& s) { return a *= s; }
  friend ZPoly operator*(const Scalar& s, ZPoly a) { return a *= s; }
  friend ZPoly operator/(ZPoly a, const Scalar& s);
  friend ZPoly operator*(const ZPoly& a, const ZPoly& b);

 private:
  void strip();
  std::vector<Scalar> coeffs_;
};

/// Horner evaluation; throws NumericError on overflow.
Scalar poly_eval(const ZPoly& p, const Scalar& z);

/// Evaluates sum |c_k| |z|^k, the natural magnitude against which p(z) cancels.
Scalar poly_eval_abs(const ZPoly& p, const Scalar& z);

inline ZPoly poly_mul(const ZPoly& p, const ZPoly& q) { return p * q; }

struct DivisionResult {
  ZPoly quotient;
  ZPoly remainder;
  /// max |remainder coefficient|; the caller compares it with its tolerance.
  Scalar residual_norm;
};

/// Long division num = quotient * den + remainder with deg remainder < deg den.
/// Throws DegenerateError when den is the zero polynomial.
DivisionResult poly_div_exact(const ZPoly& num, const ZPoly& den);

/// Max |coefficient| of p - q.
Scalar poly_distance(const ZPoly& p, const ZPoly& q);

struct Sample {
  Scalar z;
  Scalar value;
};

struct InterpolationResult {
  ZPoly poly;
  /// max |p(z_i) - value_i| / max(1, max |value_i|) over all samples.
  Scalar consistency_residual;
  bool consistent = true;
};

/// Least-squares fit of degree <= degree_bound through the samples. Samples
/// beyond degree_bound + 1 feed the consistency residual, which is flagged
/// (not thrown) when it exceeds tolerance. Duplicate nodes throw DomainError.
InterpolationResult poly_interpolate(std::span<const Sample> samples, int degree_bound,
                                     const Scalar& tolerance);

/// Chebyshev points of the first kind mapped to [lo, hi].
std::vector<Scalar> chebyshev_nodes(int count, const Scalar& lo, const Scalar& hi);

/// Spectral curve w^2 = F_g(z) = z^{2g+1} + c_{2g} z^{2g} + ... + c_0.
class HyperellipticCurve {
 public:
  HyperellipticCurve(int genus, std::vector<Scalar> c);
  /// Reads c_0..c_{2g} off a monic polynomial of odd degree.
  static HyperellipticCurve from_polynomial(const ZPoly& monic, const Scalar& tolerance);

  int genus() const { return genus_; }
  const std::vector<Scalar>& c() const { return c_; }
  ZPoly polynomial() const;
  Scalar eval(const Scalar& z) const;

 private:
  int genus_;
  std::vector<Scalar> c_;
};

}  // namespace poscomm
