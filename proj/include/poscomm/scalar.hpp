#pragma once

// Working-precision real arithmetic.
//
// Scalar is an MPFR-backed float whose significand width is chosen at run
// time. The default is 113 bits; recursions over S_n lose digits per step, so
// 53 bits is the floor. Change the precision before constructing values: a
// Scalar keeps the precision it was created with.

#include <boost/multiprecision/mpfr.hpp>

#include <string>
#include <string_view>

#include "poscomm/error.hpp"

namespace poscomm {

using Scalar = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                             boost::multiprecision::et_off>;

inline constexpr unsigned kDefaultPrecisionBits = 113;
inline constexpr unsigned kMinPrecisionBits = 53;

/// Sets the significand width (bits) used for newly created Scalars.
void set_precision_bits(unsigned bits);
unsigned precision_bits();

/// Unit roundoff at the current precision.
Scalar epsilon();

/// Scoped precision change; restores the previous setting on exit.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_;
};

bool is_finite(const Scalar& v);

/// Returns v, or throws NumericError mentioning `what` when v is NaN/inf.
const Scalar& checked(const Scalar& v, std::string_view what);

Scalar parse_scalar(std::string_view text);

/// Decimal rendering with enough digits to round-trip at the current precision.
std::string to_decimal(const Scalar& v);

/// Short rendering for human-readable messages.
std::string to_short(const Scalar& v, int digits = 6);

Scalar pi();

inline Scalar sq(const Scalar& v) { return v * v; }

}  // namespace poscomm
