#include "poscomm/scalar.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <sstream>

namespace poscomm {

namespace {

namespace mp = boost::multiprecision;

// Boost sizes MPFR values in decimal digits; pick the smallest digit count
// whose binary width covers the request.
unsigned digits10_for_bits(unsigned bits) {
  unsigned d10 = 1;
  while (mp::detail::digits10_2_2(d10) < bits) ++d10;
  return d10;
}

unsigned g_bits = 0;

struct DefaultPrecision {
  DefaultPrecision() { set_precision_bits(kDefaultPrecisionBits); }
};
const DefaultPrecision g_default_precision;

}  // namespace

void set_precision_bits(unsigned bits) {
  if (bits < kMinPrecisionBits) {
    throw DomainError("precision must be at least " + std::to_string(kMinPrecisionBits) +
                      " bits, got " + std::to_string(bits));
  }
  Scalar::default_precision(digits10_for_bits(bits));
  g_bits = bits;
}

unsigned precision_bits() { return g_bits; }

Scalar epsilon() {
  return std::numeric_limits<Scalar>::epsilon();
}

PrecisionGuard::PrecisionGuard(unsigned bits) : saved_(precision_bits()) {
  set_precision_bits(bits);
}

PrecisionGuard::~PrecisionGuard() { set_precision_bits(saved_); }

bool is_finite(const Scalar& v) { return boost::multiprecision::isfinite(v); }

const Scalar& checked(const Scalar& v, std::string_view what) {
  if (!is_finite(v)) {
    throw NumericError("non-finite value in " + std::string(what));
  }
  return v;
}

Scalar parse_scalar(std::string_view text) {
  std::string s(text);
  // Accept simple fractions such as "1/2" in configs.
  if (auto slash = s.find('/'); slash != std::string::npos) {
    return parse_scalar(s.substr(0, slash)) / parse_scalar(s.substr(slash + 1));
  }
  try {
    Scalar v(s);
    return checked(v, "parse_scalar");
  } catch (const std::runtime_error&) {
    throw DomainError("not a number: '" + s + "'");
  }
}

std::string to_decimal(const Scalar& v) {
  std::ostringstream os;
  // Enough digits to round-trip the value at its own precision.
  const long bits = static_cast<long>(v.backend().data()[0]._mpfr_prec);
  os.precision(static_cast<std::streamsize>(std::ceil(static_cast<double>(bits) * std::log10(2.0))) + 1);
  os << std::scientific << v;
  return os.str();
}

std::string to_short(const Scalar& v, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

Scalar pi() { return boost::math::constants::pi<Scalar>(); }

}  // namespace poscomm
