#pragma once

// Shared helpers for the test binaries: seeded generators for scalars,
// polynomials, sequences and operators.

#include <doctest.h>

#include <random>
#include <string>

#include "poscomm/opalg.hpp"
#include "poscomm/zpoly.hpp"

namespace poscomm::test {

inline Scalar S(const char* text) { return parse_scalar(text); }

/// Records a value against its bound so failures print both.
#define CHECK_LE_S(value, bound)                                                  \
  do {                                                                            \
    const ::poscomm::Scalar check_v_ = (value);                                   \
    const ::poscomm::Scalar check_b_ = (bound);                                   \
    INFO(#value " = " << ::poscomm::to_short(check_v_) << ", bound "              \
                      << ::poscomm::to_short(check_b_));                          \
    CHECK(check_v_ <= check_b_);                                                  \
  } while (0)

#define CHECK_CLOSE(a, b, tol)                                                    \
  do {                                                                            \
    const ::poscomm::Scalar check_a_ = (a);                                       \
    const ::poscomm::Scalar check_c_ = (b);                                       \
    const ::poscomm::Scalar check_t_ = (tol);                                     \
    INFO(#a " = " << ::poscomm::to_short(check_a_, 20) << ", " #b " = "           \
                  << ::poscomm::to_short(check_c_, 20));                          \
    CHECK(abs(check_a_ - check_c_) <= check_t_ * std::max(::poscomm::Scalar(1),  \
                                                          abs(check_c_)));        \
  } while (0)

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  Scalar uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    // Round to a short decimal so the value is exact-ish and printable.
    return Scalar(d(eng_));
  }
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }

  ZPoly poly(int degree, double mag = 2.0) {
    std::vector<Scalar> c;
    for (int k = 0; k <= degree; ++k) c.push_back(uniform(-mag, mag));
    return ZPoly(std::move(c));
  }

  CoeffSeq seq(Window w, double mag = 2.0) {
    return CoeffSeq::tabulate(w, [&](long) { return uniform(-mag, mag); });
  }

  /// Random operator with degrees lo..hi on window w.
  DiffOp op(Window w, int lo, int hi, double mag = 2.0) {
    std::map<int, CoeffSeq> terms;
    for (int j = lo; j <= hi; ++j) terms.emplace(j, seq(w, mag));
    return DiffOp(w, std::move(terms));
  }

 private:
  std::mt19937_64 eng_;
};

inline CoeffSeq delta(Window w, long k) {
  return CoeffSeq::tabulate(w, [k](long n) { return Scalar(n == k ? 1 : 0); });
}

}  // namespace poscomm::test
