#pragma once

// Weierstrass functions on the real axis of a rectangular lattice.
//
// Convention: (p')^2 = 4 p^3 - g2 p - g3 and zeta' = -p. Only real invariants
// with positive discriminant g2^3 - 27 g3^2 are supported, so that the lattice
// has a real period 2 omega. Values are computed from the Laurent series at 0
// after reducing x into [-omega, omega] with zeta(x + 2 omega) = zeta(x) + 2 eta.

#include <vector>

#include "poscomm/scalar.hpp"

namespace poscomm {

class WeierstrassContext {
 public:
  WeierstrassContext(Scalar g2, Scalar g3);

  /// Lemniscatic invariants g2 = 4, g3 = 0.
  static WeierstrassContext lemniscatic();

  const Scalar& g2() const { return g2_; }
  const Scalar& g3() const { return g3_; }
  /// Real half-period omega and eta = zeta(omega).
  const Scalar& real_halfperiod() const { return omega_; }
  const Scalar& eta() const { return eta_; }
  /// Modulus of the imaginary half-period.
  const Scalar& imag_halfperiod() const { return omega_imag_; }
  /// Roots e1 > e2 > e3 of 4t^3 - g2 t - g3.
  const std::vector<Scalar>& roots() const { return roots_; }

  Scalar wp(const Scalar& x) const;
  Scalar wp_prime(const Scalar& x) const;
  Scalar zeta(const Scalar& x) const;

  /// Distance below which an argument counts as a lattice point.
  static Scalar lattice_proximity();

 private:
  struct Reduced {
    Scalar y;  ///< x - 2 k omega, in [-omega, omega]
    long k;
  };
  Reduced reduce(const Scalar& x) const;

  Scalar series_wp(const Scalar& y) const;
  Scalar series_wp_prime(const Scalar& y) const;
  Scalar series_zeta(const Scalar& y) const;

  Scalar g2_, g3_;
  std::vector<Scalar> roots_;
  Scalar omega_, omega_imag_, eta_;
  std::vector<Scalar> c_;  ///< Laurent coefficients c_k, k >= 2 (c_[k])
};

/// Arithmetic-geometric mean of positive a, b.
Scalar agm(Scalar a, Scalar b);

}  // namespace poscomm
