#include "poscomm/weierstrass.hpp"

#include <algorithm>
#include <cmath>

namespace poscomm {

Scalar agm(Scalar a, Scalar b) {
  if (a <= 0 || b <= 0) throw DomainError("agm: arguments must be positive");
  const Scalar tol = epsilon() * 4;
  for (int i = 0; i < 200; ++i) {
    const Scalar m = (a + b) / 2;
    b = sqrt(a * b);
    a = m;
    if (abs(a - b) <= tol * a) return a;
  }
  throw ConvergenceError("agm did not converge");
}

WeierstrassContext::WeierstrassContext(Scalar g2, Scalar g3) : g2_(std::move(g2)), g3_(std::move(g3)) {
  const Scalar disc = pow(g2_, 3) - 27 * sq(g3_);
  if (!(disc > 0)) {
    throw DomainError("Weierstrass invariants need g2^3 - 27 g3^2 > 0 (rectangular lattice), got " +
                      to_short(disc));
  }
  // Roots of t^3 - (g2/4) t - g3/4 by the trigonometric formula (three real roots).
  const Scalar p = -g2_ / 4, q = -g3_ / 4;
  const Scalar r = 2 * sqrt(-p / 3);
  const Scalar arg = (3 * q / (2 * p)) * sqrt(-3 / p);
  const Scalar phi = acos(std::clamp(arg, Scalar(-1), Scalar(1))) / 3;
  for (int k = 0; k < 3; ++k) roots_.push_back(r * cos(phi - 2 * pi() * k / 3));
  std::sort(roots_.begin(), roots_.end(), std::greater<>());

  const Scalar& e1 = roots_[0];
  const Scalar& e2 = roots_[1];
  const Scalar& e3 = roots_[2];
  omega_ = pi() / (2 * agm(sqrt(e1 - e3), sqrt(e1 - e2)));
  omega_imag_ = pi() / (2 * agm(sqrt(e1 - e3), sqrt(e2 - e3)));

  // The Laurent series converges for |y| below the nearest nonzero lattice point.
  const Scalar radius = 2 * std::min(omega_, omega_imag_);
  const Scalar rho = omega_ / radius;
  if (rho > Scalar("0.8")) {
    throw DomainError("lattice too elongated for the series evaluator (omega / radius = " +
                      to_short(rho) + ")");
  }
  const double terms = std::log(epsilon().convert_to<double>() * 1e-3) /
                       (2 * std::log(rho.convert_to<double>()));
  const int kmax = std::max(8, static_cast<int>(std::ceil(terms)) + 8);
  c_.assign(static_cast<size_t>(kmax + 1), Scalar(0));
  c_[2] = g2_ / 20;
  c_[3] = g3_ / 28;
  for (int k = 4; k <= kmax; ++k) {
    Scalar s(0);
    for (int m = 2; m <= k - 2; ++m) s += c_[static_cast<size_t>(m)] * c_[static_cast<size_t>(k - m)];
    c_[static_cast<size_t>(k)] = 3 * s / ((2 * k + 1) * (k - 3));
  }
  eta_ = series_zeta(omega_);
}

WeierstrassContext WeierstrassContext::lemniscatic() { return WeierstrassContext(Scalar(4), Scalar(0)); }

Scalar WeierstrassContext::lattice_proximity() { return Scalar("1e-6"); }

WeierstrassContext::Reduced WeierstrassContext::reduce(const Scalar& x) const {
  checked(x, "Weierstrass argument");
  const Scalar period = 2 * omega_;
  const Scalar kf = round(x / period);
  const Reduced r{x - kf * period, kf.convert_to<long>()};
  if (abs(r.y) < lattice_proximity()) {
    throw DomainError("Weierstrass function evaluated at x = " + to_short(x) +
                      ", within " + to_short(lattice_proximity()) + " of a lattice point");
  }
  return r;
}

Scalar WeierstrassContext::series_wp(const Scalar& y) const {
  const Scalar y2 = y * y;
  Scalar acc(0);
  for (size_t k = c_.size() - 1; k >= 2; --k) acc = acc * y2 + c_[k];
  return 1 / y2 + acc * y2;
}

Scalar WeierstrassContext::series_wp_prime(const Scalar& y) const {
  const Scalar y2 = y * y;
  Scalar acc(0);
  for (size_t k = c_.size() - 1; k >= 2; --k) acc = acc * y2 + c_[k] * (2 * static_cast<long>(k) - 2);
  return -2 / (y2 * y) + acc * y;
}

Scalar WeierstrassContext::series_zeta(const Scalar& y) const {
  const Scalar y2 = y * y;
  Scalar acc(0);
  for (size_t k = c_.size() - 1; k >= 2; --k) acc = acc * y2 + c_[k] / (2 * static_cast<long>(k) - 1);
  return 1 / y - acc * y2 * y;
}

Scalar WeierstrassContext::wp(const Scalar& x) const { return series_wp(reduce(x).y); }

Scalar WeierstrassContext::wp_prime(const Scalar& x) const { return series_wp_prime(reduce(x).y); }

Scalar WeierstrassContext::zeta(const Scalar& x) const {
  const Reduced r = reduce(x);
  return series_zeta(r.y) + 2 * eta_ * r.k;
}

}  // namespace poscomm
