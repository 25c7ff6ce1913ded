#include "poscomm/zpoly.hpp"

#include <algorithm>

#include "poscomm/linalg.hpp"

namespace poscomm {

ZPoly::ZPoly(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) { strip(); }

ZPoly::ZPoly(std::initializer_list<Scalar> coeffs) : coeffs_(coeffs) { strip(); }

ZPoly ZPoly::constant(const Scalar& c) { return ZPoly({c}); }

ZPoly ZPoly::monomial(int k, const Scalar& c) {
  std::vector<Scalar> v(static_cast<size_t>(k) + 1, Scalar(0));
  v.back() = c;
  return ZPoly(std::move(v));
}

void ZPoly::strip() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Scalar ZPoly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return Scalar(0);
  return coeffs_[static_cast<size_t>(k)];
}

const Scalar& ZPoly::leading() const {
  if (coeffs_.empty()) throw DomainError("leading coefficient of the zero polynomial");
  return coeffs_.back();
}

Scalar ZPoly::max_abs() const {
  Scalar m(0);
  for (const auto& c : coeffs_) m = std::max(m, Scalar(abs(c)));
  return m;
}

ZPoly ZPoly::normalized(const Scalar& tolerance) const {
  const Scalar threshold = Scalar("1e-3") * tolerance * max_abs();
  std::vector<Scalar> v = coeffs_;
  while (!v.empty() && abs(v.back()) <= threshold) v.pop_back();
  return ZPoly(std::move(v));
}

ZPoly ZPoly::operator-() const {
  ZPoly r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

ZPoly& ZPoly::operator+=(const ZPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Scalar(0));
  for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  strip();
  return *this;
}

ZPoly& ZPoly::operator-=(const ZPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Scalar(0));
  for (size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  strip();
  return *this;
}

ZPoly& ZPoly::operator*=(const Scalar& s) {
  for (auto& c : coeffs_) c *= s;
  strip();
  return *this;
}

ZPoly operator/(ZPoly a, const Scalar& s) {
  if (s == 0) throw DegenerateError("polynomial divided by zero scalar");
  for (auto& c : a.coeffs_) c /= s;
  return a;
}

ZPoly operator*(const ZPoly& a, const ZPoly& b) {
  if (a.is_zero() || b.is_zero()) return ZPoly();
  std::vector<Scalar> v(a.coeffs_.size() + b.coeffs_.size() - 1, Scalar(0));
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return ZPoly(std::move(v));
}

Scalar poly_eval(const ZPoly& p, const Scalar& z) {
  Scalar acc(0);
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return checked(acc, "poly_eval");
}

Scalar poly_eval_abs(const ZPoly& p, const Scalar& z) {
  Scalar acc(0);
  const Scalar az = abs(z);
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * az + abs(*it);
  return checked(acc, "poly_eval_abs");
}

DivisionResult poly_div_exact(const ZPoly& num, const ZPoly& den) {
  if (den.is_zero()) throw DegenerateError("poly_div_exact: denominator is the zero polynomial");
  const int dn = num.degree();
  const int dd = den.degree();
  if (dn < dd) return {ZPoly(), num, num.max_abs()};

  std::vector<Scalar> rem = num.coeffs();
  std::vector<Scalar> quo(static_cast<size_t>(dn - dd) + 1, Scalar(0));
  const Scalar& lead = den.leading();
  const auto& d = den.coeffs();
  for (int k = dn - dd; k >= 0; --k) {
    const Scalar q = rem[static_cast<size_t>(k + dd)] / lead;
    quo[static_cast<size_t>(k)] = checked(q, "poly_div_exact");
    for (int j = 0; j <= dd; ++j) rem[static_cast<size_t>(k + j)] -= q * d[static_cast<size_t>(j)];
    rem[static_cast<size_t>(k + dd)] = 0;
  }
  rem.resize(static_cast<size_t>(dd));
  ZPoly remainder(std::move(rem));
  Scalar norm = remainder.max_abs();
  return {ZPoly(std::move(quo)), std::move(remainder), norm};
}

Scalar poly_distance(const ZPoly& p, const ZPoly& q) { return (p - q).max_abs(); }

InterpolationResult poly_interpolate(std::span<const Sample> samples, int degree_bound,
                                     const Scalar& tolerance) {
  if (degree_bound < 0) throw DomainError("poly_interpolate: negative degree bound");
  const auto count = static_cast<Eigen::Index>(samples.size());
  if (count < degree_bound + 1) {
    throw DomainError("poly_interpolate: need at least " + std::to_string(degree_bound + 1) +
                      " nodes, got " + std::to_string(count));
  }
  Scalar lo = samples[0].z, hi = samples[0].z, vmax(0);
  for (const auto& s : samples) {
    checked(s.z, "poly_interpolate node");
    checked(s.value, "poly_interpolate value");
    lo = std::min(lo, s.z);
    hi = std::max(hi, s.z);
    vmax = std::max(vmax, Scalar(abs(s.value)));
  }
  std::vector<Scalar> sorted;
  for (const auto& s : samples) sorted.push_back(s.z);
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) {
      throw DomainError("poly_interpolate: duplicate node z = " + to_short(sorted[i]));
    }
  }

  // Fit in t = (z - mid) / half for conditioning, then expand back to powers of z.
  const Scalar mid = (lo + hi) / 2;
  Scalar half = (hi - lo) / 2;
  if (half == 0) half = 1;
  const int m = degree_bound + 1;
  Matrix a(count, m);
  Vector b(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const Scalar t = (samples[static_cast<size_t>(i)].z - mid) / half;
    Scalar p(1);
    for (int k = 0; k < m; ++k) {
      a(i, k) = p;
      p *= t;
    }
    b(i) = samples[static_cast<size_t>(i)].value;
  }
  const LeastSquaresResult ls = least_squares(a, b);

  // sum_k b_k ((z - mid)/half)^k expanded by repeated multiplication.
  ZPoly result;
  ZPoly basis = ZPoly::constant(Scalar(1));
  const ZPoly t_poly({-mid / half, Scalar(1) / half});
  for (int k = 0; k < m; ++k) {
    result += basis * ls.x(k);
    basis = basis * t_poly;
  }

  Scalar worst(0);
  for (const auto& s : samples) worst = std::max(worst, Scalar(abs(poly_eval(result, s.z) - s.value)));
  InterpolationResult out{std::move(result), worst / std::max(Scalar(1), vmax), true};
  out.consistent = out.consistency_residual <= tolerance;
  return out;
}

std::vector<Scalar> chebyshev_nodes(int count, const Scalar& lo, const Scalar& hi) {
  std::vector<Scalar> nodes;
  nodes.reserve(static_cast<size_t>(count));
  const Scalar mid = (lo + hi) / 2, half = (hi - lo) / 2;
  for (int k = 0; k < count; ++k) {
    nodes.push_back(mid + half * cos(pi() * (2 * k + 1) / (2 * count)));
  }
  return nodes;
}

HyperellipticCurve::HyperellipticCurve(int genus, std::vector<Scalar> c)
    : genus_(genus), c_(std::move(c)) {
  if (genus_ < 1) throw DomainError("curve genus must be >= 1, got " + std::to_string(genus_));
  if (c_.size() != static_cast<size_t>(2 * genus_ + 1)) {
    throw DomainError("curve of genus " + std::to_string(genus_) + " needs " +
                      std::to_string(2 * genus_ + 1) + " coefficients, got " +
                      std::to_string(c_.size()));
  }
}

HyperellipticCurve HyperellipticCurve::from_polynomial(const ZPoly& monic, const Scalar& tolerance) {
  const int d = monic.degree();
  if (d < 3 || d % 2 == 0) {
    throw DomainError("spectral polynomial must have odd degree >= 3, got " + std::to_string(d));
  }
  if (abs(monic.leading() - 1) > tolerance) {
    throw DomainError("spectral polynomial is not monic: leading coefficient " +
                      to_short(monic.leading()));
  }
  std::vector<Scalar> c(monic.coeffs().begin(), monic.coeffs().end() - 1);
  return HyperellipticCurve((d - 1) / 2, std::move(c));
}

ZPoly HyperellipticCurve::polynomial() const {
  std::vector<Scalar> v = c_;
  v.push_back(Scalar(1));
  return ZPoly(std::move(v));
}

Scalar HyperellipticCurve::eval(const Scalar& z) const { return poly_eval(polynomial(), z); }

}  // namespace poscomm
