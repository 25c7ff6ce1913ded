#include "poscomm/ansatz.hpp"

#include <algorithm>

#include "poscomm/linalg.hpp"

namespace poscomm {

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::OddCosines: return "odd-cosines";
    case BasisKind::EvenPowers: return "even-powers";
    case BasisKind::OddGeometric: return "odd-geometric";
    case BasisKind::Powers: return "powers";
  }
  return "unknown";
}

AnsatzBasis::AnsatzBasis(BasisKind kind, int genus, Scalar ratio)
    : kind_(kind), genus_(genus), ratio_(std::move(ratio)) {
  if (genus_ < 1) throw DomainError("ansatz basis: genus must be >= 1");
  if (kind_ == BasisKind::OddGeometric && (ratio_ == 0 || abs(ratio_) == 1)) {
    throw DomainError("odd-geometric basis needs a ratio outside {0, 1, -1}");
  }
}

int AnsatzBasis::size() const {
  switch (kind_) {
    case BasisKind::OddCosines:
    case BasisKind::OddGeometric: return genus_ + 1;
    case BasisKind::EvenPowers: return genus_ + 2;
    case BasisKind::Powers: return 2 * genus_ + 3;
  }
  return 0;
}

int AnsatzBasis::label(int k) const {
  switch (kind_) {
    case BasisKind::OddCosines:
    case BasisKind::OddGeometric: return 2 * k + 1;
    case BasisKind::EvenPowers: return 2 * k;
    case BasisKind::Powers: return k;
  }
  return k;
}

Scalar AnsatzBasis::eval(int k, long n) const {
  const Scalar sn(n);
  switch (kind_) {
    case BasisKind::OddCosines: return cos(Scalar(2 * k + 1) * sn);
    case BasisKind::EvenPowers: return pow(sn, 2 * k);
    case BasisKind::OddGeometric: return pow(ratio_, Scalar((2 * k + 1) * n));
    case BasisKind::Powers: return pow(sn, k);
  }
  return Scalar(0);
}

ZPoly AnsatzResult::s_at(long n) const {
  ZPoly s;
  for (int k = 0; k < basis.size(); ++k) s += coefficients[static_cast<size_t>(k)] * basis.eval(k, n);
  return s;
}

ZPoly AnsatzResult::coefficient_for_label(int label) const {
  for (int k = 0; k < basis.size(); ++k) {
    if (basis.label(k) == label) return coefficients[static_cast<size_t>(k)];
  }
  throw DomainError("basis " + to_string(basis.kind()) + " has no element with label " +
                    std::to_string(label));
}

PolySeq AnsatzResult::s_seq(Window w) const {
  std::vector<ZPoly> polys;
  for (long n = w.lo; n <= w.hi; ++n) polys.push_back(s_at(n));
  return PolySeq(w, std::move(polys));
}

DressingState AnsatzResult::state(const CoeffSeq& u, const CoeffSeq& w, Window s_window) const {
  return DressingState::from_s(u, w, curve, s_seq(s_window));
}

long ansatz_grid_half_width(const AnsatzBasis& basis) {
  // Geometric sequences span a^{(2g+1) n}; a short grid keeps them representable.
  if (basis.kind() == BasisKind::OddGeometric) return basis.genus() + 3;
  return 2L * basis.genus() + 6;
}

namespace {

void scale_row(Matrix& m, Vector& rhs, Eigen::Index r) {
  Scalar mx(0);
  for (Eigen::Index c = 0; c < m.cols(); ++c) mx = std::max(mx, Scalar(abs(m(r, c))));
  if (mx == 0) return;
  m.row(r) /= mx;
  rhs(r) /= mx;
}

}  // namespace

AnsatzResult ansatz_solve(const AnsatzBasis& basis, const CoeffSeq& u, const CoeffSeq& w,
                          const std::optional<HyperellipticCurve>& known_curve,
                          const Scalar& tolerance) {
  const int g = basis.genus();
  const int nb = basis.size();
  const long m = ansatz_grid_half_width(basis);
  const Window need{-m - 1, m + 2};
  if (!u.window().covers(need) || !w.window().covers(need)) {
    throw WindowError("ansatz_solve needs U and W on " + need.str() + ", got " + u.window().str() +
                      " and " + w.window().str());
  }
  const Eigen::Index unknowns = static_cast<Eigen::Index>(nb) * (g + 1);
  auto col = [&](int k, int j) { return static_cast<Eigen::Index>(k) * (g + 1) + j; };

  // Homogeneous rows: coefficient of z^p in R_n for n on the grid.
  const long grid = 2 * m + 1;
  const Eigen::Index hom_rows = grid * (g + 2);
  Matrix a = Matrix::Zero(hom_rows + grid, unknowns);
  Vector rhs = Vector::Zero(hom_rows + grid);
  Eigen::Index row = 0;
  for (long n = -m; n <= m; ++n) {
    const auto mult = linear_multipliers(u, w, n);
    for (int p = 0; p <= g + 1; ++p, ++row) {
      for (int k = 0; k < nb; ++k) {
        for (int j = 0; j <= g; ++j) {
          Scalar v(0);
          for (int i = 0; i < 4; ++i) v += basis.eval(k, n - 1 + i) * mult[i].coeff(p - j);
          a(row, col(k, j)) = v;
        }
      }
      scale_row(a, rhs, row);
    }
  }
  const Eigen::Index rank = numerical_rank(a.topRows(hom_rows));
  if (rank < unknowns - 1) {
    throw InconsistentDataError("ansatz system for basis " + to_string(basis.kind()) +
                                " has rank " + std::to_string(rank) + " < " +
                                std::to_string(unknowns - 1) +
                                ": more than the scale freedom is undetermined");
  }

  // Normalization rows: the z^g coefficient of S_n equals -U_n.
  for (long n = -m; n <= m; ++n, ++row) {
    for (int k = 0; k < nb; ++k) a(row, col(k, g)) = basis.eval(k, n);
    rhs(row) = -u(n);
    scale_row(a, rhs, row);
  }
  const LeastSquaresResult ls = least_squares(a, rhs);

  AnsatzResult result{basis, {}, HyperellipticCurve(g, std::vector<Scalar>(2 * g + 1)), rank,
                      unknowns, Scalar(0), Scalar(0), Scalar(0)};
  for (int k = 0; k < nb; ++k) {
    std::vector<Scalar> c(static_cast<size_t>(g + 1));
    for (int j = 0; j <= g; ++j) c[static_cast<size_t>(j)] = ls.x(col(k, j));
    result.coefficients.emplace_back(std::move(c));
  }
  // Entries at rounding level are structural zeros. Left in place they are
  // amplified by fast-growing basis elements far outside the grid.
  Scalar cmax(0);
  for (const auto& c : result.coefficients) cmax = std::max(cmax, c.max_abs());
  const Scalar snap = pow(epsilon(), Scalar("0.75")) * cmax;
  for (auto& c : result.coefficients) {
    std::vector<Scalar> v(static_cast<size_t>(g + 1));
    for (int j = 0; j <= g; ++j) {
      const Scalar x = c.coeff(j);
      v[static_cast<size_t>(j)] = abs(x) <= snap ? Scalar(0) : x;
    }
    c = ZPoly(std::move(v));
  }

  const PolySeq s = result.s_seq({-m - 1, m + 2});
  for (long n = -m; n <= m; ++n) {
    result.system_residual = std::max(result.system_residual, linear_residual_norm(s, u, w, n).relative());
    const Scalar lead_err = abs(s(n).coeff(g) + u(n)) / std::max(Scalar(1), Scalar(abs(u(n))));
    result.system_residual = std::max(result.system_residual, lead_err);
  }
  if (result.system_residual > tolerance) {
    throw InconsistentDataError("no ansatz solution in basis " + to_string(basis.kind()) +
                                ": residual " + to_short(result.system_residual) +
                                " exceeds tolerance " + to_short(tolerance));
  }

  // F_g from the master identity at every grid index where Q_n, Q_{n+1} exist.
  // Each index is weighted by the size of the terms that cancel in it.
  std::vector<ZPoly> recovered;
  std::vector<Scalar> term_scale;
  for (long n = -m; n <= m + 1; ++n) {
    try {
      const ZPoly q0 = q_from_s(s(n - 1), s(n), u(n - 1), u(n));
      const ZPoly q1 = q_from_s(s(n), s(n + 1), u(n), u(n + 1));
      const ZPoly s2 = s(n) * s(n);
      const ZPoly rest = ZPoly({-(sq(u(n)) + w(n)), Scalar(1)}) * q0 * q1;
      recovered.push_back(s2 + rest);
      term_scale.push_back(std::max(s2.max_abs(), rest.max_abs()));
    } catch (const DegenerateError&) {
      // Skip indices where Q is undefined; the remaining ones still pin F_g.
    }
  }
  if (recovered.empty()) throw DegenerateError("ansatz_solve: Q_n undefined on the whole grid");
  const ZPoly& f0 = recovered[recovered.size() / 2];
  const Scalar fscale = std::max(Scalar(1), f0.max_abs());
  for (size_t i = 0; i < recovered.size(); ++i) {
    const Scalar local = std::max(fscale, term_scale[i]);
    result.curve_spread = std::max(result.curve_spread, poly_distance(recovered[i], f0) / local);
  }
  const HyperellipticCurve found = HyperellipticCurve::from_polynomial(f0, tolerance);
  if (known_curve) {
    result.curve_mismatch = poly_distance(found.polynomial(), known_curve->polynomial()) / fscale;
    result.curve = *known_curve;
  } else {
    result.curve = found;
  }
  return result;
}

Residual skew_residual(const AnsatzBasis& basis, const std::vector<ZPoly>& coefficients,
                       const CoeffSeq& u, const CoeffSeq& w, long n) {
  if (static_cast<int>(coefficients.size()) != basis.size()) {
    throw DomainError("skew_residual: expected " + std::to_string(basis.size()) + " coefficients");
  }
  auto s_at = [&](long k) {
    ZPoly s;
    for (int i = 0; i < basis.size(); ++i) s += coefficients[static_cast<size_t>(i)] * basis.eval(i, k);
    return s;
  };
  auto r_at = [&](long m, Scalar& scale) {
    const auto mult = linear_multipliers(u, w, m);
    ZPoly r;
    for (int i = 0; i < 4; ++i) {
      const ZPoly term = s_at(m - 1 + i) * mult[static_cast<size_t>(i)];
      scale = std::max(scale, term.max_abs());
      r += term;
    }
    return r;
  };
  Scalar scale(0);
  const ZPoly sum = r_at(n, scale) + r_at(-n - 1, scale);
  return {sum.max_abs(), scale};
}

}  // namespace poscomm
