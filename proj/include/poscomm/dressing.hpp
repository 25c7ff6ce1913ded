#pragma once

// Dressing data (S_n, Q_n) of the operator L_2 = (T + U_n)^2 + W_n.
//
// The eigenfunction ratio chi_n = psi(n+1)/psi(n) on the curve w^2 = F_g(z) is
// chi_n = (S_n(z) + w) / Q_n(z), with
//
//   S_n = -U_n z^g + ...,                      deg S_n = g,
//   Q_n = -(S_{n-1} + S_n) / (U_{n-1} + U_n),  monic of degree g,
//   F_g = S_n^2 + (z - U_n^2 - W_n) Q_n Q_{n+1}.
//
// This header holds the state type, the identity checks, the recursive solver,
// the partner construction and Baker-Akhiezer evaluation. The basis-ansatz
// solver lives in ansatz.hpp.

#include <array>
#include <optional>
#include <vector>

#include "poscomm/opalg.hpp"
#include "poscomm/zpoly.hpp"

namespace poscomm {

inline const Scalar& default_tolerance() {
  static const Scalar tol("1e-9");
  return tol;
}

/// An absolute residual together with the magnitude it should be judged against.
struct Residual {
  Scalar value;
  Scalar scale;

  Scalar relative() const { return scale == 0 ? value : value / scale; }
  bool within(const Scalar& tolerance) const { return value <= tolerance * scale; }
};

/// Sequence n -> ZPoly on a window.
class PolySeq {
 public:
  PolySeq() = default;
  PolySeq(Window w, std::vector<ZPoly> polys);

  const Window& window() const { return window_; }
  const ZPoly& operator()(long n) const;
  PolySeq restricted(const Window& w) const;

 private:
  Window window_;
  std::vector<ZPoly> polys_;
};

/// (U, W, curve, S, Q) tied together. Q is tabulated one index to the right of
/// the start of S because Q_n needs S_{n-1}.
class DressingState {
 public:
  /// Builds Q from S by q_from_s on [S.lo + 1, S.hi].
  static DressingState from_s(CoeffSeq u, CoeffSeq w, HyperellipticCurve curve, PolySeq s);
  /// Uses the given Q as-is (closed-form families).
  DressingState(CoeffSeq u, CoeffSeq w, HyperellipticCurve curve, PolySeq s, PolySeq q);

  const CoeffSeq& U() const { return u_; }
  const CoeffSeq& W() const { return w_; }
  const HyperellipticCurve& curve() const { return curve_; }
  const PolySeq& S() const { return s_; }
  const PolySeq& Q() const { return q_; }
  int genus() const { return curve_.genus(); }

  /// Indices n where verify_master is defined (Q_n and Q_{n+1} present).
  Window master_window() const;
  /// Indices n where residual_linear is defined (S_{n-1..n+2}, U_{n-1..n+2}).
  Window linear_window() const;

  /// Largest relative remainder seen by poly_div_exact while building the state.
  const Scalar& max_division_residual() const { return max_division_residual_; }
  void set_max_division_residual(Scalar r) { max_division_residual_ = std::move(r); }

 private:
  CoeffSeq u_, w_;
  HyperellipticCurve curve_;
  PolySeq s_, q_;
  Scalar max_division_residual_{0};
};

/// |U_prev + U_cur| must exceed this times max(|U_prev|, |U_cur|).
inline const Scalar& degeneracy_threshold() {
  static const Scalar t("1e-8");
  return t;
}

/// L_2 = T^2 + (U_n + U_{n+1}) T + (U_n^2 + W_n) on every n where U_{n+1}, W_n exist.
DiffOp make_l2(const CoeffSeq& u, const CoeffSeq& w);

/// Q = -(S_prev + S_cur) / (U_prev + U_cur). Throws DegenerateError when the
/// denominator is negligible.
ZPoly q_from_s(const ZPoly& s_prev, const ZPoly& s_cur, const Scalar& u_prev, const Scalar& u_cur);

/// Coefficient norm of F_g - S_n^2 - (z - U_n^2 - W_n) Q_n Q_{n+1}; scale is the
/// largest coefficient among the three terms.
Residual verify_master(const DressingState& state, long n);

/// R_n in its four-term expanded form. Zero for valid states; it equals the
/// left side of the linear relation times (U_{n-1}+U_n)(U_{n+1}+U_{n+2}).
ZPoly residual_linear(const DressingState& state, long n);

/// m_0..m_3 with R_n = S_{n-1} m_0 + S_n m_1 + S_{n+1} m_2 + S_{n+2} m_3; each
/// m_i is linear in z.
std::array<ZPoly, 4> linear_multipliers(const CoeffSeq& u, const CoeffSeq& w, long n);

/// R_n for arbitrary S, U, W (no state invariants required).
ZPoly linear_residual(const PolySeq& s, const CoeffSeq& u, const CoeffSeq& w, long n);

/// Coefficient norm of R_n with the largest of its four term norms as scale.
Residual linear_residual_norm(const PolySeq& s, const CoeffSeq& u, const CoeffSeq& w, long n);
Residual residual_linear_norm(const DressingState& state, long n);

/// Extends (S_{n0-1}, S_{n0}) over `range` with
///   Q_{n+1} = (F_g - S_n^2) / ((z - U_n^2 - W_n) Q_n),
///   S_{n+1} = -(U_n + U_{n+1}) Q_{n+1} - S_n,
/// and the mirrored step downwards. Each exact division must leave a relative
/// remainder <= tolerance, else InconsistentDataError naming n.
DressingState solve_partner_recursive(const CoeffSeq& u, const CoeffSeq& w,
                                      const HyperellipticCurve& curve, const ZPoly& s_prev,
                                      const ZPoly& s_cur, long n0, Window range,
                                      const Scalar& tolerance = default_tolerance());

/// A point (z, w) on w^2 = F_g(z).
struct CurvePointSample {
  Scalar z;
  Scalar w;

  /// w = branch * sqrt(F_g(z)); throws DomainError when F_g(z) < 0.
  static CurvePointSample on_curve(const HyperellipticCurve& curve, const Scalar& z, int branch);
  Scalar on_curve_residual(const HyperellipticCurve& curve) const;
};

/// chi_n(P) = (S_n(z) + w) / Q_n(z). Throws DegenerateError at poles.
Scalar chi_eval(const DressingState& state, long n, const CurvePointSample& p);

/// -z + U_n^2 + W_n + chi_n (U_n + U_{n+1} + chi_{n+1}), with the size of the
/// largest term as scale.
Residual chi_relation_residual(const DressingState& state, long n, const CurvePointSample& p);

/// L_{2g+1} = sum_k q_{n,k} T L_2^k - sum_k s_{n,k} L_2^k where q_{n,k}, s_{n,k}
/// are the z^k coefficients of Q_n and S_n. Throws WindowError when the state
/// and L_2 leave no index where the partner is determined.
DiffOp build_partner_op(const DressingState& state, const DiffOp& l2);

/// Sup over n of |(L_2 - z) f - (T + U_n + U_{n+1} + chi_{n+1})(T - chi_n) f|.
/// Scale is sup|f| times the largest coefficient of either factorization.
Residual factorization_check(const DressingState& state, const DiffOp& l2,
                             const CurvePointSample& p, const CoeffSeq& f);

/// psi(n, P) as a product of chi_k with psi(0, P) = 1.
Scalar baker_akhiezer(const DressingState& state, const CurvePointSample& p, long n);

/// psi(n, P) tabulated on w (which must lie in the range where chi is available).
CoeffSeq baker_akhiezer_seq(const DressingState& state, const CurvePointSample& p, Window w);

}  // namespace poscomm
