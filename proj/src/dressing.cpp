#include "poscomm/dressing.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace poscomm {

PolySeq::PolySeq(Window w, std::vector<ZPoly> polys) : window_(w), polys_(std::move(polys)) {
  if (static_cast<long>(polys_.size()) != window_.size()) {
    throw DomainError("PolySeq: " + std::to_string(polys_.size()) + " polynomials for window " +
                      window_.str());
  }
}

const ZPoly& PolySeq::operator()(long n) const {
  if (!window_.contains(n)) {
    throw WindowError("polynomial sequence evaluated at n = " + std::to_string(n) +
                      " outside its window " + window_.str());
  }
  return polys_[static_cast<size_t>(n - window_.lo)];
}

PolySeq PolySeq::restricted(const Window& w) const {
  if (!window_.covers(w)) {
    throw WindowError("cannot restrict polynomial sequence on " + window_.str() + " to " + w.str());
  }
  auto first = polys_.begin() + (w.lo - window_.lo);
  return PolySeq(w, std::vector<ZPoly>(first, first + w.size()));
}

DressingState::DressingState(CoeffSeq u, CoeffSeq w, HyperellipticCurve curve, PolySeq s, PolySeq q)
    : u_(std::move(u)), w_(std::move(w)), curve_(std::move(curve)), s_(std::move(s)), q_(std::move(q)) {
  if (!u_.window().covers(s_.window()) || !w_.window().covers(s_.window())) {
    throw WindowError("dressing state: U on " + u_.window().str() + " and W on " +
                      w_.window().str() + " must cover the S window " + s_.window().str());
  }
}

DressingState DressingState::from_s(CoeffSeq u, CoeffSeq w, HyperellipticCurve curve, PolySeq s) {
  const Window qw{s.window().lo + 1, s.window().hi};
  std::vector<ZPoly> q;
  for (long n = qw.lo; n <= qw.hi; ++n) q.push_back(q_from_s(s(n - 1), s(n), u(n - 1), u(n)));
  PolySeq qs(qw, std::move(q));
  return DressingState(std::move(u), std::move(w), std::move(curve), std::move(s), std::move(qs));
}

Window DressingState::master_window() const {
  return q_.window().intersect(q_.window().shifted(-1)).intersect(s_.window());
}

Window DressingState::linear_window() const {
  Window w{s_.window().lo + 1, s_.window().hi - 2};
  return w.intersect({u_.window().lo + 1, u_.window().hi - 2});
}

DiffOp make_l2(const CoeffSeq& u, const CoeffSeq& w) {
  const Window win = Window{u.window().lo, u.window().hi - 1}.intersect(w.window());
  if (win.empty()) throw WindowError("make_l2: U and W leave no index for L_2");
  return DiffOp(win, {{2, CoeffSeq::constant(win, Scalar(1))},
                      {1, CoeffSeq::tabulate(win, [&](long n) { return u(n) + u(n + 1); })},
                      {0, CoeffSeq::tabulate(win, [&](long n) { return sq(u(n)) + w(n); })}});
}

ZPoly q_from_s(const ZPoly& s_prev, const ZPoly& s_cur, const Scalar& u_prev, const Scalar& u_cur) {
  const Scalar den = u_prev + u_cur;
  const Scalar mag = std::max(Scalar(abs(u_prev)), Scalar(abs(u_cur)));
  if (den == 0 || abs(den) <= degeneracy_threshold() * mag) {
    throw DegenerateError("U_{n-1} + U_n = " + to_short(den) + " is degenerate");
  }
  return -(s_prev + s_cur) / den;
}

namespace {

ZPoly master_factor(const CoeffSeq& u, const CoeffSeq& w, long n) {
  return ZPoly({-(sq(u(n)) + w(n)), Scalar(1)});
}

}  // namespace

std::array<ZPoly, 4> linear_multipliers(const CoeffSeq& u, const CoeffSeq& w, long n) {
  const Scalar um = u(n - 1), u0 = u(n), u1 = u(n + 1), u2 = u(n + 2);
  const Scalar w0 = w(n), w1 = w(n + 1);
  const Scalar left = u1 + u2, right = um + u0;
  return {
      ZPoly({-sq(u0) - w0, Scalar(1)}) * left,
      ZPoly({u0 * u1 + um * (u0 + u1) - w0, Scalar(1)}) * left,
      -(ZPoly({u0 * u1 + (u0 + u1) * u2 - w1, Scalar(1)}) * right),
      -(ZPoly({-sq(u1) - w1, Scalar(1)}) * right),
  };
}

Residual verify_master(const DressingState& state, long n) {
  const ZPoly f = state.curve().polynomial();
  const ZPoly s2 = state.S()(n) * state.S()(n);
  const ZPoly qq = master_factor(state.U(), state.W(), n) * state.Q()(n) * state.Q()(n + 1);
  const Scalar scale = std::max({f.max_abs(), s2.max_abs(), qq.max_abs()});
  return {(f - s2 - qq).max_abs(), scale};
}

namespace {

std::array<ZPoly, 4> linear_terms(const PolySeq& s, const CoeffSeq& u, const CoeffSeq& w, long n) {
  const auto m = linear_multipliers(u, w, n);
  return {s(n - 1) * m[0], s(n) * m[1], s(n + 1) * m[2], s(n + 2) * m[3]};
}

}  // namespace

ZPoly linear_residual(const PolySeq& s, const CoeffSeq& u, const CoeffSeq& w, long n) {
  const auto t = linear_terms(s, u, w, n);
  return t[0] + t[1] + t[2] + t[3];
}

Residual linear_residual_norm(const PolySeq& s, const CoeffSeq& u, const CoeffSeq& w, long n) {
  const auto t = linear_terms(s, u, w, n);
  Scalar scale(0);
  for (const auto& p : t) scale = std::max(scale, p.max_abs());
  return {(t[0] + t[1] + t[2] + t[3]).max_abs(), scale};
}

ZPoly residual_linear(const DressingState& state, long n) {
  return linear_residual(state.S(), state.U(), state.W(), n);
}

Residual residual_linear_norm(const DressingState& state, long n) {
  return linear_residual_norm(state.S(), state.U(), state.W(), n);
}

namespace {

// Q = (F - S^2) / ((z - U^2 - W) * Q_other), checked for exactness.
ZPoly divide_master(const ZPoly& f, const ZPoly& s, const ZPoly& factor, const ZPoly& q_other,
                    long n, const Scalar& tolerance, Scalar& worst) {
  const ZPoly num = f - s * s;
  const DivisionResult d = poly_div_exact(num, factor * q_other);
  const Scalar scale = std::max(Scalar(1), num.max_abs());
  const Scalar rel = d.residual_norm / scale;
  worst = std::max(worst, rel);
  if (rel > tolerance) {
    throw InconsistentDataError("inconsistent initial data: division remainder " + to_short(rel) +
                                " (relative) at n = " + std::to_string(n));
  }
  return d.quotient;
}

}  // namespace

DressingState solve_partner_recursive(const CoeffSeq& u, const CoeffSeq& w,
                                      const HyperellipticCurve& curve, const ZPoly& s_prev,
                                      const ZPoly& s_cur, long n0, Window range,
                                      const Scalar& tolerance) {
  if (!range.contains(n0 - 1) || !range.contains(n0)) {
    throw DomainError("recursion range " + range.str() + " must contain the seed indices " +
                      std::to_string(n0 - 1) + ", " + std::to_string(n0));
  }
  if (!u.window().covers(range) || !w.window().covers(range)) {
    throw WindowError("recursion range " + range.str() + " not covered by U on " +
                      u.window().str() + " and W on " + w.window().str());
  }
  const ZPoly f = curve.polynomial();
  std::map<long, ZPoly> s{{n0 - 1, s_prev}, {n0, s_cur}};
  Scalar worst(0);

  for (long n = n0; n + 1 <= range.hi; ++n) {
    const ZPoly qn = q_from_s(s.at(n - 1), s.at(n), u(n - 1), u(n));
    const ZPoly qn1 = divide_master(f, s.at(n), master_factor(u, w, n), qn, n, tolerance, worst);
    s[n + 1] = -(qn1 * (u(n) + u(n + 1))) - s.at(n);
  }
  for (long n = n0 - 1; n - 1 >= range.lo; --n) {
    const ZPoly qn1 = q_from_s(s.at(n), s.at(n + 1), u(n), u(n + 1));
    const ZPoly qn = divide_master(f, s.at(n), master_factor(u, w, n), qn1, n, tolerance, worst);
    s[n - 1] = -(qn * (u(n - 1) + u(n))) - s.at(n);
  }

  std::vector<ZPoly> polys;
  for (long n = range.lo; n <= range.hi; ++n) polys.push_back(s.at(n));
  DressingState state = DressingState::from_s(u.restricted(range), w.restricted(range), curve,
                                              PolySeq(range, std::move(polys)));
  state.set_max_division_residual(worst);
  return state;
}

CurvePointSample CurvePointSample::on_curve(const HyperellipticCurve& curve, const Scalar& z,
                                            int branch) {
  const Scalar f = curve.eval(z);
  if (f < 0) throw DomainError("F(z) < 0 at z = " + to_short(z) + ": no real curve point");
  return {z, branch >= 0 ? Scalar(sqrt(f)) : Scalar(-sqrt(f))};
}

Scalar CurvePointSample::on_curve_residual(const HyperellipticCurve& curve) const {
  return abs(sq(w) - curve.eval(z));
}

Scalar chi_eval(const DressingState& state, long n, const CurvePointSample& p) {
  const ZPoly& q = state.Q()(n);
  const Scalar qz = poly_eval(q, p.z);
  if (abs(qz) <= degeneracy_threshold() * poly_eval_abs(q, p.z)) {
    throw DegenerateError("chi_n has a pole: Q_" + std::to_string(n) + "(" + to_short(p.z) +
                          ") = " + to_short(qz));
  }
  return checked((poly_eval(state.S()(n), p.z) + p.w) / qz, "chi_eval");
}

Residual chi_relation_residual(const DressingState& state, long n, const CurvePointSample& p) {
  const Scalar c0 = chi_eval(state, n, p);
  const Scalar c1 = chi_eval(state, n + 1, p);
  const Scalar& u0 = state.U()(n);
  const Scalar& u1 = state.U()(n + 1);
  const Scalar value = -p.z + sq(u0) + state.W()(n) + c0 * (u0 + u1 + c1);
  const Scalar scale = std::max({Scalar(abs(p.z)), Scalar(sq(u0)), Scalar(abs(state.W()(n))),
                                 Scalar(abs(c0 * (u0 + u1))), Scalar(abs(c0 * c1))});
  return {Scalar(abs(value)), scale};
}

DiffOp build_partner_op(const DressingState& state, const DiffOp& l2) {
  const int g = state.genus();
  const Window qs = state.Q().window().intersect(state.S().window());
  std::vector<DiffOp> powers{DiffOp::identity(l2.window())};
  for (int k = 1; k <= g; ++k) powers.push_back(op_mul(l2, powers.back()));

  std::optional<DiffOp> result;
  auto accumulate = [&](const DiffOp& term) { result = result ? *result + term : term; };
  for (int k = 0; k <= g; ++k) {
    const DiffOp& pk = powers[static_cast<size_t>(k)];
    const DiffOp tpk = op_mul(DiffOp::shift(pk.window().shifted(-1)), pk);
    const Window wq = qs.intersect(tpk.window());
    const Window ws = qs.intersect(pk.window());
    if (wq.empty() || ws.empty()) {
      throw WindowError("build_partner_op: dressing data on " + qs.str() + " and L_2 on " +
                        l2.window().str() + " are too short for order " + std::to_string(2 * g + 1));
    }
    const CoeffSeq qk = CoeffSeq::tabulate(wq, [&](long n) { return state.Q()(n).coeff(k); });
    const CoeffSeq sk = CoeffSeq::tabulate(ws, [&](long n) { return -state.S()(n).coeff(k); });
    accumulate(op_left_scale(qk, tpk));
    accumulate(op_left_scale(sk, pk));
  }
  const DiffOp& l = *result;
  if (l.order() != 2 * g + 1 || !l.is_positive() || !l.is_monic(Scalar("1e-20"))) {
    std::string why = "order " + std::to_string(l.order()) + (l.is_positive() ? "" : ", not positive");
    if (l.order() == 2 * g + 1) {
      Scalar dev(0);
      for (const Scalar& v : l.terms().at(l.order()).values()) dev = std::max(dev, Scalar(abs(v - 1)));
      why += ", top deviation " + to_short(dev);
    }
    throw InconsistentDataError("partner operator is not positive monic of order " +
                                std::to_string(2 * g + 1) + " (" + why + ")");
  }
  return l;
}

Residual factorization_check(const DressingState& state, const DiffOp& l2,
                             const CurvePointSample& p, const CoeffSeq& f) {
  const Window cw = state.Q().window();
  const CoeffSeq chi = CoeffSeq::tabulate(cw, [&](long n) { return chi_eval(state, n, p); });
  const DiffOp right(cw, {{1, CoeffSeq::constant(cw, Scalar(1))}, {0, CoeffSeq::tabulate(cw, [&](long n) {
                                                                      return -chi(n);
                                                                    })}});
  const Window lw = cw.shifted(-1).intersect(state.U().window().shifted(-1)).intersect(state.U().window());
  if (lw.empty()) throw WindowError("factorization_check: window too small");
  const DiffOp left(lw, {{1, CoeffSeq::constant(lw, Scalar(1))},
                         {0, CoeffSeq::tabulate(lw, [&](long n) {
                            return state.U()(n) + state.U()(n + 1) + chi(n + 1);
                          })}});
  const DiffOp factored = op_mul(left, right);
  const DiffOp shifted = l2 - p.z * DiffOp::identity(l2.window());
  const CoeffSeq a = op_apply(shifted, f);
  const CoeffSeq b = op_apply(factored, f);
  const Window common = a.window().intersect(b.window());
  if (common.empty()) throw WindowError("factorization_check: no common index");
  Scalar worst(0);
  for (long n = common.lo; n <= common.hi; ++n) worst = std::max(worst, Scalar(abs(a(n) - b(n))));
  const Scalar scale = f.sup_norm() * std::max(factored.sup_norm(), shifted.sup_norm());
  return {worst, scale};
}

namespace {

Scalar chi_nonzero(const DressingState& state, long k, const CurvePointSample& p) {
  const Scalar num = poly_eval(state.S()(k), p.z) + p.w;
  const Scalar mag = poly_eval_abs(state.S()(k), p.z) + abs(p.w);
  if (abs(num) <= degeneracy_threshold() * mag) {
    throw DegenerateError("chi_" + std::to_string(k) + " vanishes at z = " + to_short(p.z) +
                          "; psi cannot be continued to negative n");
  }
  return chi_eval(state, k, p);
}

}  // namespace

Scalar baker_akhiezer(const DressingState& state, const CurvePointSample& p, long n) {
  Scalar psi(1);
  if (n > 0) {
    for (long k = 0; k < n; ++k) psi *= chi_eval(state, k, p);
  } else {
    for (long k = n; k < 0; ++k) psi /= chi_nonzero(state, k, p);
  }
  return checked(psi, "baker_akhiezer");
}

CoeffSeq baker_akhiezer_seq(const DressingState& state, const CurvePointSample& p, Window w) {
  std::map<long, Scalar> psi{{0, Scalar(1)}};
  for (long n = 1; n <= w.hi; ++n) psi[n] = psi.at(n - 1) * chi_eval(state, n - 1, p);
  for (long n = -1; n >= w.lo; --n) psi[n] = psi.at(n + 1) / chi_nonzero(state, n, p);
  return CoeffSeq::tabulate(w, [&](long n) { return checked(psi.at(n), "baker_akhiezer"); });
}

}  // namespace poscomm
