// Randomized property checks. Every generator is seeded, so failures replay.

#include "support.hpp"

#include "poscomm/dressing.hpp"
#include "poscomm/weierstrass.hpp"

using namespace poscomm;
using poscomm::test::S;

namespace {

constexpr int kTrials = 12;

Scalar rel_norm(const DiffOp& residual, const Scalar& scale) {
  return op_residual_norm(residual) / std::max(Scalar(1), scale);
}

}  // namespace

TEST_CASE("commutator is exactly antisymmetric") {
  test::Gen gen(101);
  for (int t = 0; t < kTrials; ++t) {
    const Window w{-6, 6};
    const DiffOp a = gen.op(w, 0, static_cast<int>(gen.integer(1, 3)));
    const DiffOp b = gen.op(w, 0, static_cast<int>(gen.integer(1, 3)));
    CHECK(op_residual_norm(op_commutator(a, b) + op_commutator(b, a)) == 0);
  }
}

TEST_CASE("Jacobi identity") {
  test::Gen gen(103);
  for (int t = 0; t < kTrials; ++t) {
    const Window w{-12, 12};
    const DiffOp a = gen.op(w, 0, 2), b = gen.op(w, 0, 2), c = gen.op(w, 0, 1);
    const DiffOp j = op_commutator(a, op_commutator(b, c)) + op_commutator(b, op_commutator(c, a)) +
                     op_commutator(c, op_commutator(a, b));
    const Scalar scale = a.sup_norm() * b.sup_norm() * c.sup_norm();
    CHECK_LE_S(rel_norm(j, scale), S("1e-12"));
  }
}

TEST_CASE("op_mul is associative and distributes over +") {
  test::Gen gen(107);
  for (int t = 0; t < kTrials; ++t) {
    const Window w{-10, 10};
    const DiffOp a = gen.op(w, 0, 2), b = gen.op(w, -1, 1), c = gen.op(w, 0, 2);
    const DiffOp l = op_mul(op_mul(a, b), c), r = op_mul(a, op_mul(b, c));
    const Window common = l.window().intersect(r.window());
    const Scalar scale = a.sup_norm() * b.sup_norm() * c.sup_norm();
    CHECK_LE_S(rel_norm(l.restricted(common) - r.restricted(common), scale), S("1e-30"));

    const DiffOp d = op_mul(a, b + c), e = op_mul(a, b) + op_mul(a, c);
    const Window dw = d.window().intersect(e.window());
    CHECK_LE_S(rel_norm(d.restricted(dw) - e.restricted(dw), scale), S("1e-30"));
  }
}

TEST_CASE("applying a product equals applying the factors") {
  test::Gen gen(109);
  for (int t = 0; t < kTrials; ++t) {
    const Window w{-10, 10};
    const DiffOp a = gen.op(w, 0, 2), b = gen.op(w, 0, 3);
    const CoeffSeq f = gen.seq({-20, 20});
    const CoeffSeq lhs = op_apply(op_mul(a, b), f);
    const CoeffSeq rhs = op_apply(a, op_apply(b, f));
    const Window common = lhs.window().intersect(rhs.window());
    REQUIRE(common.size() > 0);
    for (long n = common.lo; n <= common.hi; ++n) CHECK_CLOSE(lhs(n), rhs(n), S("1e-30"));
  }
}

TEST_CASE("positive monic operators are closed under products") {
  test::Gen gen(113);
  for (int t = 0; t < kTrials; ++t) {
    const Window w{-8, 8};
    const int p = static_cast<int>(gen.integer(1, 3)), q = static_cast<int>(gen.integer(1, 3));
    auto monic = [&](int order) {
      DiffOp l = gen.op(w, 0, order - 1);
      return l + DiffOp::shift(w, order);
    };
    const DiffOp prod = op_mul(monic(p), monic(q));
    CHECK(prod.is_positive());
    CHECK(prod.is_monic());
    CHECK(prod.order() == p + q);
  }
}

TEST_CASE("polynomial ring axioms") {
  test::Gen gen(127);
  for (int t = 0; t < kTrials; ++t) {
    const ZPoly a = gen.poly(static_cast<int>(gen.integer(0, 5)));
    const ZPoly b = gen.poly(static_cast<int>(gen.integer(0, 5)));
    const ZPoly c = gen.poly(static_cast<int>(gen.integer(0, 5)));
    CHECK(poly_distance(a * b, b * a) == 0);
    CHECK_LE_S(poly_distance((a * b) * c, a * (b * c)), S("1e-30"));
    CHECK_LE_S(poly_distance(a * (b + c), a * b + a * c), S("1e-30"));
    const Scalar z = gen.uniform(-3, 3);
    CHECK_CLOSE(poly_eval(a * b, z), poly_eval(a, z) * poly_eval(b, z), S("1e-28"));
  }
}

TEST_CASE("exact division round trip") {
  test::Gen gen(131);
  for (int t = 0; t < kTrials; ++t) {
    const ZPoly q = gen.poly(static_cast<int>(gen.integer(0, 4)));
    ZPoly d = gen.poly(static_cast<int>(gen.integer(1, 3)));
    d = d + ZPoly::monomial(d.degree(), Scalar(3));  // keep the leading coefficient away from 0
    const auto r = poly_div_exact(q * d, d);
    CHECK_LE_S(poly_distance(r.quotient, q), S("1e-28"));
    CHECK_LE_S(r.residual_norm, S("1e-28") * (q * d).max_abs());
  }
}

TEST_CASE("interpolation round trip") {
  test::Gen gen(137);
  for (int t = 0; t < kTrials; ++t) {
    const int deg = static_cast<int>(gen.integer(0, 7));
    const ZPoly p = gen.poly(deg);
    std::vector<Sample> s;
    for (const auto& z : chebyshev_nodes(deg + 4, Scalar(-4), Scalar(4))) s.push_back({z, poly_eval(p, z)});
    const auto r = poly_interpolate(s, deg, S("1e-20"));
    CHECK(r.consistent);
    CHECK_LE_S(poly_distance(r.poly, p), S("1e-20"));
  }
}

TEST_CASE("decimal serialization round trip") {
  test::Gen gen(139);
  for (int t = 0; t < kTrials; ++t) {
    const Scalar v = gen.uniform(-1e6, 1e6) / 7;
    CHECK(parse_scalar(to_decimal(v)) == v);
  }
}

TEST_CASE("zeta/wp consistency at random points") {
  test::Gen gen(149);
  const WeierstrassContext ctx = WeierstrassContext::lemniscatic();
  const Scalar h("1e-10");
  for (int t = 0; t < kTrials; ++t) {
    Scalar x = gen.uniform(0.05, 5.0);
    // Stay clear of the lattice point at 2 omega.
    if (abs(x - 2 * ctx.real_halfperiod()) < S("0.05")) x += S("0.1");
    CHECK_LE_S(abs(ctx.zeta(-x) + ctx.zeta(x)), S("1e-12") * std::max(Scalar(1), abs(ctx.zeta(x))));
    CHECK_CLOSE(ctx.wp(-x), ctx.wp(x), S("1e-12"));
    const Scalar d = (ctx.zeta(x + h) - ctx.zeta(x - h)) / (2 * h);
    CHECK_CLOSE(d, -ctx.wp(x), S("1e-8"));
  }
}
