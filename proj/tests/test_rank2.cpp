#include "support.hpp"

#include "poscomm/rank2.hpp"

using namespace poscomm;
using poscomm::test::S;

TEST_CASE("build_l4") {
  const Window w{-5, 5};
  SUBCASE("T^3 coefficient") {
    const DiffOp l = build_l4({S("1.5"), S("-0.5"), S("0.25")}, w);
    CHECK(l.coeff(3, 0) == S("0.25"));
    CHECK(build_l4({Scalar(2), Scalar(0), Scalar(0)}, w).coeff(3, 1) == 2);
    CHECK(l.order() == 4);
    CHECK(l.is_monic());
    CHECK(l.is_positive());
  }
  SUBCASE("zero parameters give constant coefficients") {
    const DiffOp l = build_l4({Scalar(0), Scalar(0), Scalar(0)}, w);
    for (const auto& [j, c] : l.terms()) {
      for (long n = w.lo; n <= w.hi; ++n) CHECK(c(n) == c(w.lo));
    }
  }
}

TEST_CASE("build_l6_special") {
  const DiffOp l = build_l6_special({-5, 5});
  CHECK(l.coeff(5, 0) == 8);
  CHECK(l.coeff(0, 0) == 0);
  CHECK(l.order() == 6);
  CHECK(l.is_monic());
  CHECK(l.coeff(5, 1) == 3 + 6 + 8);
}

TEST_CASE("rank2_curve_poly") {
  const ZPoly r = rank2_curve_poly({Scalar(2), Scalar(0), Scalar(0)});
  // (32 z)^2 (256 z + 576) / 262144
  CHECK(poly_eval(r, Scalar(1)) == S("3.25"));
  CHECK(poly_eval(r, Scalar(0)) == 0);
  CHECK(r.degree() == 3);
}

TEST_CASE("verify_rank2") {
  const Rank2Report rep = verify_rank2();
  CHECK_LE_S(rep.commutator_residual, S("1e-10"));
  CHECK_LE_S(rep.curve.max_mismatch, S("1e-7"));
  CHECK(rep.r_at_1 == S("3.25"));
  CHECK_LE_S(rep.z0_mismatch, S("1e-7"));
  CHECK(rep.curve.samples.size() == 8);
  for (const auto& s : rep.curve.samples) {
    // (w^2 - R)^2 = w^4 - 2 R w^2 + R^2: odd coefficients vanish.
    CHECK_LE_S(abs(s.char_poly[1]), S("1e-7") * std::max(Scalar(1), sq(s.expected_r)));
    CHECK_LE_S(abs(s.char_poly[3]), S("1e-7") * std::max(Scalar(1), abs(s.expected_r)));
    CHECK_CLOSE(s.char_poly[2], -2 * s.expected_r, S("1e-7"));
    CHECK_CLOSE(s.char_poly[0], sq(s.expected_r), S("1e-7"));
  }
}

TEST_CASE("a wrong curve is detected") {
  const Window w{-10, 30};
  const DiffOp l4 = build_l4({Scalar(2), Scalar(0), Scalar(0)}, w);
  const DiffOp l6 = build_l6_special(w);
  const ZPoly wrong = rank2_curve_poly({Scalar(2), Scalar(0), Scalar(0)}) + ZPoly::constant(Scalar(1));
  const Rank2CurveReport r = rank2_curve_check(l4, l6, wrong, chebyshev_nodes(8, Scalar(-4), Scalar(4)), 3,
                                               S("1e-7"));
  CHECK(r.max_mismatch > S("1e-3"));
}
