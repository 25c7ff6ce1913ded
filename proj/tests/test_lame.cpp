#include "support.hpp"

#include "poscomm/lame.hpp"

using namespace poscomm;
using poscomm::test::S;

namespace {

const WeierstrassContext& lem() {
  static const WeierstrassContext ctx = WeierstrassContext::lemniscatic();
  return ctx;
}

std::vector<Scalar> eps_list(std::initializer_list<const char*> xs) {
  std::vector<Scalar> v;
  for (const char* x : xs) v.push_back(S(x));
  return v;
}

}  // namespace

TEST_CASE("lemniscatic lattice constants") {
  // omega = Gamma(1/4)^2 / (4 sqrt(pi)), eta = pi / (4 omega)
  CHECK_CLOSE(lem().real_halfperiod(), S("1.311028777146059905232419794945559706841"), S("1e-30"));
  CHECK_CLOSE(lem().eta(), pi() / (4 * lem().real_halfperiod()), S("1e-30"));
  CHECK_CLOSE(agm(Scalar(1), sqrt(Scalar(2))), S("1.198140234735592207439922492280323878"), S("1e-32"));
  CHECK_THROWS_AS(WeierstrassContext(Scalar(1), Scalar(1)), DomainError);
}

TEST_CASE("wp and zeta") {
  SUBCASE("wp - 1/x^2 near 0") {
    const Scalar x("1e-3");
    CHECK_LE_S(abs(lem().wp(x) - 1 / sq(x)), lem().g2() * sq(x) / 20 * (1 + S("1e-6")));
  }
  SUBCASE("zeta is odd, wp is even") {
    for (const char* xs : {"0.1", "0.37", "0.9", "1.3", "2.2", "-3.7"}) {
      const Scalar x = S(xs);
      CHECK_LE_S(abs(lem().zeta(-x) + lem().zeta(x)), S("1e-12") * std::max(Scalar(1), abs(lem().zeta(x))));
      CHECK_CLOSE(lem().wp(-x), lem().wp(x), S("1e-12"));
    }
  }
  SUBCASE("zeta' = -wp by central differences") {
    const Scalar h("1e-10");
    for (const char* xs : {"0.2", "0.73", "1.5", "2.9"}) {
      const Scalar x = S(xs);
      const Scalar d = (lem().zeta(x + h) - lem().zeta(x - h)) / (2 * h);
      CHECK_CLOSE(d, -lem().wp(x), S("1e-8"));
    }
  }
  SUBCASE("classical differential equation, including g3 != 0") {
    const WeierstrassContext ctx(Scalar(4), Scalar(1));
    for (const WeierstrassContext* c : {&lem(), &ctx}) {
      for (const char* xs : {"0.3", "0.8", "1.9"}) {
        const Scalar x = S(xs), p = c->wp(x);
        const Scalar lhs = sq(c->wp_prime(x)), rhs = 4 * p * p * p - c->g2() * p - c->g3();
        CHECK_CLOSE(lhs, rhs, S("1e-25"));
      }
    }
  }
  SUBCASE("quasi-periodicity") {
    const Scalar w2 = 2 * lem().real_halfperiod();
    const Scalar x("0.41");
    CHECK_CLOSE(lem().zeta(x + w2), lem().zeta(x) + 2 * lem().eta(), S("1e-28"));
    CHECK_CLOSE(lem().wp(x + w2), lem().wp(x), S("1e-28"));
  }
  SUBCASE("lattice points are rejected") {
    CHECK_THROWS_AS(lem().wp(Scalar(0)), DomainError);
    CHECK_THROWS_AS(lem().zeta(2 * lem().real_halfperiod() + S("1e-8")), DomainError);
  }
}

TEST_CASE("ag_build") {
  const Scalar eps("0.1"), x("0.73");
  const auto& c = lem();
  SUBCASE("g = 1") {
    const Scalar expect = -2 * c.zeta(eps) - c.zeta(x - eps) + c.zeta(x + eps);
    CHECK(ag_build(c, 1, eps)(x) == expect);
  }
  SUBCASE("g = 3") {
    const Scalar a1 = -2 * c.zeta(eps) - c.zeta(x - eps) + c.zeta(x + eps);
    const Scalar expect = a1 * (1 + (c.zeta(x - 3 * eps) - c.zeta(x + 3 * eps)) / (c.zeta(eps) + c.zeta(5 * eps)));
    CHECK_CLOSE(ag_build(c, 3, eps)(x), expect, S("1e-30"));
  }
  SUBCASE("g = 2 interpretations differ only in the x-dependent pair") {
    const Scalar pair = c.zeta(x - 2 * eps) - c.zeta(x + 2 * eps);
    const Scalar scalar = Scalar(-3) / 2 * (c.zeta(eps) + c.zeta(3 * eps));
    CHECK_CLOSE(ag_build(c, 2, eps, A2Interpretation::ScalarPairOnly)(x), scalar + pair, S("1e-30"));
    CHECK_CLOSE(ag_build(c, 2, eps, A2Interpretation::AllTermsWeighted)(x), scalar - S("1.5") * pair, S("1e-30"));
    CHECK_CLOSE(ag_build(c, 2, eps, A2Interpretation::ScalarPairFlipped)(x), scalar - pair, S("1e-30"));
  }
  SUBCASE("eps A_1 -> -2 at rate eps^2") {
    for (const char* es : {"1e-3", "1e-4"}) {
      const Scalar e = S(es);
      const Scalar dev = e * ag_build(c, 1, e)(x) + 2;
      CHECK_CLOSE(dev / sq(e), -2 * c.wp(x), S("1e-3"));
    }
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS_AS(ag_build(c, 0, eps), DomainError);
    CHECK_THROWS_AS(ag_build(c, 1, Scalar(0)), DomainError);
    CHECK_THROWS_AS(a2_interpretation_from_string("balanced"), DomainError);
  }
}

TEST_CASE("lame_l2") {
  const LameDiscretization disc{1, S("0.05"), S("0.73")};
  const Window w{-24, 24};
  SUBCASE("coefficients") {
    const DiffOp l = lame_l2(disc, lem(), w);
    CHECK(l.order() == 2);
    for (long n : {-24L, 0L, 24L}) {
      CHECK(l.coeff(0, n) == lem().wp(disc.eps));
      CHECK_CLOSE(l.coeff(2, n), 1 / sq(disc.eps), S("1e-30"));
      CHECK_CLOSE(l.coeff(1, n), ag_build(lem(), 1, disc.eps)(disc.x0 + n * disc.eps) / disc.eps, S("1e-28"));
    }
  }
  SUBCASE("eps^2 L_2 is monic") {
    const DiffOp m = lame_l2_monic(disc, lem(), w);
    CHECK(m.is_monic());
    CHECK(m.is_positive());
  }
  SUBCASE("x0 = 0.7 meets the lattice at n = -13") {
    const LameDiscretization hit{1, S("0.05"), S("0.7")};
    CHECK_THROWS_AS(lame_l2(hit, lem(), w), DomainError);
    CHECK_NOTHROW(lame_l2(hit, lem(), {-12, 24}));
  }
}

TEST_CASE("continuum_check") {
  const TestFunction f = cosine_test_function();
  SUBCASE("g = 1 at the coarse eps sweep") {
    const ContinuumSweep s = continuum_sweep(lem(), 1, A2Interpretation::AllTermsWeighted,
                                             eps_list({"0.1", "0.05", "0.025"}), f, S("0.7"));
    CHECK(s.errors[1] < s.errors[0]);
    CHECK(s.errors[2] < s.errors[1]);
    CHECK(s.slope >= 0.8);
    CHECK(s.slope <= 2.2);
  }
  SUBCASE("f = 0 gives 0") {
    const TestFunction zero{[](const Scalar&) { return Scalar(0); }, [](const Scalar&) { return Scalar(0); }};
    CHECK(continuum_check({1, S("0.1"), S("0.7")}, lem(), zero, S("0.7")) == 0);
  }
  SUBCASE("g = 2 selects a single A_2 reading") {
    const A2Selection sel = select_a2_interpretation(lem(), eps_list({"0.01", "0.005", "0.0025"}), S("0.7"));
    REQUIRE(sel.selected);
    CHECK(*sel.selected == A2Interpretation::AllTermsWeighted);
    for (const auto& [a, slope] : sel.slopes) {
      CAPTURE(to_string(a));
      CHECK((a == A2Interpretation::AllTermsWeighted) == (slope >= 0.8));
    }
  }
  SUBCASE("g = 3 converges") {
    const ContinuumSweep s = continuum_sweep(lem(), 3, A2Interpretation::AllTermsWeighted,
                                             eps_list({"0.01", "0.005", "0.0025"}), f, S("0.7"));
    CHECK(s.slope >= 0.8);
  }
}

TEST_CASE("lame_curve_independence") {
  const LameIndependenceReport r = lame_curve_independence(lem(), eps_list({"0.1", "0.05"}), S("0.73"));
  REQUIRE(r.per_eps.size() == 2);
  for (const auto& e : r.per_eps) {
    CAPTURE(to_short(e.eps));
    CHECK_LE_S(e.newton_residual, S("1e-8"));
    CHECK_LE_S(e.commutator_residual, S("1e-7"));
    CHECK(e.newton_iterations <= 80);
    CHECK(e.newton_trace.back() <= e.newton_trace.front());
  }
  CHECK_LE_S(r.cross_eps_deviation, S("1e-4"));
  // z^3 - (g2/4) z - g3/4 = z^3 - z for the lemniscatic lattice.
  CHECK_LE_S(r.lame_curve_deviation, S("1e-4"));

  SUBCASE("shifting A_1 breaks commutation") {
    const Scalar shifted = lame_negative_control(lem(), S("0.1"), S("0.73"), S("0.01"));
    CHECK(shifted > 1000 * r.per_eps[0].commutator_residual);
    CHECK(shifted > S("1e-5"));
  }
}

TEST_CASE("lame_curve_independence with g3 != 0") {
  const WeierstrassContext ctx(Scalar(4), Scalar(1));
  const LameIndependenceReport r = lame_curve_independence(ctx, eps_list({"0.1", "0.05"}), S("0.73"));
  CHECK_LE_S(r.cross_eps_deviation, S("1e-4"));
  CHECK_LE_S(r.lame_curve_deviation, S("1e-4"));
  // z^3 - z - 1/4
  CHECK_CLOSE(r.per_eps[0].spectral_curve[0], S("-0.25"), S("1e-4"));
}
