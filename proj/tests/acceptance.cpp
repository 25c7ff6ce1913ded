// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "poscomm/families.hpp"
#include "poscomm/lame.hpp"
#include "poscomm/rank2.hpp"
#include "poscomm/spectral.hpp"

using namespace poscomm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [FAIL: " << what << "]";
    }
  }
};

int failures = 0;

void report(int k, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k << ": " << title << o.detail.str() << " ("
            << static_cast<int>(seconds_since(t0) * 1000) << " ms)" << std::endl;
}

const Window kWindow{-24, 24};

struct Case {
  std::string name;
  FamilySpec spec;
};

FamilySpec make_spec(FamilyKind kind, int g, std::map<std::string, Scalar> params) {
  FamilySpec s;
  s.kind = kind;
  s.g = g;
  s.params = std::move(params);
  return s;
}

std::vector<Case> rank1_cases() {
  std::vector<Case> cs;
  for (int g = 1; g <= 4; ++g) {
    cs.push_back({"trig g=" + std::to_string(g), make_spec(FamilyKind::Trig, g, {{"r1", Scalar(1)}})});
  }
  for (int g = 1; g <= 4; ++g) {
    cs.push_back({"poly g=" + std::to_string(g),
                  make_spec(FamilyKind::Poly, g, {{"a2", Scalar(1)}, {"a0", Scalar(0)}})});
  }
  for (int g = 1; g <= 4; ++g) {
    cs.push_back({"geom g=" + std::to_string(g),
                  make_spec(FamilyKind::Geom, g, {{"a", Scalar(2)}, {"beta", Scalar(1)}})});
  }
  cs.push_back({"elliptic g=1", make_spec(FamilyKind::Elliptic, 1,
                                          {{"c2", Scalar(0)},
                                           {"c1", Scalar(-1)},
                                           {"c0", Scalar(0)},
                                           {"gamma_lo", Scalar(2)},
                                           {"gamma_hi", Scalar(3)},
                                           {"seed", Scalar(7)}})});
  return cs;
}

Scalar commutator_on_window(const FamilySolution& sol, Window w) {
  return op_residual_norm(op_commutator(sol.l2, sol.partner).restricted(w)) / commutator_scale(sol.l2, sol.partner);
}

struct Identities {
  Scalar master{0}, linear{0};
};

Identities identities_on_window(const FamilySolution& sol, Window w) {
  Identities r;
  const Window mw = sol.state.master_window().intersect(w);
  const Window lw = sol.state.linear_window().intersect(w);
  if (mw != w || lw != w) throw WindowError("identities not available on all of " + w.str());
  for (long n = w.lo; n <= w.hi; ++n) {
    r.master = std::max(r.master, verify_master(sol.state, n).relative());
    r.linear = std::max(r.linear, residual_linear_norm(sol.state, n).relative());
  }
  return r;
}

Scalar rel_poly_error(const ZPoly& got, const ZPoly& expect) {
  return poly_distance(got, expect) / std::max(Scalar(1), expect.max_abs());
}

}  // namespace

int main() {
  const Scalar kTol("1e-9");
  std::cout << "precision: " << precision_bits() << " bits" << std::endl;

  // Solutions are shared by criteria 1 and 2.
  std::vector<std::pair<Case, FamilySolution>> solved;

  report(1, "rank-1 commutation, |n| <= 24, residual <= 1e-9 * scale, <= 60 s per case", [&](Outcome& o) {
    Scalar worst(0);
    double slowest = 0;
    for (const Case& c : rank1_cases()) {
      const auto t0 = Clock::now();
      try {
        FamilySolution sol = solve_family(c.spec, kWindow, kTol);
        const Scalar r = commutator_on_window(sol, kWindow);
        const double secs = seconds_since(t0);
        slowest = std::max(slowest, secs);
        worst = std::max(worst, r);
        o.require(r <= kTol, c.name + " residual " + to_short(r));
        o.require(secs <= 60, c.name + " took " + std::to_string(secs) + " s");
        solved.emplace_back(c, std::move(sol));
      } catch (const Error& e) {
        o.require(false, c.name + ": " + e.what());
      }
    }
    o.detail << " cases=" << solved.size() << " worst=" << to_short(worst) << " slowest=" << slowest << "s";
  });

  report(2, "verify_master and residual_linear <= 1e-9 * scale for every case of (1)", [&](Outcome& o) {
    Scalar wm(0), wl(0);
    o.require(solved.size() == rank1_cases().size(), "criterion 1 cases missing");
    for (const auto& [c, sol] : solved) {
      const Identities id = identities_on_window(sol, kWindow);
      wm = std::max(wm, id.master);
      wl = std::max(wl, id.linear);
      o.require(id.master <= kTol, c.name + " master " + to_short(id.master));
      o.require(id.linear <= kTol, c.name + " linear " + to_short(id.linear));
    }
    o.detail << " worst master=" << to_short(wm) << " worst linear=" << to_short(wl);
  });

  report(3, "g = 1 ansatz reproduces trig A_3, A_1 and poly/geom S_n, Q_n within 1e-10 relative", [&](Outcome& o) {
    const Scalar lim("1e-10");
    Scalar worst(0);
    auto track = [&](const Scalar& e, const std::string& what) {
      worst = std::max(worst, e);
      o.require(e <= lim, what + " " + to_short(e));
    };
    {
      const AnsatzBasis basis(BasisKind::OddCosines, 1);
      const long m = ansatz_grid_half_width(basis);
      const L2Coefficients c = trig_family(1, Scalar(1), {-m - 2, m + 3});
      const AnsatzResult r = ansatz_solve(basis, c.u, c.w);
      track(rel_poly_error(r.coefficient_for_label(3), fixtures::trig_g1_a3(Scalar(1))), "trig g = 1 A_3");
      // With (2 cos 1 - 1)^3 in place of (1 - 2 cos 1)^3 the magnitude matches, the sign does not.
      const Scalar flipped = rel_poly_error(r.coefficient_for_label(3), fixtures::trig_g1_a3_flipped(Scalar(1)));
      o.detail << " A_3 vs flipped sign: " << to_short(flipped, 3) << " (|A_3| matches)";
      track(rel_poly_error(r.coefficient_for_label(1), fixtures::trig_g1_a1(Scalar(1))), "trig g = 1 A_1");
    }
    const Window sw{-10, 10};
    {
      FamilySolution sol = solve_family(make_spec(FamilyKind::Poly, 1, {{"a2", Scalar(1)}, {"a0", Scalar(0)}}), sw);
      for (long n = sw.lo; n <= sw.hi; ++n) {
        track(rel_poly_error(sol.state.S()(n), fixtures::poly_g1_s(Scalar(1), Scalar(0), n)), "poly g = 1 S");
        if (sol.state.Q().window().contains(n)) {
          track(rel_poly_error(sol.state.Q()(n), fixtures::poly_g1_q(Scalar(1), Scalar(0), n)), "poly g = 1 Q");
        }
      }
    }
    {
      FamilySolution sol = solve_family(make_spec(FamilyKind::Geom, 1, {{"a", Scalar(2)}, {"beta", Scalar(1)}}), sw);
      for (long n = sw.lo; n <= sw.hi; ++n) {
        track(rel_poly_error(sol.state.S()(n), fixtures::geom_g1_s(Scalar(2), Scalar(1), n)), "geom g = 1 S");
        if (sol.state.Q().window().contains(n)) {
          track(rel_poly_error(sol.state.Q()(n), fixtures::geom_g1_q(Scalar(2), Scalar(1), n)), "geom g = 1 Q");
        }
      }
    }
    o.detail << " worst=" << to_short(worst);
  });

  report(4, "extracted g = 1 trig/poly/geom curves within 1e-8; trace and base independence <= 1e-8", [&](Outcome& o) {
    const Scalar lim("1e-8");
    const std::vector<long> bases{-3, 0, 3};
    struct Item {
      std::string name;
      FamilySpec spec;
      HyperellipticCurve expect;
    };
    const std::vector<Item> items{
        {"trig g = 1", make_spec(FamilyKind::Trig, 1, {{"r1", Scalar(1)}}), fixtures::trig_g1_curve(Scalar(1))},
        {"poly g = 1", make_spec(FamilyKind::Poly, 1, {{"a2", Scalar(1)}, {"a0", Scalar(0)}}),
         fixtures::poly_g1_curve(Scalar(1), Scalar(0))},
        {"geom g = 1", make_spec(FamilyKind::Geom, 1, {{"a", Scalar(2)}, {"beta", Scalar(1)}}),
         fixtures::geom_g1_curve()},
    };
    for (const Item& it : items) {
      const FamilySolution sol = solve_family(it.spec, {-16, 16});
      const CurveReport r = extract_curve(sol.l2, sol.partner, default_z_nodes(1), bases, lim);
      o.require(r.matched_curve.has_value(), it.name + " no curve");
      if (!r.matched_curve) continue;
      const Scalar d = curve_distance(*r.matched_curve, it.expect);
      o.require(d <= lim, it.name + " distance " + to_short(d));
      o.require(r.trace_norm <= lim, it.name + " trace " + to_short(r.trace_norm));
      o.require(r.base_independence_residual <= lim, it.name + " base " + to_short(r.base_independence_residual));
      o.detail << " " << it.name << ": d=" << to_short(d, 3) << " base=" << to_short(r.base_independence_residual, 3);
    }
  });

  report(5, "R_n + R_{-n-1} <= 1e-10 * scale for trig and poly", [&](Outcome& o) {
    Scalar worst(0);
    for (const auto& [c, sol] : solved) {
      if (c.spec.kind != FamilyKind::Trig && c.spec.kind != FamilyKind::Poly) continue;
      const AnsatzResult& a = *sol.ansatz;
      const Window uw = sol.coeffs.u.window();
      for (long n = 0; n <= 24; ++n) {
        if (!uw.contains(-n - 2) || !uw.contains(n + 3)) break;
        const Scalar r = skew_residual(a.basis, a.coefficients, sol.coeffs.u, sol.coeffs.w, n).relative();
        worst = std::max(worst, r);
        o.require(r <= Scalar("1e-10"), c.name + " n=" + std::to_string(n) + " " + to_short(r));
      }
    }
    o.detail << " worst=" << to_short(worst);
  });

  report(6, "poly family with a1 = 1/2 passes criterion 1 for g = 1..5 (conjecture test)", [&](Outcome& o) {
    for (int g = 1; g <= 5; ++g) {
      const auto t0 = Clock::now();
      try {
        const FamilySolution sol = solve_family(
            make_spec(FamilyKind::Poly, g, {{"a2", Scalar(1)}, {"a0", Scalar(0)}, {"a1", Scalar("0.5")}}), kWindow,
            kTol);
        const Scalar r = commutator_on_window(sol, kWindow);
        o.require(r <= kTol, "g=" + std::to_string(g) + " residual " + to_short(r));
        o.require(seconds_since(t0) <= 60, "g=" + std::to_string(g) + " too slow");
        o.detail << " g" << g << "=" << to_short(r, 2);
      } catch (const Error& e) {
        o.require(false, "g=" + std::to_string(g) + " finding: " + e.what());
      }
    }
  });

  report(7, "rank 2: [L4, L6] <= 1e-10 * scale; char poly = (w^2 - R(z))^2 within 1e-7", [&](Outcome& o) {
    const Rank2Report r = verify_rank2();
    o.require(r.commutator_residual <= Scalar("1e-10"), "commutator " + to_short(r.commutator_residual));
    o.require(r.curve.max_mismatch <= Scalar("1e-7"), "mismatch " + to_short(r.curve.max_mismatch));
    o.require(r.z0_mismatch <= Scalar("1e-7"), "z=0 mismatch " + to_short(r.z0_mismatch));
    o.detail << " commutator=" << to_short(r.commutator_residual) << " mismatch=" << to_short(r.curve.max_mismatch)
             << " R(1)=" << to_short(r.r_at_1);
  });

  report(8, "Lame continuum slopes >= 0.8 for g = 1, 2, 3 (lemniscatic), <= 120 s", [&](Outcome& o) {
    const auto t0 = Clock::now();
    const WeierstrassContext ctx = WeierstrassContext::lemniscatic();
    const std::vector<Scalar> eps{Scalar("0.01"), Scalar("0.005"), Scalar("0.0025")};
    const Scalar x("0.7");
    const A2Selection sel = select_a2_interpretation(ctx, eps, x);
    o.require(sel.selected.has_value(), "no unique A_2 reading");
    for (int g = 1; g <= 3; ++g) {
      const A2Interpretation a2 = sel.selected.value_or(A2Interpretation::AllTermsWeighted);
      const ContinuumSweep s = continuum_sweep(ctx, g, a2, eps, cosine_test_function(), x);
      o.require(s.slope >= 0.8, "g=" + std::to_string(g) + " slope " + std::to_string(s.slope));
      o.detail << " g" << g << "=" << s.slope;
    }
    if (sel.selected) o.detail << " A2=" << to_string(*sel.selected);
    o.require(seconds_since(t0) <= 120, "runtime");
  });

  report(9, "Lame g=1 eps-independence <= 1e-4 for eps in {0.1, 0.05}; Newton residual <= 1e-8", [&](Outcome& o) {
    const WeierstrassContext ctx = WeierstrassContext::lemniscatic();
    const LameIndependenceReport r =
        lame_curve_independence(ctx, {Scalar("0.1"), Scalar("0.05")}, Scalar("0.73"));
    o.require(r.cross_eps_deviation <= Scalar("1e-4"), "cross-eps " + to_short(r.cross_eps_deviation));
    for (const auto& e : r.per_eps) {
      o.require(e.newton_residual <= Scalar("1e-8"), "Newton at eps=" + to_short(e.eps));
      o.detail << " eps=" << to_short(e.eps) << ": newton=" << to_short(e.newton_residual, 2) << " ("
               << e.newton_iterations << " it)";
    }
    o.detail << " cross=" << to_short(r.cross_eps_deviation);
  });

  report(10, "property suites: antisymmetry exact, Jacobi <= 1e-12, round trips, zeta' = -wp, <= 30 s", [&](Outcome& o) {
    const auto t0 = Clock::now();
    std::mt19937_64 eng(2024);
    std::uniform_real_distribution<double> u(-2, 2);
    const Window w{-10, 10};
    auto rand_op = [&](int top) {
      std::map<int, CoeffSeq> terms;
      for (int j = 0; j <= top; ++j) terms.emplace(j, CoeffSeq::tabulate(w, [&](long) { return Scalar(u(eng)); }));
      return DiffOp(w, std::move(terms));
    };
    auto rand_poly = [&](int deg) {
      std::vector<Scalar> c;
      for (int k = 0; k <= deg; ++k) c.push_back(Scalar(u(eng)));
      return ZPoly(std::move(c));
    };
    Scalar jacobi(0), antisym(0), divide(0), interp(0), zeta_fd(0);
    for (int t = 0; t < 20; ++t) {
      const DiffOp a = rand_op(2), b = rand_op(2), c = rand_op(1);
      antisym = std::max(antisym, op_residual_norm(op_commutator(a, b) + op_commutator(b, a)));
      const DiffOp j = op_commutator(a, op_commutator(b, c)) + op_commutator(b, op_commutator(c, a)) +
                       op_commutator(c, op_commutator(a, b));
      jacobi = std::max(jacobi, op_residual_norm(j) / (a.sup_norm() * b.sup_norm() * c.sup_norm()));

      const ZPoly p = rand_poly(3), d = rand_poly(2) + ZPoly::monomial(2, Scalar(3));
      const auto r = poly_div_exact(p * d, d);
      divide = std::max(divide, poly_distance(r.quotient, p));
      std::vector<Sample> s;
      for (const auto& z : chebyshev_nodes(7, Scalar(-4), Scalar(4))) s.push_back({z, poly_eval(p, z)});
      interp = std::max(interp, poly_distance(poly_interpolate(s, 3, Scalar("1e-20")).poly, p));
    }
    const WeierstrassContext ctx = WeierstrassContext::lemniscatic();
    const Scalar h("1e-10");
    for (const char* xs : {"0.15", "0.5", "0.73", "1.2", "2.0", "3.3"}) {
      const Scalar x(xs);
      const Scalar fd = (ctx.zeta(x + h) - ctx.zeta(x - h)) / (2 * h);
      zeta_fd = std::max(zeta_fd, abs(fd + ctx.wp(x)) / std::max(Scalar(1), abs(ctx.wp(x))));
    }
    o.require(antisym == 0, "antisymmetry " + to_short(antisym));
    o.require(jacobi <= Scalar("1e-12"), "Jacobi " + to_short(jacobi));
    o.require(divide <= Scalar("1e-25"), "division " + to_short(divide));
    o.require(interp <= Scalar("1e-20"), "interpolation " + to_short(interp));
    o.require(zeta_fd <= Scalar("1e-8"), "zeta' + wp " + to_short(zeta_fd));
    o.require(seconds_since(t0) <= 30, "runtime");
    o.detail << " Jacobi=" << to_short(jacobi, 2) << " zeta'+wp=" << to_short(zeta_fd, 2);
  });

  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
