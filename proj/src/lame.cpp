#include "poscomm/lame.hpp"

#include <cmath>

#include "poscomm/families.hpp"
#include "poscomm/linalg.hpp"

namespace poscomm {

std::string to_string(A2Interpretation a) {
  switch (a) {
    case A2Interpretation::ScalarPairOnly: return "scalar-pair-only";
    case A2Interpretation::AllTermsWeighted: return "all-terms-weighted";
    case A2Interpretation::ScalarPairFlipped: return "scalar-pair-flipped";
  }
  return "unknown";
}

A2Interpretation a2_interpretation_from_string(const std::string& name) {
  for (auto a : all_a2_interpretations()) {
    if (to_string(a) == name) return a;
  }
  throw DomainError("unknown A_2 interpretation '" + name +
                    "' (expected scalar-pair-only, all-terms-weighted or scalar-pair-flipped)");
}

std::vector<A2Interpretation> all_a2_interpretations() {
  return {A2Interpretation::ScalarPairOnly, A2Interpretation::AllTermsWeighted,
          A2Interpretation::ScalarPairFlipped};
}

std::function<Scalar(const Scalar&)> ag_build(const WeierstrassContext& ctx, int g,
                                              const Scalar& eps, A2Interpretation a2) {
  if (g < 1) throw DomainError("ag_build: genus must be >= 1");
  if (!(eps > 0)) throw DomainError("ag_build: eps must be positive");
  const Scalar ze = ctx.zeta(eps);
  const Scalar z3 = ctx.zeta(3 * eps);
  // Denominators of the product factors depend on eps only.
  std::vector<Scalar> den;
  const int g1 = g / 2;
  if (g % 2 == 1) {
    for (int k = 1; k <= g1; ++k) den.push_back(ze + ctx.zeta(Scalar(4 * k + 1) * eps));
  } else {
    for (int k = 2; k <= g1; ++k) den.push_back(ze + ctx.zeta(Scalar(4 * k - 1) * eps));
  }
  return [&ctx, g, g1, eps, ze, z3, a2, den](const Scalar& x) {
    Scalar base;
    Scalar prod(1);
    if (g % 2 == 1) {
      base = -2 * ze - ctx.zeta(x - eps) + ctx.zeta(x + eps);
      for (int k = 1; k <= g1; ++k) {
        const Scalar s = Scalar(2 * k + 1) * eps;
        prod *= 1 + (ctx.zeta(x - s) - ctx.zeta(x + s)) / den[static_cast<size_t>(k - 1)];
      }
    } else {
      const Scalar pair = ctx.zeta(x - 2 * eps) - ctx.zeta(x + 2 * eps);
      const Scalar c = Scalar(-3) / 2;
      switch (a2) {
        case A2Interpretation::ScalarPairOnly: base = c * (ze + z3) + pair; break;
        case A2Interpretation::AllTermsWeighted: base = c * (ze + z3 + pair); break;
        case A2Interpretation::ScalarPairFlipped: base = c * (ze + z3) - pair; break;
      }
      for (int k = 2; k <= g1; ++k) {
        const Scalar s = Scalar(2 * k) * eps;
        prod *= 1 + (ctx.zeta(x - s) - ctx.zeta(x + s)) / den[static_cast<size_t>(k - 2)];
      }
    }
    return checked(base * prod, "A_g");
  };
}

namespace {

Scalar lattice_x(const LameDiscretization& d, long n) { return d.x0 + Scalar(n) * d.eps; }

DiffOp monic_l2(const LameDiscretization& disc, const WeierstrassContext& ctx, Window window,
                const Scalar& a_shift) {
  const auto a = ag_build(ctx, disc.g, disc.eps, disc.a2);
  const Scalar c0 = sq(disc.eps) * ctx.wp(disc.eps);
  return DiffOp(window, {{2, CoeffSeq::constant(window, Scalar(1))},
                         {1, CoeffSeq::tabulate(window,
                                                [&](long n) {
                                                  return Scalar(disc.eps * (a(lattice_x(disc, n)) + a_shift));
                                                })},
                         {0, CoeffSeq::constant(window, c0)}});
}

}  // namespace

DiffOp lame_l2(const LameDiscretization& disc, const WeierstrassContext& ctx, Window window) {
  const auto a = ag_build(ctx, disc.g, disc.eps, disc.a2);
  return DiffOp(window, {{2, CoeffSeq::constant(window, 1 / sq(disc.eps))},
                         {1, CoeffSeq::tabulate(window,
                                                [&](long n) {
                                                  return Scalar(a(lattice_x(disc, n)) / disc.eps);
                                                })},
                         {0, CoeffSeq::constant(window, ctx.wp(disc.eps))}});
}

DiffOp lame_l2_monic(const LameDiscretization& disc, const WeierstrassContext& ctx, Window window) {
  return monic_l2(disc, ctx, window, Scalar(0));
}

TestFunction cosine_test_function() {
  return {[](const Scalar& x) { return Scalar(cos(x)); }, [](const Scalar& x) { return Scalar(-cos(x)); }};
}

Scalar continuum_check(const LameDiscretization& disc, const WeierstrassContext& ctx,
                       const TestFunction& f, const Scalar& x) {
  const Scalar& e = disc.eps;
  const auto a = ag_build(ctx, disc.g, e, disc.a2);
  const Scalar l2f = f.f(x + 2 * e) / sq(e) + a(x) * f.f(x + e) / e + ctx.wp(e) * f.f(x);
  const Scalar target = f.f2(x) - Scalar(disc.g * (disc.g + 1)) * ctx.wp(x) * f.f(x);
  return abs(l2f - target);
}

ContinuumSweep continuum_sweep(const WeierstrassContext& ctx, int g, A2Interpretation a2,
                               const std::vector<Scalar>& eps_list, const TestFunction& f,
                               const Scalar& x) {
  if (eps_list.size() < 2) throw DomainError("continuum_sweep: need at least two eps values");
  ContinuumSweep out;
  std::vector<double> lx, ly;
  for (const auto& e : eps_list) {
    const Scalar err = continuum_check(LameDiscretization{g, e, x, a2}, ctx, f, x);
    out.eps.push_back(e);
    out.errors.push_back(err);
    if (err > 0) {
      lx.push_back(std::log(e.convert_to<double>()));
      ly.push_back(std::log(err.convert_to<double>()));
    }
  }
  if (lx.size() < 2) {
    out.slope = std::numeric_limits<double>::infinity();  // exact at every eps
    return out;
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(ly.size());
  double sxy = 0, sxx = 0;
  for (size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  out.slope = sxy / sxx;
  return out;
}

A2Selection select_a2_interpretation(const WeierstrassContext& ctx,
                                     const std::vector<Scalar>& eps_list, const Scalar& x,
                                     double min_slope) {
  A2Selection sel;
  int passing = 0;
  for (auto a : all_a2_interpretations()) {
    const double s = continuum_sweep(ctx, 2, a, eps_list, cosine_test_function(), x).slope;
    sel.slopes.emplace_back(a, s);
    if (s >= min_slope) {
      ++passing;
      sel.selected = a;
    }
  }
  if (passing != 1) sel.selected.reset();
  return sel;
}

namespace {

struct Point {
  Scalar z, w;
};

Point chord_add(const Point& p, const Point& q, const Scalar& c2) {
  const Scalar dz = q.z - p.z;
  if (abs(dz) <= degeneracy_threshold() * std::max(Scalar(abs(p.z)), Scalar(abs(q.z)))) {
    throw DegenerateError("curve addition with equal abscissae");
  }
  const Scalar lambda = (q.w - p.w) / dz;
  const Scalar z3 = sq(lambda) - c2 - p.z - q.z;
  return {z3, -(p.w + lambda * (z3 - p.z))};
}

// Unknowns in the unscaled spectral parameter: (C2, C1, C0, G0).
struct Fit {
  const Scalar& eps;
  Scalar b;                   // eps^2 p(eps)
  std::vector<Scalar> a;      // eps A_1(x_n) on [lo, hi]
  long lo;
  int sigma0;
  int step;

  Scalar e2() const { return sq(eps); }

  // gamma_n, w_n on [from, to] for monic curve coefficients.
  std::vector<Point> points(const Vector& v, long from, long to) const {
    const Scalar c2 = e2() * v(0), c1 = sq(e2()) * v(1), c0 = pow(e2(), 3) * v(2);
    auto f = [&](const Scalar& t) { return ((t + c2) * t + c1) * t + c0; };
    const Scalar g0 = e2() * v(3);
    const Scalar f0 = f(g0), fb = f(b);
    if (f0 < 0 || fb < 0) throw DomainError("branch point: F < 0 on the recovered data");
    const Point p0{g0, Scalar(sigma0) * sqrt(f0)};
    const Point r{b, Scalar(step) * sqrt(fb)};
    const Point rm{b, -r.w};
    std::vector<Point> pts(static_cast<size_t>(to - from + 1));
    pts[static_cast<size_t>(0 - from)] = p0;
    for (long n = 0; n < to; ++n) {
      pts[static_cast<size_t>(n + 1 - from)] = chord_add(pts[static_cast<size_t>(n - from)], r, c2);
    }
    for (long n = 0; n > from; --n) {
      pts[static_cast<size_t>(n - 1 - from)] = chord_add(pts[static_cast<size_t>(n - from)], rm, c2);
    }
    return pts;
  }

  static Scalar u_of(const Point& p, const Point& q) {
    const Scalar d = p.z - q.z;
    if (d == 0) throw DegenerateError("gamma_n = gamma_{n+1}");
    return -(p.w + q.w) / d;
  }

  Vector residuals(const Vector& v, Window fit) const {
    const auto pts = points(v, std::min(fit.lo, 0L), std::max(fit.hi + 2, 0L));
    const long base = std::min(fit.lo, 0L);
    Vector r(fit.size());
    for (long n = fit.lo; n <= fit.hi; ++n) {
      const Scalar u0 = u_of(pts[static_cast<size_t>(n - base)], pts[static_cast<size_t>(n + 1 - base)]);
      const Scalar u1 = u_of(pts[static_cast<size_t>(n + 1 - base)], pts[static_cast<size_t>(n + 2 - base)]);
      r(n - fit.lo) = a[static_cast<size_t>(n - lo)] - u0 - u1;
    }
    return r;
  }
};

Scalar max_abs(const Vector& v) {
  Scalar m(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, Scalar(abs(v(i))));
  return m;
}

struct NewtonOutcome {
  Vector v;
  Scalar residual;
  int iterations = 0;
  std::vector<Scalar> trace;
};

NewtonOutcome gauss_newton(const Fit& fit, Vector v, Window window, int max_iter) {
  NewtonOutcome out;
  Vector r = fit.residuals(v, window);
  Scalar norm = max_abs(r);
  out.trace.push_back(norm);
  const Scalar floor = pow(epsilon(), Scalar("0.85"));
  const Scalar h0 = cbrt(epsilon());
  for (int it = 0; it < max_iter && norm > floor; ++it) {
    Matrix j(r.size(), v.size());
    for (Eigen::Index c = 0; c < v.size(); ++c) {
      const Scalar h = h0 * std::max(Scalar(1), Scalar(abs(v(c))));
      Vector vp = v, vm = v;
      vp(c) += h;
      vm(c) -= h;
      j.col(c) = (fit.residuals(vp, window) - fit.residuals(vm, window)) / (2 * h);
    }
    const Vector dx = least_squares(j, Vector(-r)).x;
    Scalar t(1);
    bool accepted = false;
    while (t > Scalar("1e-8")) {
      try {
        const Vector trial = v + t * dx;
        const Vector rt = fit.residuals(trial, window);
        const Scalar nt = max_abs(rt);
        if (nt < norm) {
          v = trial;
          r = rt;
          norm = nt;
          accepted = true;
          break;
        }
      } catch (const DomainError&) {
      } catch (const DegenerateError&) {
      }
      t /= 2;
    }
    out.iterations = it + 1;
    out.trace.push_back(norm);
    if (!accepted) break;
  }
  out.v = v;
  out.residual = norm;
  return out;
}

std::string trace_string(const std::vector<Scalar>& trace) {
  std::string s;
  for (const auto& t : trace) s += (s.empty() ? "" : ", ") + to_short(t, 3);
  return s;
}

struct Recovery {
  LameEpsResult result;
  DiffOp l2;
  DiffOp l3;
};

Recovery recover(const WeierstrassContext& ctx, const Scalar& eps, const Scalar& x0,
                 const LameIndependenceOptions& opts, const Scalar& a1_shift) {
  const LameDiscretization disc{1, eps, x0, A2Interpretation::AllTermsWeighted};
  const Window win = opts.window;
  if (!win.covers(Window{opts.fit.lo, opts.fit.hi + 1})) {
    throw DomainError("lame recovery: fit window " + opts.fit.str() + " must lie inside " + win.str());
  }
  const DiffOp l2 = monic_l2(disc, ctx, win, a1_shift);
  Fit fit{eps, sq(eps) * ctx.wp(eps), {}, win.lo, 1, 1};
  for (long n = win.lo; n <= win.hi; ++n) fit.a.push_back(l2.coeff(1, n));

  // Start from the continuous Lame curve and the unshifted lattice point.
  Vector v0(4);
  v0 << Scalar(0), -ctx.g2() / 4, -ctx.g3() / 4, ctx.wp(x0);

  std::optional<NewtonOutcome> best;
  int best_sigma = 1, best_step = 1;
  std::string failures;
  for (int sigma : {1, -1}) {
    for (int step : {1, -1}) {
      Fit f = fit;
      f.sigma0 = sigma;
      f.step = step;
      try {
        NewtonOutcome o = gauss_newton(f, v0, opts.fit, opts.max_iterations);
        if (!best || o.residual < best->residual) {
          best = std::move(o);
          best_sigma = sigma;
          best_step = step;
        }
      } catch (const Error& e) {
        failures += std::string(failures.empty() ? "" : "; ") + e.what();
      }
    }
  }
  if (!best || best->residual > opts.newton_target) {
    throw ConvergenceError("lame recovery at eps = " + to_short(eps) +
                           " did not converge; residual trace: " +
                           (best ? trace_string(best->trace) : std::string("none")) +
                           (failures.empty() ? "" : " (" + failures + ")"));
  }

  fit.sigma0 = best_sigma;
  fit.step = best_step;
  const Window gw{win.lo, win.hi + 3};
  const auto pts = fit.points(best->v, std::min(gw.lo, 0L), std::max(gw.hi, 0L));
  const long base = std::min(gw.lo, 0L);
  std::vector<Scalar> gamma;
  std::vector<int> sigma;
  for (long n = gw.lo; n <= gw.hi; ++n) {
    const Point& p = pts[static_cast<size_t>(n - base)];
    gamma.push_back(p.z);
    sigma.push_back(p.w < 0 ? -1 : 1);
  }
  const Scalar e2 = sq(eps);
  const Vector& v = best->v;
  EllipticFamily fam = elliptic_family(e2 * v(0), sq(e2) * v(1), pow(e2, 3) * v(2),
                                       CoeffSeq(gw, gamma), sigma);

  Recovery rec{{}, l2, fam.l3};
  LameEpsResult& r = rec.result;
  r.eps = eps;
  r.newton_curve = {v(2), v(1), v(0)};
  r.gamma0 = v(3);
  r.sigma0 = best_sigma;
  r.step_branch = best_step;
  r.newton_iterations = best->iterations;
  r.newton_trace = best->trace;
  r.newton_residual = best->residual;
  r.window_fit_residual = 0;
  const CoeffSeq& u = fam.coeffs.u;
  for (long n = win.lo; n <= win.hi && n + 1 <= u.window().hi; ++n) {
    r.window_fit_residual = std::max(r.window_fit_residual, Scalar(abs(l2.coeff(1, n) - u(n) - u(n + 1))));
  }
  r.commutator_residual = relative_commutator(l2, fam.l3);
  return rec;
}

}  // namespace

LameEpsResult lame_recover(const WeierstrassContext& ctx, const Scalar& eps, const Scalar& x0,
                           const LameIndependenceOptions& opts, const Scalar& a1_shift) {
  return recover(ctx, eps, x0, opts, a1_shift).result;
}

Scalar lame_negative_control(const WeierstrassContext& ctx, const Scalar& eps, const Scalar& x0,
                             const Scalar& a1_shift, const LameIndependenceOptions& opts) {
  const Recovery rec = recover(ctx, eps, x0, opts, Scalar(0));
  const LameDiscretization disc{1, eps, x0, A2Interpretation::AllTermsWeighted};
  return relative_commutator(monic_l2(disc, ctx, opts.window, a1_shift), rec.l3);
}

LameIndependenceReport lame_curve_independence(const WeierstrassContext& ctx,
                                               const std::vector<Scalar>& eps_list,
                                               const Scalar& x0,
                                               const LameIndependenceOptions& opts) {
  if (eps_list.empty()) throw DomainError("lame_curve_independence: empty eps list");
  LameIndependenceReport rep;
  rep.cross_eps_deviation = 0;
  rep.lame_curve_deviation = 0;
  const std::vector<Scalar> lame{-ctx.g3() / 4, -ctx.g2() / 4, Scalar(0)};
  for (const auto& eps : eps_list) {
    Recovery rec = recover(ctx, eps, x0, opts, Scalar(0));
    LameEpsResult& r = rec.result;
    if (r.commutator_residual > opts.tolerance) {
      throw InconsistentDataError("lame: eps^2 L_2 and the recovered L_3 do not commute at eps = " +
                                  to_short(eps) + " (relative residual " +
                                  to_short(r.commutator_residual) + ")");
    }
    const Scalar e2 = sq(eps);
    r.spectral = extract_curve(rec.l2, rec.l3, default_z_nodes(1, e2), opts.base_points, opts.tolerance);
    if (!r.spectral.matched_curve) {
      throw InconsistentDataError("lame: no hyperelliptic curve matched at eps = " + to_short(eps));
    }
    const auto& c = r.spectral.matched_curve->c();
    r.spectral_curve = {c[0] / pow(e2, 3), c[1] / sq(e2), c[2] / e2};
    for (size_t k = 0; k < 3; ++k) {
      rep.lame_curve_deviation = std::max(rep.lame_curve_deviation, Scalar(abs(r.spectral_curve[k] - lame[k])));
    }
    for (const auto& prev : rep.per_eps) {
      for (size_t k = 0; k < 3; ++k) {
        rep.cross_eps_deviation = std::max(rep.cross_eps_deviation,
                                           Scalar(abs(r.spectral_curve[k] - prev.spectral_curve[k])));
      }
    }
    rep.per_eps.push_back(std::move(r));
  }
  return rep;
}

}  // namespace poscomm
