#include "poscomm/families.hpp"

#include <algorithm>
#include <random>

namespace poscomm {

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Trig: return "trig";
    case FamilyKind::Poly: return "poly";
    case FamilyKind::Geom: return "geom";
    case FamilyKind::Elliptic: return "elliptic";
  }
  return "unknown";
}

FamilyKind family_kind_from_string(const std::string& name) {
  if (name == "trig") return FamilyKind::Trig;
  if (name == "poly") return FamilyKind::Poly;
  if (name == "geom") return FamilyKind::Geom;
  if (name == "elliptic") return FamilyKind::Elliptic;
  throw DomainError("unknown family '" + name + "' (expected trig, poly, geom or elliptic)");
}

Scalar FamilySpec::param(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) {
    throw DomainError("family " + to_string(kind) + " needs parameter '" + name + "'");
  }
  return it->second;
}

Scalar FamilySpec::param_or(const std::string& name, const Scalar& fallback) const {
  auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

void FamilySpec::validate() const {
  if (g < 1) throw DomainError("genus must be >= 1, got " + std::to_string(g));
  switch (kind) {
    case FamilyKind::Trig:
      if (param("r1") == 0) throw DomainError("trig family requires r1 != 0");
      break;
    case FamilyKind::Poly:
      if (param("a2") == 0) throw DomainError("poly family requires a2 != 0");
      param("a0");
      break;
    case FamilyKind::Geom: {
      if (param("beta") == 0) throw DomainError("geom family requires beta != 0");
      const Scalar a = param("a");
      if (a == 0 || abs(a) == 1) throw DomainError("geom family requires a not in {0, 1, -1}");
      const Scalar s = param_or("w_sign", Scalar(0));
      if (s != 0 && abs(s) != 1) throw DomainError("w_sign must be +1, -1 or 0 (resolve)");
      break;
    }
    case FamilyKind::Elliptic:
      if (g != 1) throw DomainError("elliptic family has genus 1");
      param("c2"), param("c1"), param("c0");
      if (!sigma.empty() && sigma.size() != gamma.size()) {
        throw DomainError("sigma must have one sign per gamma value");
      }
      break;
  }
}

L2Coefficients trig_family(int g, const Scalar& r1, Window window) {
  if (g < 1) throw DomainError("trig family: genus must be >= 1");
  if (r1 == 0) throw DomainError("trig family requires r1 != 0");
  const Scalar gs(g);
  const Scalar half("0.5");
  const Scalar amp = sq(r1) * sin(gs) * sin(gs + 1) / (2 * sq(cos(gs + half)));
  return {CoeffSeq::tabulate(window, [&](long n) { return Scalar(r1 * cos(Scalar(n))); }),
          CoeffSeq::tabulate(window, [&](long n) { return Scalar(amp * cos(Scalar(2 * n))); })};
}

L2Coefficients poly_family(int g, const Scalar& a2, const Scalar& a0, const Scalar& a1,
                           Window window) {
  if (g < 1) throw DomainError("poly family: genus must be >= 1");
  if (a2 == 0) throw DomainError("poly family requires a2 != 0");
  const Scalar k(g * (g + 1));
  return {CoeffSeq::tabulate(window,
                             [&](long n) {
                               const Scalar sn(n);
                               return Scalar(a2 * sn * sn + a1 * sn + a0);
                             }),
          CoeffSeq::tabulate(window, [&](long n) {
            const Scalar sn(n);
            return Scalar(-k * a2 * sn * (a2 * sn + a1));
          })};
}

L2Coefficients geom_family(int g, const Scalar& beta, const Scalar& a, int w_sign, Window window) {
  if (g < 1) throw DomainError("geom family: genus must be >= 1");
  if (beta == 0) throw DomainError("geom family requires beta != 0");
  if (a == 0 || abs(a) == 1) throw DomainError("geom family requires a not in {0, 1, -1}");
  if (w_sign != 1 && w_sign != -1) throw DomainError("geom family: w_sign must be +1 or -1");
  const Scalar den = pow(a, 2 * g + 1) + 1;
  if (abs(den) <= epsilon() * 16) throw DegenerateError("geom family: a^(2g+1) = -1");
  const Scalar num = pow(a, 2 * g) + pow(a, 2 * g + 2) - pow(a, 4 * g + 2) - 1;
  const Scalar amp = Scalar(w_sign) * num / sq(den) * sq(beta);
  return {CoeffSeq::tabulate(window, [&](long n) { return Scalar(beta * pow(a, Scalar(n))); }),
          CoeffSeq::tabulate(window, [&](long n) { return Scalar(amp * pow(a, Scalar(2 * n))); })};
}

long family_padding(int g) { return 2L * g + 4; }

AnsatzBasis family_basis(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::Trig: return AnsatzBasis(BasisKind::OddCosines, spec.g);
    case FamilyKind::Poly:
      return spec.param_or("a1", Scalar(0)) == 0 ? AnsatzBasis(BasisKind::EvenPowers, spec.g)
                                                 : AnsatzBasis(BasisKind::Powers, spec.g);
    case FamilyKind::Geom: return AnsatzBasis(BasisKind::OddGeometric, spec.g, spec.param("a"));
    case FamilyKind::Elliptic: break;
  }
  throw DomainError("the elliptic family has closed-form dressing data; no ansatz basis");
}

L2Coefficients family_coefficients(const FamilySpec& spec, Window window, int geom_sign) {
  switch (spec.kind) {
    case FamilyKind::Trig: return trig_family(spec.g, spec.param("r1"), window);
    case FamilyKind::Poly:
      return poly_family(spec.g, spec.param("a2"), spec.param("a0"), spec.param_or("a1", Scalar(0)),
                         window);
    case FamilyKind::Geom:
      return geom_family(spec.g, spec.param("beta"), spec.param("a"), geom_sign, window);
    case FamilyKind::Elliptic: break;
  }
  throw DomainError("family_coefficients: use elliptic_family for the elliptic family");
}

namespace {

Scalar sqrt_f(const HyperellipticCurve& curve, const Scalar& x, long n) {
  const Scalar f = curve.eval(x);
  if (f < 0) {
    throw DomainError("F(gamma_" + std::to_string(n) + ") = " + to_short(f) +
                      " < 0: no real branch of the square root");
  }
  return sqrt(f);
}

// Relative commutator residual of L_2 with its partner on the largest window both cover.
Scalar partner_commutator(const DiffOp& l2, const DiffOp& partner) {
  const DiffOp c = op_commutator(l2, partner);
  const Scalar scale = commutator_scale(l2, partner);
  return scale == 0 ? op_residual_norm(c) : op_residual_norm(c) / scale;
}

}  // namespace

EllipticFamily elliptic_family(const Scalar& c2, const Scalar& c1, const Scalar& c0,
                               const CoeffSeq& gamma, const std::vector<int>& sigma) {
  const Window gw = gamma.window();
  if (!sigma.empty() && static_cast<long>(sigma.size()) != gw.size()) {
    throw DomainError("elliptic family: sigma has " + std::to_string(sigma.size()) +
                      " entries for gamma window " + gw.str());
  }
  if (gw.size() < 4) throw WindowError("elliptic family: gamma window " + gw.str() + " too short");
  HyperellipticCurve curve(1, {c0, c1, c2});
  auto sg = [&](long n) {
    const int s = sigma.empty() ? 1 : sigma[static_cast<size_t>(n - gw.lo)];
    if (s != 1 && s != -1) throw DomainError("elliptic family: branch signs must be +1 or -1");
    return Scalar(s);
  };
  const CoeffSeq root = CoeffSeq::tabulate(gw, [&](long n) { return sg(n) * sqrt_f(curve, gamma(n), n); });

  const Window uw{gw.lo, gw.hi - 1};
  const CoeffSeq u = CoeffSeq::tabulate(uw, [&](long n) {
    const Scalar d = gamma(n) - gamma(n + 1);
    const Scalar mag = std::max(Scalar(abs(gamma(n))), Scalar(abs(gamma(n + 1))));
    if (d == 0 || abs(d) <= degeneracy_threshold() * mag) {
      throw DegenerateError("elliptic family: gamma_" + std::to_string(n) + " = gamma_" +
                            std::to_string(n + 1));
    }
    return Scalar(-(root(n) + root(n + 1)) / d);
  });
  const CoeffSeq w =
      CoeffSeq::tabulate(uw, [&](long n) { return Scalar(-c2 - gamma(n) - gamma(n + 1)); });

  std::vector<ZPoly> s, q;
  for (long n = uw.lo; n <= uw.hi; ++n) {
    s.push_back(ZPoly({u(n) * gamma(n) + root(n), -u(n)}));
    q.push_back(ZPoly({-gamma(n), Scalar(1)}));
  }
  DressingState state(u, w, curve, PolySeq(uw, std::move(s)), PolySeq(uw, std::move(q)));

  const Window lw{gw.lo, gw.hi - 3};
  const DiffOp l3(lw, {{3, CoeffSeq::constant(lw, Scalar(1))},
                       {2, CoeffSeq::tabulate(lw, [&](long n) { return u(n) + u(n + 1) + u(n + 2); })},
                       {1, CoeffSeq::tabulate(lw,
                                              [&](long n) {
                                                return sq(u(n)) + sq(u(n + 1)) + u(n) * u(n + 1) +
                                                       w(n) - gamma(n + 2);
                                              })},
                       {0, CoeffSeq::tabulate(lw, [&](long n) {
                          return -root(n) + u(n) * (sq(u(n)) + w(n) - gamma(n));
                        })}});
  return {{u, w}, curve, std::move(state), l3};
}

GeomSignResolution resolve_geom_sign(int g, const Scalar& beta, const Scalar& a,
                                     const Scalar& tolerance) {
  const AnsatzBasis basis(BasisKind::OddGeometric, g, a);
  const long m = ansatz_grid_half_width(basis);
  const Window win{-m - 1, m + 2};
  GeomSignResolution out;
  Scalar best(0);
  for (int sign : {1, -1}) {
    std::optional<Scalar> residual;
    try {
      const L2Coefficients c = geom_family(g, beta, a, sign, win);
      const AnsatzResult r = ansatz_solve(basis, c.u, c.w, std::nullopt, tolerance);
      const DressingState st = r.state(c.u, c.w, win);
      const DiffOp l2 = make_l2(c.u, c.w);
      residual = partner_commutator(l2, build_partner_op(st, l2));
    } catch (const InconsistentDataError&) {
      // No partner of order 2g+1 for this sign.
    } catch (const DegenerateError&) {
    }
    (sign > 0 ? out.residual_plus : out.residual_minus) = residual;
    if (residual && *residual <= tolerance && (out.sign == 0 || *residual < best)) {
      out.sign = sign;
      best = *residual;
    }
  }
  if (out.sign == 0) {
    throw InconsistentDataError("geom family: neither sign of W_n yields a commuting partner");
  }
  return out;
}

FamilySolution solve_family(const FamilySpec& spec, Window window, const Scalar& tolerance) {
  spec.validate();
  if (window.empty()) throw DomainError("solve_family: empty window");
  const long pad = family_padding(spec.g);
  Window padded = window.widened(pad);

  if (spec.kind == FamilyKind::Elliptic) {
    CoeffSeq gamma;
    if (!spec.gamma.empty()) {
      gamma = CoeffSeq(Window{spec.gamma_start, spec.gamma_start + static_cast<long>(spec.gamma.size()) - 1},
                       spec.gamma);
    } else {
      const Window gw{padded.lo, padded.hi + 1};
      std::mt19937_64 rng(static_cast<uint64_t>(spec.param_or("seed", Scalar(7)).convert_to<long>()));
      const double lo = spec.param_or("gamma_lo", Scalar(2)).convert_to<double>();
      const double hi = spec.param_or("gamma_hi", Scalar(3)).convert_to<double>();
      std::uniform_real_distribution<double> dist(lo, hi);
      gamma = CoeffSeq::tabulate(gw, [&](long) { return Scalar(dist(rng)); });
    }
    EllipticFamily fam = elliptic_family(spec.param("c2"), spec.param("c1"), spec.param("c0"),
                                         gamma, spec.sigma);
    const DiffOp l2 = make_l2(fam.coeffs.u, fam.coeffs.w);
    DiffOp partner = build_partner_op(fam.state, l2);
    return {spec, fam.coeffs, fam.state, l2, std::move(partner), std::nullopt, 0};
  }

  const AnsatzBasis basis = family_basis(spec);
  const long m = ansatz_grid_half_width(basis);
  padded = Window{std::min(padded.lo, -m - 1), std::max(padded.hi, m + 2)};

  int sign = 0;
  if (spec.kind == FamilyKind::Geom) {
    sign = spec.param_or("w_sign", Scalar(0)).convert_to<int>();
    if (sign == 0) sign = resolve_geom_sign(spec.g, spec.param("beta"), spec.param("a"), tolerance).sign;
  }
  L2Coefficients coeffs = family_coefficients(spec, padded, sign == 0 ? 1 : sign);
  AnsatzResult r = ansatz_solve(basis, coeffs.u, coeffs.w, std::nullopt, tolerance);
  DressingState state = r.state(coeffs.u, coeffs.w, padded);
  const DiffOp l2 = make_l2(coeffs.u, coeffs.w);
  DiffOp partner = build_partner_op(state, l2);
  return {spec, std::move(coeffs), std::move(state), l2, std::move(partner), std::move(r), sign};
}

namespace fixtures {

namespace {

Scalar one_minus_2cos1() { return 1 - 2 * cos(Scalar(1)); }

}  // namespace

ZPoly trig_g1_a3(const Scalar& r1) {
  const Scalar s = sin(Scalar("0.5"));
  return ZPoly::constant(pow(r1, 3) * sq(s) / pow(one_minus_2cos1(), 3));
}

ZPoly trig_g1_a3_flipped(const Scalar& r1) { return -trig_g1_a3(r1); }

ZPoly trig_g1_a1(const Scalar& r1) {
  const Scalar d = sq(one_minus_2cos1());
  const Scalar c = 5 * cos(Scalar(1)) - 2 * cos(Scalar(2)) - 3;
  return ZPoly({-r1 * sq(r1) * c / (2 * d), -r1});
}

ZPoly trig_g1_q(const Scalar& r1, long n) {
  const Scalar s2 = sq(sin(Scalar("0.5")));
  const Scalar v = 2 * sq(r1) * (cos(Scalar(1 - 2 * n)) - 2 * cos(Scalar(1))) * s2 /
                   sq(one_minus_2cos1());
  return ZPoly({-v, Scalar(1)});
}

HyperellipticCurve trig_g1_curve(const Scalar& r1) {
  const Scalar d = sq(one_minus_2cos1());
  const Scalar e1 = 4 * sq(r1) * pow(sin(Scalar("0.5")), 4) / d;
  const Scalar e2 = sq(r1) * (one_minus_2cos1() + cos(Scalar(2))) / d;
  const ZPoly f = ZPoly({-e1, Scalar(1)}) * ZPoly({-e1, Scalar(1)}) * ZPoly({-e2, Scalar(1)});
  return HyperellipticCurve(1, {f.coeff(0), f.coeff(1), f.coeff(2)});
}

ZPoly poly_g1_s(const Scalar& a2, const Scalar& a0, long n) {
  const Scalar sn(n);
  const Scalar n2 = sn * sn;
  const Scalar c0 = pow(a2, 3) * n2 * n2 + a2 * (12 * a0 * a2 - 9 * sq(a2)) * n2 / 4 +
                    (8 * sq(a0) * a2 - 5 * a0 * sq(a2) + pow(a2, 3)) / 4;
  const Scalar c1 = -a2 * n2 - a0;
  return ZPoly({c0, c1});
}

ZPoly poly_g1_q_shifted(const Scalar& a2, const Scalar& a0, long n) {
  const Scalar sn(n);
  return ZPoly({-a2 * (8 * a0 + a2 * (4 * sn * (sn + 1) - 3)) / 4, Scalar(1)});
}

ZPoly poly_g1_q(const Scalar& a2, const Scalar& a0, long n) {
  return poly_g1_q_shifted(a2, a0, n - 1);
}

DiffOp poly_g1_l3(const Scalar& a2, const Scalar& a0, Window window) {
  auto t2 = [&](long n) {
    const Scalar s(n);
    return Scalar(a2 * (3 * s * s + 6 * s + 5) + 3 * a0);
  };
  auto t1 = [&](long n) {
    const Scalar s(n);
    return Scalar((a2 * (2 * s * s + 2 * s + 1) + 2 * a0) * (a2 * (6 * s * s + 6 * s - 1) + 6 * a0) / 4);
  };
  auto t0 = [&](long n) {
    const Scalar s(n);
    return Scalar((a2 * (2 * s * s - 2 * s - 1) + 2 * a0) * (a2 * (s * s - 1) + a0) *
                  (a2 * (2 * s * s + 2 * s - 1) + 2 * a0) / 4);
  };
  return DiffOp(window, {{3, CoeffSeq::constant(window, Scalar(1))},
                         {2, CoeffSeq::tabulate(window, t2)},
                         {1, CoeffSeq::tabulate(window, t1)},
                         {0, CoeffSeq::tabulate(window, t0)}});
}

HyperellipticCurve poly_g1_curve(const Scalar& a2, const Scalar& a0) {
  const ZPoly p = ZPoly({sq(a2) - 2 * a0 * a2, Scalar(1)});
  const ZPoly r = ZPoly({sq(a2) - 4 * a0 * a2, Scalar(4)});
  const ZPoly f = p * r * r / Scalar(16);
  return HyperellipticCurve(1, {f.coeff(0), f.coeff(1), f.coeff(2)});
}

ZPoly geom_g1_s(const Scalar& a, const Scalar& beta, long n) {
  const Scalar d = sq(a) - a + 1;
  return ZPoly({sq(a - 1) * pow(beta, 3) * pow(a, Scalar(3 * n + 2)) / pow(d, 3),
                -beta * pow(a, Scalar(n))});
}

ZPoly geom_g1_q(const Scalar& a, const Scalar& beta, long n) {
  const Scalar d = sq(a) - a + 1;
  return ZPoly({-sq(a - 1) * sq(beta) * pow(a, Scalar(2 * n)) / sq(d), Scalar(1)});
}

CoeffSeq geom_g1_w_flipped(const Scalar& a, const Scalar& beta, Window window) {
  const Scalar amp = -(sq(a) + pow(a, 4) - pow(a, 6) - 1) * sq(beta) / sq(pow(a, 3) + 1);
  return CoeffSeq::tabulate(window, [&](long n) { return Scalar(amp * pow(a, Scalar(2 * n))); });
}

DiffOp geom_g1_l3(const Scalar& a, const Scalar& beta, Window window) {
  const Scalar p = sq(a) + a + 1;
  const Scalar m = sq(a) - a + 1;
  return DiffOp(window,
                {{3, CoeffSeq::constant(window, Scalar(1))},
                 {2, CoeffSeq::tabulate(window, [&](long n) { return Scalar(p * beta * pow(a, Scalar(n))); })},
                 {1, CoeffSeq::tabulate(window,
                                        [&](long n) {
                                          return Scalar(p * sq(beta) * pow(a, Scalar(2 * n + 1)) / m);
                                        })},
                 {0, CoeffSeq::tabulate(window, [&](long n) {
                    return Scalar(pow(beta, 3) * pow(a, Scalar(3 * n + 3)) / pow(m, 3));
                  })}});
}

HyperellipticCurve geom_g1_curve() {
  return HyperellipticCurve(1, {Scalar(0), Scalar(0), Scalar(0)});
}

}  // namespace fixtures

}  // namespace poscomm
