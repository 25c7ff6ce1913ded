#include "poscomm/rank2.hpp"

namespace poscomm {

DiffOp build_l4(const Rank2Params& p, Window window) {
  const Scalar &a2 = p.a2, &a1 = p.a1, &a0 = p.a0;
  auto t3 = [&](long k) {
    const Scalar n(k);
    return Scalar(a2 * n * n + a1 * n + a0);
  };
  auto t2 = [&](long k) {
    const Scalar n(k);
    return Scalar(Scalar(3) / 8 * (a1 + a2 * (n - 1)) * n *
                  (2 * a0 + a1 * (n - 1) + a2 * (n * n - n - 2)));
  };
  auto t1 = [&](long k) {
    const Scalar n(k);
    const Scalar f = a0 + a1 * (n - 1) + a2 * (n - 2) * n;
    const Scalar g = 2 * sq(a0) - sq(a1) * (n - 2) * n - a0 * (a1 + 2 * a2 * sq(n - 1) + 2 * a1 * n) -
                     a1 * a2 * (2 * pow(n, 3) - 6 * n * n - n + 2) -
                     sq(a2) * n * (pow(n, 3) - 4 * n * n - n + 10);
    return Scalar(-f * g / 16);
  };
  auto t0 = [&](long k) {
    const Scalar n(k);
    const Scalar f = (a1 + a2 * (n - 3)) * n * (2 * a0 - 4 * a2 + (n - 3) * (a1 + a2 * n));
    const Scalar g = -4 * sq(a0) + sq(a1) * (n - 2) * (n - 1) +
                     sq(a2) * (n - 2) * (n - 1) * ((n - 3) * n - 6) +
                     2 * a0 * (a1 * n + a2 * ((n - 3) * n + 4)) +
                     a1 * a2 * (6 + n * (5 + n * (2 * n - 9)));
    return Scalar(f * g / 256);
  };
  return DiffOp(window, {{4, CoeffSeq::constant(window, Scalar(1))},
                         {3, CoeffSeq::tabulate(window, t3)},
                         {2, CoeffSeq::tabulate(window, t2)},
                         {1, CoeffSeq::tabulate(window, t1)},
                         {0, CoeffSeq::tabulate(window, t0)}});
}

DiffOp build_l6_special(Window window) {
  auto t5 = [](long k) {
    const Scalar n(k);
    return Scalar(3 * n * n + 6 * n + 8);
  };
  auto t4 = [](long k) {
    const Scalar n(k);
    return Scalar((n * (n + 1) * (32 + 15 * n * (n + 1)) - 6) / 4);
  };
  auto t3 = [](long k) {
    const Scalar n(k);
    return Scalar(n * n * (n * n - 2) * (5 * n * n + 7) / 2);
  };
  auto t2 = [](long k) {
    const Scalar n(k);
    return Scalar((n - 2) * (n - 1) * n * (n + 1) * ((n - 1) * n * (15 * (n - 1) * n - 38) - 36) / 16);
  };
  auto t1 = [](long k) {
    const Scalar n(k);
    const Scalar m = (n - 2) * n;
    return Scalar(sq(n - 2) * n * n * (12 + m * (m - 5) * (3 * m - 11)) / 16);
  };
  auto t0 = [](long k) {
    const Scalar n(k);
    return Scalar((n - 4) * (n - 3) * (n - 2) * (n - 1) * n * (n + 1) * ((n - 3) * n - 6) *
                  ((n - 4) * (n - 3) * n * (n + 1) - 6) / 64);
  };
  return DiffOp(window, {{6, CoeffSeq::constant(window, Scalar(1))},
                         {5, CoeffSeq::tabulate(window, t5)},
                         {4, CoeffSeq::tabulate(window, t4)},
                         {3, CoeffSeq::tabulate(window, t3)},
                         {2, CoeffSeq::tabulate(window, t2)},
                         {1, CoeffSeq::tabulate(window, t1)},
                         {0, CoeffSeq::tabulate(window, t0)}});
}

ZPoly rank2_curve_poly(const Rank2Params& p) {
  const Scalar &a2 = p.a2, &a1 = p.a1, &a0 = p.a0;
  const Scalar a = (a0 - a1) * (a0 - a2) * (a0 * (2 * a0 - a1) - 2 * (a0 + a1) * a2);
  const Scalar b = -2 * sq(a0) + sq(a1) + 4 * a0 * a2 + 3 * (a1 - 2 * a2) * a2;
  const ZPoly lin({a, Scalar(32)});
  return lin * lin * ZPoly({sq(b), Scalar(256)}) / Scalar(262144);
}

Rank2Report verify_rank2(Window window, std::vector<Scalar> z_nodes, long base,
                         const Scalar& tolerance) {
  const Rank2Params p{Scalar(2), Scalar(0), Scalar(0)};
  if (z_nodes.empty()) z_nodes = chebyshev_nodes(8, Scalar(-4), Scalar(4));
  // Both operators reach six indices to the right of the checked window.
  const Window ext{std::min(window.lo, base), std::max(window.hi, base + 16) + 6};
  const DiffOp l4 = build_l4(p, ext);
  const DiffOp l6 = build_l6_special(ext);
  Rank2Report rep{p, window, Scalar(0), {}, Scalar(0), Scalar(0), Scalar(0)};

  const DiffOp c = op_commutator(l4, l6).restricted(window);
  rep.commutator_residual =
      op_residual_norm(c) / commutator_scale(l4.restricted(Window{window.lo, window.hi + 6}),
                                             l6.restricted(Window{window.lo, window.hi + 6}));
  const ZPoly r = rank2_curve_poly(p);
  rep.curve = rank2_curve_check(l4, l6, r, z_nodes, base, tolerance);
  rep.r_at_0 = poly_eval(r, Scalar(0));
  rep.r_at_1 = poly_eval(r, Scalar(1));
  const ActionMatrix m0 = action_matrix(l4, l6, Scalar(0), base, tolerance, false);
  rep.z0_mismatch = abs(char_poly(m0.entries)[0] - sq(rep.r_at_0));
  return rep;
}

}  // namespace poscomm
