#pragma once

// Discrete Lame operator on the lattice x_n = x0 + n eps:
//
//   L_2 = T_eps^2 / eps^2 + A_g(x, eps) T_eps / eps + p(eps),
//
// with A_g built from zeta sums. Its continuum limit is d^2/dx^2 - g(g+1) p(x).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "poscomm/dressing.hpp"
#include "poscomm/spectral.hpp"
#include "poscomm/weierstrass.hpp"

namespace poscomm {

/// Readings of the genus-two coefficient
///   -3/2 (zeta(e) + zeta(3e) + zeta(x-2e) - zeta(x+2e)
/// whose closing parenthesis is missing.
enum class A2Interpretation {
  /// -3/2 (zeta(e) + zeta(3e)) + zeta(x-2e) - zeta(x+2e)
  ScalarPairOnly,
  /// -3/2 (zeta(e) + zeta(3e) + zeta(x-2e) - zeta(x+2e))
  AllTermsWeighted,
  /// -3/2 (zeta(e) + zeta(3e)) - zeta(x-2e) + zeta(x+2e)
  ScalarPairFlipped,
};

std::string to_string(A2Interpretation a);
A2Interpretation a2_interpretation_from_string(const std::string& name);
std::vector<A2Interpretation> all_a2_interpretations();

struct LameDiscretization {
  int g = 1;
  Scalar eps;
  Scalar x0;
  A2Interpretation a2 = A2Interpretation::AllTermsWeighted;
};

/// x -> A_g(x, eps).
std::function<Scalar(const Scalar&)> ag_build(const WeierstrassContext& ctx, int g,
                                              const Scalar& eps,
                                              A2Interpretation a2 = A2Interpretation::AllTermsWeighted);

/// Coefficients (1/eps^2, A_g(x_n)/eps, p(eps)) at degrees (2, 1, 0).
DiffOp lame_l2(const LameDiscretization& disc, const WeierstrassContext& ctx, Window window);

/// eps^2 L_2, monic at T^2 (the top coefficient is set to exactly one).
DiffOp lame_l2_monic(const LameDiscretization& disc, const WeierstrassContext& ctx, Window window);

struct TestFunction {
  std::function<Scalar(const Scalar&)> f;
  std::function<Scalar(const Scalar&)> f2;  ///< second derivative
};

TestFunction cosine_test_function();

/// |(L_2 f)(x) - f''(x) + g(g+1) p(x) f(x)| with L_2 acting on functions of x.
Scalar continuum_check(const LameDiscretization& disc, const WeierstrassContext& ctx,
                       const TestFunction& f, const Scalar& x);

struct ContinuumSweep {
  std::vector<Scalar> eps;
  std::vector<Scalar> errors;
  /// Least-squares slope of log(error) against log(eps).
  double slope = 0;
};

ContinuumSweep continuum_sweep(const WeierstrassContext& ctx, int g, A2Interpretation a2,
                               const std::vector<Scalar>& eps_list, const TestFunction& f,
                               const Scalar& x);

struct A2Selection {
  std::vector<std::pair<A2Interpretation, double>> slopes;
  /// Set when exactly one interpretation reaches the slope threshold.
  std::optional<A2Interpretation> selected;
};

/// Runs the g = 2 sweep for each interpretation and keeps the one(s) with
/// slope >= min_slope.
A2Selection select_a2_interpretation(const WeierstrassContext& ctx,
                                     const std::vector<Scalar>& eps_list, const Scalar& x,
                                     double min_slope = 0.8);

/// Elliptic-family data recovered for one eps, in the unscaled spectral parameter.
struct LameEpsResult {
  Scalar eps;
  /// Curve coefficients (c0, c1, c2) with z the eigenvalue of L_2 (not eps^2 L_2).
  std::vector<Scalar> newton_curve;
  Scalar gamma0;
  int sigma0 = 1;
  int step_branch = 1;
  int newton_iterations = 0;
  std::vector<Scalar> newton_trace;  ///< max residual per iteration
  Scalar newton_residual;
  /// max |eps A_1(x_n) - U_n - U_{n+1}| over the whole window.
  Scalar window_fit_residual;
  Scalar commutator_residual;
  CurveReport spectral;
  /// Spectral curve mapped back to the unscaled z.
  std::vector<Scalar> spectral_curve;
};

struct LameIndependenceReport {
  std::vector<LameEpsResult> per_eps;
  /// Max coefficient difference of the unscaled curves across eps.
  Scalar cross_eps_deviation;
  /// Max distance of the unscaled curves from z^3 - g2/4 z - g3/4.
  Scalar lame_curve_deviation;
};

struct LameIndependenceOptions {
  Window window{-6, 10};
  Window fit{-3, 3};
  std::vector<long> base_points{0, 1, 2};
  int max_iterations = 80;
  Scalar newton_target = Scalar("1e-8");
  Scalar tolerance = default_tolerance();
};

/// g = 1: recovers (c2, c1, c0, gamma_0) from eps^2 L_2 by Gauss-Newton, builds
/// L_3 from the elliptic family, extracts the curve and compares across eps.
LameIndependenceReport lame_curve_independence(const WeierstrassContext& ctx,
                                               const std::vector<Scalar>& eps_list,
                                               const Scalar& x0,
                                               const LameIndependenceOptions& opts = {});

/// Single-eps recovery. `a1_shift` is added to A_1 before fitting (negative control).
LameEpsResult lame_recover(const WeierstrassContext& ctx, const Scalar& eps, const Scalar& x0,
                           const LameIndependenceOptions& opts, const Scalar& a1_shift = Scalar(0));

/// Relative commutator of eps^2 L_2 (with A_1 shifted by a1_shift) and the L_3
/// recovered for the unshifted operator.
Scalar lame_negative_control(const WeierstrassContext& ctx, const Scalar& eps, const Scalar& x0,
                             const Scalar& a1_shift, const LameIndependenceOptions& opts = {});

}  // namespace poscomm
