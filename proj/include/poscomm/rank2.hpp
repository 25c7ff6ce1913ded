#pragma once

// The rank-two pair (L_4, L_6) with polynomial coefficients.

#include <vector>

#include "poscomm/spectral.hpp"

namespace poscomm {

struct Rank2Params {
  Scalar a2, a1, a0;
};

/// L_4 = T^4 + (a2 n^2 + a1 n + a0) T^3 + ... (four closed-form coefficients).
DiffOp build_l4(const Rank2Params& p, Window window);

/// The closed-form order-six partner for a2 = 2, a1 = a0 = 0.
DiffOp build_l6_special(Window window);

/// R(z) with w^2 = R(z) the closed-form spectral curve:
/// (32 z + A)^2 (256 z + B^2) / 262144.
ZPoly rank2_curve_poly(const Rank2Params& p);

struct Rank2Report {
  Rank2Params params;
  Window window;
  Scalar commutator_residual;
  Rank2CurveReport curve;
  Scalar r_at_0;
  Scalar r_at_1;
  /// |k_0(0) - R(0)^2| from the action matrix at z = 0.
  Scalar z0_mismatch;
};

/// Commutation on `window` and the curve comparison at the given nodes
/// (default 8 Chebyshev nodes on [-4, 4]) for (a2, a1, a0) = (2, 0, 0).
Rank2Report verify_rank2(Window window = {-20, 20}, std::vector<Scalar> z_nodes = {},
                         long base = 3, const Scalar& tolerance = Scalar("1e-7"));

}  // namespace poscomm
