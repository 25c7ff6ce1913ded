#pragma once

// Spectral curves of commuting pairs, computed without the dressing data.
//
// For fixed z, ker(L_base - z) is m-dimensional (m = order of L_base) with a
// basis psi_i fixed by unit initial data at n0..n0+m-1. A commuting L_act maps
// the kernel into itself; its matrix M(z) in that basis has characteristic
// polynomial det(w - M(z)), which is the Burchnall-Chaundy relation.

#include <optional>
#include <vector>

#include "poscomm/linalg.hpp"
#include "poscomm/opalg.hpp"
#include "poscomm/zpoly.hpp"

namespace poscomm {

/// Solves (L - z) psi = 0 forward from psi(n0 + j) = init[j], j < m. The result
/// lives on [n0, n0 + length - 1]. L must be monic and positive.
CoeffSeq kernel_extend(const DiffOp& l, const Scalar& z, long n0, const std::vector<Scalar>& init,
                       long length);

struct ActionMatrix {
  Scalar z;
  long base = 0;
  Matrix entries;
  /// sup_i distance of L_act psi_i from ker(L_base - z), relative to sup |L_act psi_i|.
  Scalar closure_defect;
};

/// Relative commutator residual |[a, b]| / (|a| |b|).
Scalar relative_commutator(const DiffOp& a, const DiffOp& b);

/// Matrix of L_act on ker(L_base - z) at base point n0. When check_commutation
/// is set, a commutator above tolerance raises InconsistentDataError first.
ActionMatrix action_matrix(const DiffOp& l_base, const DiffOp& l_act, const Scalar& z, long n0,
                           const Scalar& tolerance, bool check_commutation = true);

struct CurveReport {
  int g = 0;
  /// trace M(z) and det M(z) interpolated at the first base point.
  ZPoly trace_poly;
  ZPoly det_poly;
  Scalar trace_norm;
  Scalar base_independence_residual;
  Scalar closure_defect;
  Scalar interpolation_residual;
  Scalar commutator_residual;
  std::optional<HyperellipticCurve> matched_curve;
};

/// 2g+6 Chebyshev nodes on [-4 scale, 4 scale].
std::vector<Scalar> default_z_nodes(int g, const Scalar& scale = Scalar(1));

/// Curve of a pair (L_2, L_{2g+1}); g is read off the order of l_act. Needs
/// 2g+2 z nodes and 2 base points (DomainError otherwise). Throws
/// InconsistentDataError when the pair does not commute or the samples are not
/// polynomial of the expected degrees.
CurveReport extract_curve(const DiffOp& l_base, const DiffOp& l_act,
                          const std::vector<Scalar>& z_nodes, const std::vector<long>& n0_list,
                          const Scalar& tolerance);

/// Distance between two curves of equal genus, relative to max(1, max |c|).
Scalar curve_distance(const HyperellipticCurve& a, const HyperellipticCurve& b);

struct Rank2Sample {
  Scalar z;
  /// k_0..k_3 of det(w - M(z)).
  std::vector<Scalar> char_poly;
  Scalar expected_r;
  Scalar mismatch;
};

struct Rank2CurveReport {
  std::vector<Rank2Sample> samples;
  Scalar max_mismatch;
  Scalar closure_defect;
  Scalar commutator_residual;
};

/// Compares det(w - M(z)) for the 4x4 action of l6 on ker(l4 - z) with
/// (w^2 - R(z))^2. Mismatch is measured relative to max(1, R(z)^2).
Rank2CurveReport rank2_curve_check(const DiffOp& l4, const DiffOp& l6, const ZPoly& r,
                                   const std::vector<Scalar>& z_nodes, long n0,
                                   const Scalar& tolerance);

}  // namespace poscomm
