#pragma once

// Basis-ansatz solver for S_n.
//
// For the closed-form families, S_n is a finite combination
//   S_n(z) = sum_k A_k(z) phi_k(n)
// of known sequences phi_k with unknown coefficient polynomials A_k of degree
// <= g. R_n is linear in S, so sampling R_n = 0 over a grid of n and matching
// every power of z gives a homogeneous linear system in the coefficients of the
// A_k. Its solution space is one-dimensional (overall scale); the scale is
// fixed by requiring the z^g coefficient of S_n to equal -U_n.

#include <optional>
#include <string>
#include <vector>

#include "poscomm/dressing.hpp"

namespace poscomm {

enum class BasisKind {
  OddCosines,    ///< cos((2k+1) n), k = 0..g
  EvenPowers,    ///< n^{2k},        k = 0..g+1
  OddGeometric,  ///< a^{(2k+1) n},  k = 0..g
  Powers,        ///< n^k,           k = 0..2g+2 (no parity assumption)
};

std::string to_string(BasisKind kind);

class AnsatzBasis {
 public:
  AnsatzBasis(BasisKind kind, int genus, Scalar ratio = Scalar(0));

  BasisKind kind() const { return kind_; }
  int genus() const { return genus_; }
  /// Number of basis sequences phi_k.
  int size() const;
  /// phi_k(n).
  Scalar eval(int k, long n) const;
  /// Frequency/exponent label of phi_k (2k+1, 2k or k), matching A_{label}.
  int label(int k) const;

 private:
  BasisKind kind_;
  int genus_;
  Scalar ratio_;
};

struct AnsatzResult {
  AnsatzBasis basis;
  /// A_k(z) for each basis sequence, indexed like the basis.
  std::vector<ZPoly> coefficients;
  HyperellipticCurve curve;
  long rank = 0;
  long unknowns = 0;
  /// max_n |R_n| / scale over the sampling grid.
  Scalar system_residual;
  /// Relative spread of F_g recovered at different n.
  Scalar curve_spread;
  /// Relative distance to a caller-supplied curve (0 when none was given).
  Scalar curve_mismatch;

  ZPoly s_at(long n) const;
  /// Coefficient polynomial attached to the basis element with the given label.
  ZPoly coefficient_for_label(int label) const;
  PolySeq s_seq(Window w) const;
  DressingState state(const CoeffSeq& u, const CoeffSeq& w, Window s_window) const;
};

/// Sampling grid half-width used for a basis.
long ansatz_grid_half_width(const AnsatzBasis& basis);

/// Solves for S_n in the span of `basis`. U and W must be tabulated on
/// [-M-1, M+2] with M = ansatz_grid_half_width(basis). When `known_curve` is
/// absent F_g is recovered from the master identity; otherwise the recovered
/// curve is compared with it and the supplied one is returned.
///
/// Throws InconsistentDataError when the homogeneous system has rank below
/// unknowns-1 or when the normalized solution leaves a residual above tolerance.
AnsatzResult ansatz_solve(const AnsatzBasis& basis, const CoeffSeq& u, const CoeffSeq& w,
                          const std::optional<HyperellipticCurve>& known_curve = std::nullopt,
                          const Scalar& tolerance = default_tolerance());

/// R_n + R_{-n-1} for S_n = sum_k coefficients[k] * basis_k(n), with arbitrary
/// (not necessarily solving) coefficients. Scale: max of |R_n|, |R_{-n-1}|
/// and the size of their individual terms.
Residual skew_residual(const AnsatzBasis& basis, const std::vector<ZPoly>& coefficients,
                       const CoeffSeq& u, const CoeffSeq& w, long n);

}  // namespace poscomm
