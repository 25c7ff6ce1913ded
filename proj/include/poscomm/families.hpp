#pragma once

// Closed-form coefficient families of L_2 = (T + U_n)^2 + W_n and closed-form
// g = 1 reference fixtures.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poscomm/ansatz.hpp"
#include "poscomm/dressing.hpp"

namespace poscomm {

enum class FamilyKind { Trig, Poly, Geom, Elliptic };

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& name);

/// Family selector plus named parameters.
///
///   trig:     r1
///   poly:     a2, a0, a1 (a1 optional, default 0)
///   geom:     beta, a, w_sign (w_sign optional: +1, -1, or 0 = resolve)
///   elliptic: c2, c1, c0, gamma_lo, gamma_hi, seed (gamma drawn uniformly)
///
/// Elliptic specs may instead carry explicit gamma/sigma lists; g is 1.
struct FamilySpec {
  FamilyKind kind = FamilyKind::Trig;
  int g = 1;
  std::map<std::string, Scalar> params;
  std::vector<Scalar> gamma;  ///< explicit gamma_n starting at gamma_start
  long gamma_start = 0;
  std::vector<int> sigma;  ///< branch signs aligned with gamma; empty = all +1

  Scalar param(const std::string& name) const;
  Scalar param_or(const std::string& name, const Scalar& fallback) const;
  /// Throws DomainError when the family's hypotheses fail.
  void validate() const;
};

struct L2Coefficients {
  CoeffSeq u;
  CoeffSeq w;
};

/// U_n = r1 cos n, W_n = r1^2 sin(g) sin(g+1) / (2 cos^2(g+1/2)) cos 2n.
L2Coefficients trig_family(int g, const Scalar& r1, Window window);

/// U_n = a2 n^2 + a1 n + a0, W_n = -g(g+1) a2 n (a2 n + a1).
L2Coefficients poly_family(int g, const Scalar& a2, const Scalar& a0, const Scalar& a1,
                           Window window);

/// U_n = beta a^n,
/// W_n = w_sign (a^{2g} + a^{2g+2} - a^{4g+2} - 1) / (a^{2g+1} + 1)^2 beta^2 a^{2n}.
L2Coefficients geom_family(int g, const Scalar& beta, const Scalar& a, int w_sign, Window window);

/// Result of trying both signs of the geometric W_n.
struct GeomSignResolution {
  int sign = 0;
  /// Relative commutator residual per sign; empty when no partner exists.
  std::optional<Scalar> residual_plus;
  std::optional<Scalar> residual_minus;
};

/// Keeps the sign for which L_2 has a commuting partner of order 2g+1.
GeomSignResolution resolve_geom_sign(int g, const Scalar& beta, const Scalar& a,
                                     const Scalar& tolerance = default_tolerance());

struct EllipticFamily {
  L2Coefficients coeffs;
  HyperellipticCurve curve;
  /// S_n = -U_n (z - gamma_n) + sigma_n sqrt(F(gamma_n)), Q_n = z - gamma_n.
  DressingState state;
  /// T^3 + (U_n+U_{n+1}+U_{n+2}) T^2 + (U_n^2+U_{n+1}^2+U_n U_{n+1}+W_n-gamma_{n+2}) T
  ///     - sigma_n sqrt(F(gamma_n)) + U_n (U_n^2 + W_n - gamma_n)
  DiffOp l3;
};

/// Genus-one family parametrized by gamma_n on gamma's window; sigma gives the
/// branch of sqrt(F(gamma_n)) (empty = all +1). U and W live on
/// [lo, hi-1], L_3 on [lo, hi-3].
EllipticFamily elliptic_family(const Scalar& c2, const Scalar& c1, const Scalar& c0,
                               const CoeffSeq& gamma, const std::vector<int>& sigma = {});

/// Everything needed to check one family on a window.
struct FamilySolution {
  FamilySpec spec;
  L2Coefficients coeffs;  ///< on the padded window
  DressingState state;
  DiffOp l2;
  DiffOp partner;
  std::optional<AnsatzResult> ansatz;  ///< absent for the elliptic family
  int geom_sign = 0;                   ///< chosen sign for geom, else 0
};

/// Extra indices tabulated on each side so that the commutator of L_2 and
/// L_{2g+1} is available on the whole requested window.
long family_padding(int g);

/// Ansatz basis matching a (non-elliptic) family.
AnsatzBasis family_basis(const FamilySpec& spec);

L2Coefficients family_coefficients(const FamilySpec& spec, Window window, int geom_sign = 1);

/// Builds L_2, solves for the dressing data and assembles L_{2g+1}.
FamilySolution solve_family(const FamilySpec& spec, Window window,
                            const Scalar& tolerance = default_tolerance());

namespace fixtures {

// trig, g = 1.
/// r1^3 sin^2(1/2) / (1 - 2 cos 1)^3. 
/// trig_g1_a3_flipped writes the denominator as (2 cos 1 - 1)^3; that sign
/// violates the linear relation for S_n.
ZPoly trig_g1_a3(const Scalar& r1);
ZPoly trig_g1_a3_flipped(const Scalar& r1);
ZPoly trig_g1_a1(const Scalar& r1);
ZPoly trig_g1_q(const Scalar& r1, long n);
HyperellipticCurve trig_g1_curve(const Scalar& r1);

// poly, g = 1, a1 = 0.
ZPoly poly_g1_s(const Scalar& a2, const Scalar& a0, long n);
/// Q_n with the index shifted by one: it equals the Q_{n+1} of the relation Q_n = -(S_{n-1}+S_n)/(U_{n-1}+U_n).
ZPoly poly_g1_q_shifted(const Scalar& a2, const Scalar& a0, long n);
/// Q_n in the convention of DressingState (poly_g1_q_shifted(n - 1)).
ZPoly poly_g1_q(const Scalar& a2, const Scalar& a0, long n);
DiffOp poly_g1_l3(const Scalar& a2, const Scalar& a0, Window window);
HyperellipticCurve poly_g1_curve(const Scalar& a2, const Scalar& a0);

// geom, g = 1.
ZPoly geom_g1_s(const Scalar& a, const Scalar& beta, long n);
ZPoly geom_g1_q(const Scalar& a, const Scalar& beta, long n);
/// W_n with the opposite overall sign; it does not commute with geom_g1_l3.
CoeffSeq geom_g1_w_flipped(const Scalar& a, const Scalar& beta, Window window);
DiffOp geom_g1_l3(const Scalar& a, const Scalar& beta, Window window);
HyperellipticCurve geom_g1_curve();

}  // namespace fixtures

}  // namespace poscomm
