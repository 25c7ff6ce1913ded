#include "poscomm/spectral.hpp"

#include <algorithm>

namespace poscomm {

namespace {

void require_monic_positive(const DiffOp& l, const char* who) {
  if (l.is_zero() || !l.is_positive() || !l.is_monic(Scalar(1000) * epsilon())) {
    throw DomainError(std::string(who) + ": operator must be positive and monic");
  }
}

}  // namespace

CoeffSeq kernel_extend(const DiffOp& l, const Scalar& z, long n0, const std::vector<Scalar>& init,
                       long length) {
  require_monic_positive(l, "kernel_extend");
  const int m = l.order();
  if (static_cast<int>(init.size()) != m) {
    throw DomainError("kernel_extend: need " + std::to_string(m) + " initial values, got " +
                      std::to_string(init.size()));
  }
  if (length < m) throw DomainError("kernel_extend: length shorter than the operator order");
  std::vector<Scalar> psi(init.begin(), init.end());
  psi.reserve(static_cast<size_t>(length));
  for (long n = n0; n + m < n0 + length; ++n) {
    // psi(n+m) = z psi(n) - sum_{j<m} u_j(n) psi(n+j)
    Scalar next = z * psi[static_cast<size_t>(n - n0)];
    for (int j = 0; j < m; ++j) next -= l.coeff(j, n) * psi[static_cast<size_t>(n - n0 + j)];
    psi.push_back(checked(next, "kernel_extend"));
  }
  return CoeffSeq(Window{n0, n0 + length - 1}, std::move(psi));
}

Scalar relative_commutator(const DiffOp& a, const DiffOp& b) {
  const DiffOp c = op_commutator(a, b);
  const Scalar scale = commutator_scale(a, b);
  return scale == 0 ? op_residual_norm(c) : op_residual_norm(c) / scale;
}

ActionMatrix action_matrix(const DiffOp& l_base, const DiffOp& l_act, const Scalar& z, long n0,
                           const Scalar& tolerance, bool check_commutation) {
  require_monic_positive(l_base, "action_matrix");
  if (check_commutation) {
    const Scalar r = relative_commutator(l_base, l_act);
    if (r > tolerance) {
      throw InconsistentDataError("action_matrix: operators do not commute (relative residual " +
                                  to_short(r) + ")");
    }
  }
  const int m = l_base.order();
  const int k = l_act.terms().empty() ? 0 : std::max(0, l_act.terms().rbegin()->first);
  const long extra = m + 2;
  const long len = m + extra + k;

  ActionMatrix out{z, n0, Matrix::Zero(m, m), Scalar(0)};
  for (int i = 0; i < m; ++i) {
    std::vector<Scalar> init(static_cast<size_t>(m), Scalar(0));
    init[static_cast<size_t>(i)] = 1;
    const CoeffSeq psi = kernel_extend(l_base, z, n0, init, len);
    const CoeffSeq phi = op_apply(l_act, psi);
    if (!phi.window().covers(Window{n0, n0 + m + extra - 1})) {
      throw WindowError("action_matrix: L_act on " + l_act.window().str() +
                        " does not reach the base block starting at " + std::to_string(n0));
    }
    std::vector<Scalar> head;
    for (int r = 0; r < m; ++r) {
      out.entries(r, i) = phi(n0 + r);
      head.push_back(phi(n0 + r));
    }
    const CoeffSeq back = kernel_extend(l_base, z, n0, head, m + extra);
    Scalar dev(0), mag(0);
    for (long n = n0; n < n0 + m + extra; ++n) {
      dev = std::max(dev, Scalar(abs(phi(n) - back(n))));
      mag = std::max(mag, Scalar(abs(phi(n))));
    }
    out.closure_defect = std::max(out.closure_defect, mag == 0 ? dev : dev / mag);
  }
  if (out.closure_defect > tolerance) {
    throw InconsistentDataError("action_matrix: L_act leaves the kernel (closure defect " +
                                to_short(out.closure_defect) + " at z = " + to_short(z) + ")");
  }
  return out;
}

std::vector<Scalar> default_z_nodes(int g, const Scalar& scale) {
  return chebyshev_nodes(2 * g + 6, -4 * scale, 4 * scale);
}

CurveReport extract_curve(const DiffOp& l_base, const DiffOp& l_act,
                          const std::vector<Scalar>& z_nodes, const std::vector<long>& n0_list,
                          const Scalar& tolerance) {
  require_monic_positive(l_base, "extract_curve");
  require_monic_positive(l_act, "extract_curve");
  if (l_base.order() != 2 || l_act.order() % 2 == 0) {
    throw DomainError("extract_curve expects L_2 and an operator of odd order");
  }
  const int g = (l_act.order() - 1) / 2;
  if (static_cast<int>(z_nodes.size()) < 2 * g + 2) {
    throw DomainError("extract_curve: need at least " + std::to_string(2 * g + 2) + " z nodes");
  }
  // Base-point independence is the well-definedness check; it needs two points.
  if (n0_list.size() < 2) throw DomainError("extract_curve: need at least 2 base points");

  CurveReport rep;
  rep.g = g;
  rep.commutator_residual = relative_commutator(l_base, l_act);
  if (rep.commutator_residual > tolerance) {
    throw InconsistentDataError("extract_curve: operators do not commute (relative residual " +
                                to_short(rep.commutator_residual) + ")");
  }
  rep.closure_defect = 0;
  rep.interpolation_residual = 0;
  rep.base_independence_residual = 0;

  for (size_t b = 0; b < n0_list.size(); ++b) {
    std::vector<Sample> tr, det;
    for (const auto& z : z_nodes) {
      const ActionMatrix am = action_matrix(l_base, l_act, z, n0_list[b], tolerance, false);
      rep.closure_defect = std::max(rep.closure_defect, am.closure_defect);
      const Matrix& m = am.entries;
      tr.push_back({z, m(0, 0) + m(1, 1)});
      det.push_back({z, m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)});
    }
    const InterpolationResult ti = poly_interpolate(tr, g, tolerance);
    const InterpolationResult di = poly_interpolate(det, 2 * g + 1, tolerance);
    rep.interpolation_residual =
        std::max({rep.interpolation_residual, ti.consistency_residual, di.consistency_residual});
    if (!ti.consistent || !di.consistent) {
      throw InconsistentDataError("extract_curve: samples at base point " +
                                  std::to_string(n0_list[b]) +
                                  " are not polynomial of the expected degree (residual " +
                                  to_short(std::max(ti.consistency_residual, di.consistency_residual)) +
                                  ")");
    }
    if (b == 0) {
      rep.trace_poly = ti.poly;
      rep.det_poly = di.poly;
    } else {
      const Scalar scale = std::max(Scalar(1), rep.det_poly.max_abs());
      rep.base_independence_residual =
          std::max({rep.base_independence_residual, poly_distance(di.poly, rep.det_poly) / scale,
                    poly_distance(ti.poly, rep.trace_poly) / sqrt(scale)});
    }
  }

  // Eigenvalues come in pairs +-w with w ~ sqrt|det|, so the trace is judged against that.
  const Scalar wscale = sqrt(std::max(Scalar(1), rep.det_poly.max_abs()));
  rep.trace_norm = rep.trace_poly.max_abs() / wscale;
  if (rep.trace_norm <= tolerance) {
    try {
      rep.matched_curve = HyperellipticCurve::from_polynomial(-rep.det_poly, tolerance);
    } catch (const DomainError&) {
      // -det is not monic of degree 2g+1; leave the curve unmatched.
    }
  }
  return rep;
}

Scalar curve_distance(const HyperellipticCurve& a, const HyperellipticCurve& b) {
  if (a.genus() != b.genus()) throw DomainError("curve_distance: genera differ");
  Scalar mx(1);
  for (const auto& c : b.c()) mx = std::max(mx, Scalar(abs(c)));
  return poly_distance(a.polynomial(), b.polynomial()) / mx;
}

Rank2CurveReport rank2_curve_check(const DiffOp& l4, const DiffOp& l6, const ZPoly& r,
                                   const std::vector<Scalar>& z_nodes, long n0,
                                   const Scalar& tolerance) {
  Rank2CurveReport rep;
  rep.commutator_residual = relative_commutator(l4, l6);
  if (rep.commutator_residual > tolerance) {
    throw InconsistentDataError("rank2_curve_check: operators do not commute (relative residual " +
                                to_short(rep.commutator_residual) + ")");
  }
  rep.max_mismatch = 0;
  rep.closure_defect = 0;
  for (const auto& z : z_nodes) {
    const ActionMatrix am = action_matrix(l4, l6, z, n0, tolerance, false);
    rep.closure_defect = std::max(rep.closure_defect, am.closure_defect);
    Rank2Sample s{z, char_poly(am.entries), poly_eval(r, z), Scalar(0)};
    if (s.char_poly.size() != 4) throw DomainError("rank2_curve_check: L_4 must have order 4");
    // (w^2 - R)^2 = w^4 - 2R w^2 + R^2; coefficient k_i carries weight |R|^{(4-i)/2}.
    const Scalar expected[4] = {sq(s.expected_r), Scalar(0), -2 * s.expected_r, Scalar(0)};
    const Scalar mag = abs(s.expected_r);
    for (int i = 0; i < 4; ++i) {
      const Scalar weight = std::max(Scalar(1), Scalar(pow(mag, Scalar(4 - i) / 2)));
      s.mismatch = std::max(s.mismatch, Scalar(abs(s.char_poly[static_cast<size_t>(i)] - expected[i]) / weight));
    }
    rep.max_mismatch = std::max(rep.max_mismatch, s.mismatch);
    rep.samples.push_back(std::move(s));
  }
  return rep;
}

}  // namespace poscomm
