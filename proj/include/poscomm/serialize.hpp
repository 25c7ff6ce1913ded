#pragma once

// JSON forms of the library's values. Scalars are written as decimal strings
// with enough digits to round-trip at the working precision.

#include <json.hpp>

#include "poscomm/dressing.hpp"
#include "poscomm/families.hpp"
#include "poscomm/spectral.hpp"

namespace poscomm {

using Json = nlohmann::ordered_json;

Json scalar_json(const Scalar& v);
/// Accepts a decimal string, a fraction "p/q" or a JSON number.
Scalar scalar_from_json(const Json& j);

Json poly_json(const ZPoly& p);
ZPoly poly_from_json(const Json& j);

Json curve_json(const HyperellipticCurve& c);

/// {order, window: [lo, hi], terms: {degree: [coeff at lo, ..., coeff at hi]}}
Json op_json(const DiffOp& l);
DiffOp op_from_json(const Json& j);

/// {g, curve, window, S, Q, U, W}; S/Q are listed on their own windows.
Json state_json(const DressingState& s);

/// {g, trace, det, curve or null, base_independence_residual, closure_defect, ...}
Json curve_report_json(const CurveReport& r);

/// {"kind": "trig", "g": 2, "params": {"r1": "1.0"}} (+ gamma/sigma for elliptic).
Json family_spec_json(const FamilySpec& s);
FamilySpec family_spec_from_json(const Json& j);

}  // namespace poscomm
