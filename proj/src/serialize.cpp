#include "poscomm/serialize.hpp"

namespace poscomm {

Json scalar_json(const Scalar& v) { return to_decimal(v); }

Scalar scalar_from_json(const Json& j) {
  if (j.is_string()) return parse_scalar(j.get<std::string>());
  if (j.is_number_integer()) return Scalar(j.get<long long>());
  if (j.is_number()) return parse_scalar(j.dump());
  throw DomainError("expected a number or decimal string, got " + j.dump());
}

Json poly_json(const ZPoly& p) {
  Json a = Json::array();
  for (const auto& c : p.coeffs()) a.push_back(scalar_json(c));
  return a;
}

ZPoly poly_from_json(const Json& j) {
  if (!j.is_array()) throw DomainError("polynomial must be a coefficient array");
  std::vector<Scalar> c;
  for (const auto& e : j) c.push_back(scalar_from_json(e));
  return ZPoly(std::move(c));
}

Json curve_json(const HyperellipticCurve& c) {
  Json a = Json::array();
  for (const auto& v : c.c()) a.push_back(scalar_json(v));
  return a;
}

Json op_json(const DiffOp& l) {
  Json terms = Json::object();
  for (const auto& [deg, seq] : l.terms()) {
    Json vals = Json::array();
    for (const auto& v : seq.values()) vals.push_back(scalar_json(v));
    terms[std::to_string(deg)] = std::move(vals);
  }
  Json j;
  j["order"] = l.is_zero() ? Json(nullptr) : Json(l.order());
  j["window"] = {l.window().lo, l.window().hi};
  j["terms"] = std::move(terms);
  return j;
}

DiffOp op_from_json(const Json& j) {
  const Window w{j.at("window").at(0).get<long>(), j.at("window").at(1).get<long>()};
  std::map<int, CoeffSeq> terms;
  for (const auto& [key, vals] : j.at("terms").items()) {
    std::vector<Scalar> v;
    for (const auto& e : vals) v.push_back(scalar_from_json(e));
    terms.emplace(std::stoi(key), CoeffSeq(w, std::move(v)));
  }
  return DiffOp(w, std::move(terms));
}

namespace {

Json seq_json(const CoeffSeq& s) {
  Json a = Json::array();
  for (const auto& v : s.values()) a.push_back(scalar_json(v));
  return a;
}

Json polyseq_json(const PolySeq& s) {
  Json a = Json::array();
  for (long n = s.window().lo; n <= s.window().hi; ++n) a.push_back(poly_json(s(n)));
  return a;
}

Json window_json(const Window& w) { return Json::array({w.lo, w.hi}); }

}  // namespace

Json state_json(const DressingState& s) {
  Json j;
  j["g"] = s.genus();
  j["curve"] = curve_json(s.curve());
  j["window"] = window_json(s.S().window());
  j["S"] = polyseq_json(s.S());
  j["Q_window"] = window_json(s.Q().window());
  j["Q"] = polyseq_json(s.Q());
  j["U_window"] = window_json(s.U().window());
  j["U"] = seq_json(s.U());
  j["W_window"] = window_json(s.W().window());
  j["W"] = seq_json(s.W());
  return j;
}

Json curve_report_json(const CurveReport& r) {
  Json j;
  j["g"] = r.g;
  j["trace"] = poly_json(r.trace_poly);
  j["det"] = poly_json(r.det_poly);
  j["curve"] = r.matched_curve ? curve_json(*r.matched_curve) : Json(nullptr);
  j["trace_norm"] = scalar_json(r.trace_norm);
  j["base_independence_residual"] = scalar_json(r.base_independence_residual);
  j["closure_defect"] = scalar_json(r.closure_defect);
  j["interpolation_residual"] = scalar_json(r.interpolation_residual);
  j["commutator_residual"] = scalar_json(r.commutator_residual);
  return j;
}

Json family_spec_json(const FamilySpec& s) {
  Json j;
  j["kind"] = to_string(s.kind);
  j["g"] = s.g;
  Json p = Json::object();
  for (const auto& [k, v] : s.params) p[k] = scalar_json(v);
  j["params"] = std::move(p);
  if (!s.gamma.empty()) {
    Json g = Json::array();
    for (const auto& v : s.gamma) g.push_back(scalar_json(v));
    j["gamma"] = std::move(g);
    j["gamma_start"] = s.gamma_start;
  }
  if (!s.sigma.empty()) j["sigma"] = s.sigma;
  return j;
}

FamilySpec family_spec_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("family spec must be a JSON object");
  FamilySpec s;
  s.kind = family_kind_from_string(j.at("kind").get<std::string>());
  s.g = j.value("g", 1);
  if (j.contains("params")) {
    for (const auto& [k, v] : j.at("params").items()) s.params[k] = scalar_from_json(v);
  }
  if (j.contains("gamma")) {
    for (const auto& v : j.at("gamma")) s.gamma.push_back(scalar_from_json(v));
    s.gamma_start = j.value("gamma_start", 0L);
  }
  if (j.contains("sigma")) s.sigma = j.at("sigma").get<std::vector<int>>();
  return s;
}

}  // namespace poscomm
