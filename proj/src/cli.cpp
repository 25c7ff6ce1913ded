#include "poscomm/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "poscomm/rank2.hpp"
#include "poscomm/spectral.hpp"

namespace poscomm::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

Json window_json(const Window& w) { return Json::array({w.lo, w.hi}); }

Json scalars_json(const std::vector<Scalar>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(scalar_json(x));
  return a;
}

Json residual_json(const Scalar& value, const Scalar& limit) {
  return Json{{"value", scalar_json(value)}, {"limit", scalar_json(limit)}, {"pass", value <= limit}};
}

std::vector<Scalar> parse_scalar_list(const std::string& text) {
  std::vector<Scalar> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_scalar(item));
  }
  if (out.empty()) throw UsageError("empty list '" + text + "'");
  return out;
}

Window parse_window(const std::string& text) {
  const auto v = parse_scalar_list(text);
  if (v.size() != 2) throw UsageError("window needs two integers lo,hi; got '" + text + "'");
  return {v[0].convert_to<long>(), v[1].convert_to<long>()};
}

std::vector<Scalar> z_nodes_for(const RunConfig& c, int g) {
  return chebyshev_nodes(2 * g + 6, c.z_interval.first, c.z_interval.second);
}

const std::vector<long>& curve_base_points() {
  static const std::vector<long> pts{0, 1, 2};
  return pts;
}

}  // namespace

void RunConfig::validate() const {
  if (precision_bits < 53) {
    throw DomainError("precision_bits must be >= 53, got " + std::to_string(precision_bits));
  }
  if (!(tolerance > 0)) throw DomainError("tolerance must be positive");
  if (window.empty()) throw DomainError("window " + window.str() + " is empty");
  if (!(z_interval.first < z_interval.second)) throw DomainError("z_interval must satisfy lo < hi");
  for (const auto& e : eps) {
    if (!(e > 0)) throw DomainError("eps values must be positive");
  }
}

unsigned default_precision_bits() {
  if (const char* env = std::getenv(kPrecisionEnv); env != nullptr && *env != '\0') {
    try {
      size_t used = 0;
      const long bits = std::stol(env, &used);
      if (used != std::string(env).size() || bits <= 0) throw std::invalid_argument(env);
      return static_cast<unsigned>(bits);
    } catch (const std::exception&) {
      throw UsageError(std::string(kPrecisionEnv) + " must be a positive integer, got '" + env + "'");
    }
  }
  return 113;
}

Json config_json(const RunConfig& c, const std::string& command) {
  Json j;
  j["command"] = command;
  j["precision_bits"] = c.precision_bits;
  j["tolerance"] = scalar_json(c.tolerance);
  if (command == "verify" || command == "curve" || command == "partner") {
    j["window"] = window_json(c.window);
    j["family"] = family_spec_json(c.family);
  }
  if (command == "curve") {
    j["z_interval"] = Json::array({scalar_json(c.z_interval.first), scalar_json(c.z_interval.second)});
  }
  if (command == "lame") {
    j["g"] = c.family.g;
    j["g2"] = scalar_json(c.g2);
    j["g3"] = scalar_json(c.g3);
    j["eps"] = scalars_json(c.eps);
    j["x0"] = scalar_json(c.x0);
    j["a2_interpretation"] = c.a2_interpretation ? Json(to_string(*c.a2_interpretation)) : Json(nullptr);
  }
  return j;
}

void apply_config_json(const Json& j, RunConfig& c) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  try {
    if (j.contains("precision_bits")) c.precision_bits = j.at("precision_bits").get<unsigned>();
    if (j.contains("tolerance")) c.tolerance = scalar_from_json(j.at("tolerance"));
    if (j.contains("window")) {
      const auto& w = j.at("window");
      c.window = {w.at(0).get<long>(), w.at(1).get<long>()};
    }
    if (j.contains("z_interval")) {
      const auto& z = j.at("z_interval");
      c.z_interval = {scalar_from_json(z.at(0)), scalar_from_json(z.at(1))};
    }
    if (j.contains("family")) c.family = family_spec_from_json(j.at("family"));
    if (j.contains("output_path")) c.output_path = j.at("output_path").get<std::string>();
    if (j.contains("g")) c.family.g = j.at("g").get<int>();
    if (j.contains("g2")) c.g2 = scalar_from_json(j.at("g2"));
    if (j.contains("g3")) c.g3 = scalar_from_json(j.at("g3"));
    if (j.contains("eps")) {
      c.eps.clear();
      for (const auto& e : j.at("eps")) c.eps.push_back(scalar_from_json(e));
    }
    if (j.contains("x0")) c.x0 = scalar_from_json(j.at("x0"));
    if (j.contains("a2_interpretation") && !j.at("a2_interpretation").is_null()) {
      c.a2_interpretation = a2_interpretation_from_string(j.at("a2_interpretation").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed config: ") + e.what());
  }
}

std::string config_hash(const Json& config) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

std::filesystem::path report_path(const RunConfig& c, const std::string& command) {
  return c.output_path / (command + "-" + config_hash(config_json(c, command)) + ".jsonl");
}

void append_report(const std::filesystem::path& path, const Json& record) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::app);
  if (!os) throw Error("cannot open report file " + path.string());
  os << record.dump() << '\n';
  if (!os) throw Error("failed writing report file " + path.string());
}

std::optional<Json> last_report(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) return std::nullopt;
  std::string line, last;
  while (std::getline(is, line)) {
    if (!line.empty()) last = line;
  }
  if (last.empty()) return std::nullopt;
  return Json::parse(last);
}

// ---------------------------------------------------------------------------

CommandResult cmd_verify(const RunConfig& c) {
  const FamilySolution sol = solve_family(c.family, c.window, c.tolerance);
  CommandResult r;
  Json& b = r.body;
  bool ok = true;

  Scalar master(0), linear(0);
  const Window mw = sol.state.master_window().intersect(c.window);
  const Window lw = sol.state.linear_window().intersect(c.window);
  for (long n = mw.lo; n <= mw.hi; ++n) master = std::max(master, verify_master(sol.state, n).relative());
  for (long n = lw.lo; n <= lw.hi; ++n) {
    linear = std::max(linear, residual_linear_norm(sol.state, n).relative());
  }
  const DiffOp comm = op_commutator(sol.l2, sol.partner).restricted(c.window);
  const Scalar commutator = op_residual_norm(comm) / commutator_scale(sol.l2, sol.partner);

  b["curve"] = curve_json(sol.state.curve());
  b["master_window"] = window_json(mw);
  b["linear_window"] = window_json(lw);
  b["verify_master"] = residual_json(master, c.tolerance);
  b["residual_linear"] = residual_json(linear, c.tolerance);
  b["commutator"] = residual_json(commutator, c.tolerance);
  ok = ok && master <= c.tolerance && linear <= c.tolerance && commutator <= c.tolerance;
  if (sol.ansatz) {
    b["ansatz"] = {{"basis", to_string(sol.ansatz->basis.kind())},
                   {"rank", sol.ansatz->rank},
                   {"unknowns", sol.ansatz->unknowns},
                   {"system_residual", scalar_json(sol.ansatz->system_residual)},
                   {"curve_spread", scalar_json(sol.ansatz->curve_spread)}};
  }
  if (c.family.kind == FamilyKind::Geom) b["w_sign"] = sol.geom_sign;
  r.passed = ok;
  return r;
}

CommandResult cmd_curve(const RunConfig& c) {
  const FamilySolution sol = solve_family(c.family, c.window, c.tolerance);
  // Spectral extraction is a consistency check of sampled polynomials; its
  // threshold is looser than the identity checks.
  const Scalar tol = std::max(c.tolerance, Scalar("1e-8"));
  const CurveReport rep =
      extract_curve(sol.l2, sol.partner, z_nodes_for(c, c.family.g), curve_base_points(), tol);
  CommandResult r;
  r.body["report"] = curve_report_json(rep);
  r.body["dressing_curve"] = curve_json(sol.state.curve());
  bool ok = rep.matched_curve.has_value() && rep.base_independence_residual <= tol;
  if (rep.matched_curve) {
    const Scalar d = curve_distance(*rep.matched_curve, sol.state.curve());
    r.body["dressing_agreement"] = residual_json(d, tol);
    ok = ok && d <= tol;
  }
  r.passed = ok;
  return r;
}

CommandResult cmd_partner(const RunConfig& c) {
  const FamilySolution sol = solve_family(c.family, c.window, c.tolerance);
  const Scalar commutator =
      op_residual_norm(op_commutator(sol.l2, sol.partner).restricted(c.window)) /
      commutator_scale(sol.l2, sol.partner);
  CommandResult r;
  r.body["l2"] = op_json(sol.l2);
  r.body["partner"] = op_json(sol.partner);
  r.body["commutator"] = residual_json(commutator, c.tolerance);
  r.passed = commutator <= c.tolerance;
  return r;
}

CommandResult cmd_lame(const RunConfig& c) {
  const WeierstrassContext ctx(c.g2, c.g3);
  const int g = c.family.g;
  if (g < 1) throw DomainError("genus must be >= 1, got " + std::to_string(g));
  CommandResult r;
  Json& b = r.body;
  bool ok = true;
  b["omega"] = scalar_json(ctx.real_halfperiod());
  b["eta"] = scalar_json(ctx.eta());

  // The continuum sweep needs eps small enough to be in the asymptotic regime.
  const std::vector<Scalar> sweep_eps =
      c.eps.size() >= 2 && g == 1 ? c.eps
                                  : std::vector<Scalar>{Scalar("0.01"), Scalar("0.005"), Scalar("0.0025")};
  A2Interpretation a2 = c.a2_interpretation.value_or(A2Interpretation::AllTermsWeighted);
  if (g == 2 && !c.a2_interpretation) {
    const A2Selection sel = select_a2_interpretation(ctx, sweep_eps, c.x0);
    Json slopes = Json::object();
    for (const auto& [interp, s] : sel.slopes) slopes[to_string(interp)] = s;
    b["a2_selection"] = {{"slopes", slopes},
                         {"selected", sel.selected ? Json(to_string(*sel.selected)) : Json(nullptr)}};
    if (!sel.selected) {
      ok = false;
    } else {
      a2 = *sel.selected;
    }
  }
  if (g >= 2) b["a2_interpretation"] = to_string(a2);
  const ContinuumSweep sweep = continuum_sweep(ctx, g, a2, sweep_eps, cosine_test_function(), c.x0);
  b["continuum"] = {{"x", scalar_json(c.x0)},
                    {"eps", scalars_json(sweep.eps)},
                    {"errors", scalars_json(sweep.errors)},
                    {"slope", sweep.slope},
                    {"pass", sweep.slope >= 0.8}};
  ok = ok && sweep.slope >= 0.8;

  if (g == 1) {
    const std::vector<Scalar> eps = c.eps.empty() ? std::vector<Scalar>{Scalar("0.1"), Scalar("0.05")} : c.eps;
    const LameIndependenceReport rep = lame_curve_independence(ctx, eps, c.x0);
    Json per = Json::array();
    for (const auto& e : rep.per_eps) {
      per.push_back({{"eps", scalar_json(e.eps)},
                     {"newton_iterations", e.newton_iterations},
                     {"newton_residual", scalar_json(e.newton_residual)},
                     {"gamma0", scalar_json(e.gamma0)},
                     {"c", scalars_json(e.newton_curve)},
                     {"window_fit_residual", scalar_json(e.window_fit_residual)},
                     {"commutator_residual", scalar_json(e.commutator_residual)},
                     {"spectral_curve", scalars_json(e.spectral_curve)}});
      ok = ok && e.newton_residual <= Scalar("1e-8") && e.commutator_residual <= Scalar("1e-7");
    }
    b["independence"] = {{"per_eps", per},
                         {"cross_eps_deviation", residual_json(rep.cross_eps_deviation, Scalar("1e-4"))},
                         {"lame_curve_deviation", scalar_json(rep.lame_curve_deviation)}};
    ok = ok && rep.cross_eps_deviation <= Scalar("1e-4");
  }
  r.passed = ok;
  return r;
}

CommandResult cmd_rank2(const RunConfig& c) {
  const Rank2Report rep = verify_rank2();
  CommandResult r;
  Json samples = Json::array();
  for (const auto& s : rep.curve.samples) {
    samples.push_back({{"z", scalar_json(s.z)},
                       {"char_poly", scalars_json(s.char_poly)},
                       {"R", scalar_json(s.expected_r)},
                       {"mismatch", scalar_json(s.mismatch)}});
  }
  const Scalar comm_limit = std::min(c.tolerance, Scalar("1e-10"));
  r.body["params"] = {{"a2", scalar_json(rep.params.a2)},
                      {"a1", scalar_json(rep.params.a1)},
                      {"a0", scalar_json(rep.params.a0)}};
  r.body["window"] = window_json(rep.window);
  r.body["commutator"] = residual_json(rep.commutator_residual, comm_limit);
  r.body["curve_mismatch"] = residual_json(rep.curve.max_mismatch, Scalar("1e-7"));
  r.body["R_at_0"] = scalar_json(rep.r_at_0);
  r.body["R_at_1"] = scalar_json(rep.r_at_1);
  r.body["samples"] = samples;
  r.passed = rep.commutator_residual <= comm_limit && rep.curve.max_mismatch <= Scalar("1e-7");
  return r;
}

// ---------------------------------------------------------------------------

namespace {

struct Flags {
  std::string config_file;
  std::optional<unsigned> precision;
  std::optional<std::string> tolerance, window, z_interval, family, eps, x0, g2, g3, a2_interp, output;
  std::optional<int> g;
  std::map<std::string, std::string> params;
  std::optional<long> seed;
  bool rerun = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config_file, "JSON config file (RunConfig schema)");
  sub->add_option("--precision", f.precision, "working precision in bits (>= 53)");
  sub->add_option("--tolerance", f.tolerance, "relative tolerance (default 1e-9)");
  sub->add_option("--output", f.output, "report directory (default ./reports)");
  sub->add_flag("--rerun", f.rerun, "recompute even if a report for this config exists");
}

void add_family(CLI::App* sub, Flags& f) {
  sub->add_option("--family", f.family, "trig | poly | geom | elliptic");
  sub->add_option("--g", f.g, "genus");
  sub->add_option("--window", f.window, "index window lo,hi (default -24,24)");
  for (const char* p : {"r1", "a2", "a1", "a0", "a", "beta", "w-sign", "c2", "c1", "c0"}) {
    const std::string name = p;
    sub->add_option_function<std::string>(
        "--" + name, [&f, name](const std::string& v) { f.params[name] = v; }, "family parameter " + name);
  }
  sub->add_option("--seed", f.seed, "seed for the random gamma_n of the elliptic family");
}

RunConfig build_config(const std::string& command, const Flags& f) {
  RunConfig c;
  c.precision_bits = default_precision_bits();
  Json file;
  if (!f.config_file.empty()) {
    std::ifstream is(f.config_file);
    if (!is) throw UsageError("cannot read config file " + f.config_file);
    try {
      file = Json::parse(is);
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config file " + f.config_file + " is not valid JSON: " + e.what());
    }
    if (!file.is_object()) throw UsageError("config must be a JSON object");
    if (file.contains("precision_bits")) c.precision_bits = file.at("precision_bits").get<unsigned>();
  }
  if (f.precision) c.precision_bits = *f.precision;
  if (c.precision_bits < 53) {
    throw DomainError("precision_bits must be >= 53, got " + std::to_string(c.precision_bits));
  }
  // Scalars below are parsed at the final precision.
  const unsigned bits = c.precision_bits;
  set_precision_bits(bits);
  if (!file.is_null()) apply_config_json(file, c);
  c.precision_bits = bits;

  if (f.tolerance) c.tolerance = parse_scalar(*f.tolerance);
  if (f.window) c.window = parse_window(*f.window);
  if (f.z_interval) {
    const auto v = parse_scalar_list(*f.z_interval);
    if (v.size() != 2) throw UsageError("--z-interval needs lo,hi");
    c.z_interval = {v[0], v[1]};
  }
  if (f.output) c.output_path = *f.output;
  if (f.family) c.family.kind = family_kind_from_string(*f.family);
  if (f.g) c.family.g = *f.g;
  for (const auto& [k, v] : f.params) {
    c.family.params[k == "w-sign" ? "w_sign" : k] = parse_scalar(v);
  }
  if (f.seed) c.family.params["seed"] = Scalar(*f.seed);
  if (f.eps) c.eps = parse_scalar_list(*f.eps);
  if (f.x0) c.x0 = parse_scalar(*f.x0);
  if (f.g2) c.g2 = parse_scalar(*f.g2);
  if (f.g3) c.g3 = parse_scalar(*f.g3);
  if (f.a2_interp) c.a2_interpretation = a2_interpretation_from_string(*f.a2_interp);

  c.validate();
  if (command == "verify" || command == "curve" || command == "partner") c.family.validate();
  return c;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Commuting difference operators: verification and curve extraction"};
  app.require_subcommand(1);
  Flags f;

  auto* verify = app.add_subcommand("verify", "check the dressing identities and [L2, L2g+1] = 0 for a family");
  auto* curve = app.add_subcommand("curve", "extract the spectral curve of a family's commuting pair");
  auto* partner = app.add_subcommand("partner", "construct L_{2g+1} and write it as JSON");
  auto* lame = app.add_subcommand("lame", "discrete Lame operator: continuum limit and eps-independence");
  auto* rank2 = app.add_subcommand("rank2", "rank-two pair (L4, L6): commutation and spectral curve");
  for (auto* sub : {verify, curve, partner, lame, rank2}) add_common(sub, f);
  for (auto* sub : {verify, curve, partner}) add_family(sub, f);
  curve->add_option("--z-interval", f.z_interval, "z interval lo,hi for the Chebyshev nodes");
  lame->add_option("--g", f.g, "genus (default 1)");
  lame->add_option("--eps", f.eps, "comma-separated eps list");
  lame->add_option("--x0", f.x0, "lattice base point (default 0.73)");
  lame->add_option("--g2", f.g2, "invariant g2 (default 4)");
  lame->add_option("--g3", f.g3, "invariant g3 (default 0)");
  lame->add_option("--a2-interpretation", f.a2_interp,
                   "scalar-pair-only | all-terms-weighted | scalar-pair-flipped (default: select by slope)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const unsigned saved_bits = precision_bits();
  struct Restore {
    unsigned bits;
    ~Restore() { set_precision_bits(bits); }
  } restore{saved_bits};

  RunConfig c;
  try {
    c = build_config(command, f);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const Json config = config_json(c, command);
  const std::filesystem::path path = report_path(c, command);
  try {
    if (!f.rerun) {
      if (auto prior = last_report(path)) {
        const bool passed = prior->value("passed", false);
        out << "report " << path.string() << " exists (" << (passed ? "pass" : "fail")
            << "); use --rerun to recompute\n";
        if (prior->contains("error_kind") && prior->at("error_kind") == "usage") return kExitUsage;
        return passed ? kExitPass : kExitCheckFailure;
      }
    }
  } catch (const std::exception& e) {
    err << "error: unreadable report " << path.string() << ": " << e.what() << "\n";
    return kExitUsage;
  }

  Json record;
  record["config"] = config;
  int code = kExitPass;
  try {
    CommandResult res;
    if (command == "verify") res = cmd_verify(c);
    else if (command == "curve") res = cmd_curve(c);
    else if (command == "partner") res = cmd_partner(c);
    else if (command == "lame") res = cmd_lame(c);
    else res = cmd_rank2(c);
    record["result"] = std::move(res.body);
    record["passed"] = res.passed;
    code = res.passed ? kExitPass : kExitCheckFailure;
  } catch (const DomainError& e) {
    record["passed"] = false;
    record["error_kind"] = "usage";
    record["error"] = e.what();
    err << "error: " << e.what() << "\n";
    code = kExitUsage;
  } catch (const WindowError& e) {
    record["passed"] = false;
    record["error_kind"] = "usage";
    record["error"] = e.what();
    err << "error: " << e.what() << "\n";
    code = kExitUsage;
  } catch (const Error& e) {
    record["passed"] = false;
    record["error_kind"] = "check";
    record["error"] = e.what();
    err << "check failed: " << e.what() << "\n";
    code = kExitCheckFailure;
  }

  try {
    append_report(path, record);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  out << command << ": " << (code == kExitPass ? "PASS" : code == kExitCheckFailure ? "FAIL" : "ERROR")
      << "  report " << path.string() << "\n";
  return code;
}

}  // namespace poscomm::cli
