#pragma once

// Command-line front end: configuration, report persistence and the five
// subcommands. Exit codes: 0 pass, 1 check failure, 2 usage or domain error.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "poscomm/families.hpp"
#include "poscomm/lame.hpp"
#include "poscomm/serialize.hpp"

namespace poscomm::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable that overrides the default working precision.
inline constexpr const char* kPrecisionEnv = "POSCOMM_PRECISION_BITS";

struct RunConfig {
  unsigned precision_bits = 113;
  Scalar tolerance = Scalar("1e-9");
  Window window{-24, 24};
  std::pair<Scalar, Scalar> z_interval{Scalar(-4), Scalar(4)};
  FamilySpec family;
  std::filesystem::path output_path = "reports";

  // lame
  Scalar g2 = Scalar(4), g3 = Scalar(0);
  std::vector<Scalar> eps;  ///< empty: per-genus default
  Scalar x0 = Scalar("0.73");
  std::optional<A2Interpretation> a2_interpretation;  ///< empty: select by slope

  void validate() const;
};

/// The part of the config that determines the result (everything but output_path).
Json config_json(const RunConfig& c, const std::string& command);
/// Fills fields present in `j` (same keys as config_json) into `c`.
void apply_config_json(const Json& j, RunConfig& c);

/// Default precision: POSCOMM_PRECISION_BITS if set, else 113.
unsigned default_precision_bits();

/// 16 hex digits of FNV-1a over the canonical config dump.
std::string config_hash(const Json& config);

/// Report file for a config: <output_path>/<command>-<hash>.jsonl.
std::filesystem::path report_path(const RunConfig& c, const std::string& command);

/// Appends one JSON line; earlier runs are never rewritten.
void append_report(const std::filesystem::path& path, const Json& record);
/// Last record of an existing report file, if any.
std::optional<Json> last_report(const std::filesystem::path& path);

struct CommandResult {
  Json body;
  bool passed = false;
};

CommandResult cmd_verify(const RunConfig& c);
CommandResult cmd_curve(const RunConfig& c);
CommandResult cmd_partner(const RunConfig& c);
CommandResult cmd_lame(const RunConfig& c);
CommandResult cmd_rank2(const RunConfig& c);

/// Parses argv, runs the subcommand, persists the report and returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace poscomm::cli
