#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "asymp/asymptotic.hpp"
#include "asymp/coder.hpp"
#include "asymp/io.hpp"
#include "asymp/ordered_tiling.hpp"
#include "asymp/symbolic.hpp"
#include "asymp/tiling.hpp"

namespace asymp {

struct ProbeConfig {
  FiniteSubset K;
  Rational eps;
};

struct ExperimentConfig {
  std::string name;
  GroupKind group = GroupKind::IntLine;
  std::uint64_t seed = 0;
  SampleParams generator;  ///< seed is filled from the "generator" stream
  Json tiling;             ///< {builtin, sizes | depth} or {path} or {spec}
  std::string base_dir;    ///< resolves a relative tiling path
  std::vector<std::int64_t> base;
  int top_level = 1;
  GroupPoint anchor;
  std::vector<int> coder_levels;
  int depth = 1;
  Fill fill = Fill::Zeros;
  std::int64_t horizon = 0;
  int perturbed_pairs = 0;
  std::vector<ProbeConfig> probes;
  ScanBudget scan;
  DetectorOptions detector;
  Json echo;  ///< the config as read, canonicalized
};

/// Throws Error(ConfigError) (or MalformedSpec for an embedded spec) on any
/// schema, referential or divisibility problem.
ExperimentConfig parse_config(const Json& j, const std::string& base_dir = ".");

/// A builtin name ("tm-z-odometer", "fullshift-z", "z2xor-z2-dyadic") or a path.
ExperimentConfig load_config(const std::string& name_or_path, std::optional<std::uint64_t> seed_override = std::nullopt);

std::vector<std::string> builtin_config_names();
Json builtin_config(std::string_view name);

TilingSpec resolve_tiling(const ExperimentConfig& cfg);

struct CheckResult {
  std::string module;
  std::string law;
  bool pass = false;
  Json detail;
};

struct RunReport {
  std::string command;
  Json config;
  std::vector<CheckResult> checks;
  Json artifacts = Json::object();
  Json timings = Json::object();
  int exit_status = 0;
  std::string error;
};

/// Report as written to disk; `with_timings` false drops the only
/// nondeterministic field.
Json report_to_json(const RunReport& r, bool with_timings = true);

/// Pipeline stages: "tile", "order", "entropy", "encode", "detect".
/// Artifacts go to `out_dir` when given (created if needed).
RunReport run_pipeline(const ExperimentConfig& cfg, const std::set<std::string>& stages,
                       const std::optional<std::string>& out_dir, const std::string& command = "pipeline");

enum class Fault { None, TranslationSign };

Fault parse_fault(std::string_view name);

/// Property suites per module. Scope names: group_core, orders, tilings,
/// ordered_tilings, symbolic, asymptotic, extension_coder. Empty = all.
RunReport verify_all(const std::vector<std::string>& scope, std::uint64_t seed, Fault fault = Fault::None);

std::vector<std::string> module_names();

/// 2 for configuration errors, 3 for CodeOverflow, 1 otherwise.
int exit_code_for(Errc code) noexcept;

}  // namespace asymp
