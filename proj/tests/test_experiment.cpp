#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "asymp/error.hpp"
#include "asymp/experiment.hpp"

using namespace asymp;

namespace {

const std::set<std::string> kAll{"tile", "order", "entropy", "encode", "detect"};

Errc config_error_of(const Json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::EmptyResult;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Experiment, BuiltinsRoundTripThroughParse) {
  for (const auto& name : builtin_config_names()) {
    const ExperimentConfig cfg = load_config(name);
    EXPECT_EQ(cfg.name, name);
    EXPECT_EQ(cfg.echo, builtin_config(name));
  }
  EXPECT_EQ(load_config("tm-z-odometer", 7).seed, 7u);
}

TEST(Experiment, ConfigErrors) {
  Json j = builtin_config("tm-z-odometer");
  j["base"] = {4, 6};
  EXPECT_EQ(config_error_of(j), Errc::ConfigError);

  j = builtin_config("tm-z-odometer");
  j["group"] = "H3";
  EXPECT_EQ(config_error_of(j), Errc::ConfigError);

  j = builtin_config("tm-z-odometer");
  j["coder"]["levels"] = {2, 1};
  EXPECT_EQ(config_error_of(j), Errc::ConfigError);

  j = builtin_config("tm-z-odometer");
  j["tiling"]["sizes"] = j["base"] = {2, 6, 18};  // 2^2 does not divide 6
  j["top_level"] = 3;
  EXPECT_EQ(config_error_of(j), Errc::ConfigError);

  j = builtin_config("tm-z-odometer");
  j.erase("generator");
  EXPECT_EQ(config_error_of(j), Errc::ConfigError);

  j = builtin_config("tm-z-odometer");
  j["generator"]["region"]["lo"] = {0, 0};
  EXPECT_EQ(config_error_of(j), Errc::ConfigError);

  EXPECT_THROW(load_config("/nonexistent/config.json"), Error);

  j = builtin_config("tm-z-odometer");
  j["tiling"] = {{"builtin", "z2-dyadic"}, {"depth", 5}};
  const ExperimentConfig cfg = parse_config(j);
  try {
    resolve_tiling(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(exit_code_for(e.code()), 2);
  }
}

TEST(Experiment, PipelineExitCodes) {
  EXPECT_EQ(run_pipeline(load_config("tm-z-odometer"), kAll, std::nullopt).exit_status, 0);
  EXPECT_EQ(run_pipeline(load_config("z2xor-z2-dyadic"), kAll, std::nullopt).exit_status, 0);
  const RunReport full = run_pipeline(load_config("fullshift-z"), kAll, std::nullopt);
  EXPECT_EQ(full.exit_status, 3);
  EXPECT_NE(full.error.find("CodeOverflow"), std::string::npos);
  bool bound_failed = false;
  for (const auto& c : full.checks) bound_failed = bound_failed || (c.law == "entropy_bound" && !c.pass);
  EXPECT_TRUE(bound_failed);

  Json j = builtin_config("tm-z-odometer");
  j["anchor"] = {5000};
  EXPECT_EQ(run_pipeline(parse_config(j), kAll, std::nullopt).exit_status, 2);
}

TEST(Experiment, ArtifactsAreDeterministic) {
  const auto root = std::filesystem::temp_directory_path() / "asymp_determinism";
  std::filesystem::remove_all(root);
  const ExperimentConfig cfg = load_config("tm-z-odometer");
  const RunReport a = run_pipeline(cfg, kAll, (root / "a").string());
  const RunReport b = run_pipeline(cfg, kAll, (root / "b").string());
  EXPECT_EQ(a.artifacts, b.artifacts);
  EXPECT_EQ(dump_canonical(report_to_json(a, false)), dump_canonical(report_to_json(b, false)));
  for (const auto& name : {"spec.json", "order.json", "coded.json", "partitions.json"}) {
    EXPECT_EQ(slurp(root / "a" / name), slurp(root / "b" / name)) << name;
  }
  const RunReport c = run_pipeline(load_config("tm-z-odometer", 99), kAll, std::nullopt);
  EXPECT_EQ(c.exit_status, 0);
  std::filesystem::remove_all(root);
}

TEST(Experiment, VerifyScopeAndFault) {
  const RunReport all = verify_all({}, 1);
  EXPECT_EQ(all.exit_status, 0);
  std::set<std::string> modules;
  for (const auto& c : all.checks) modules.insert(c.module);
  EXPECT_EQ(modules.size(), module_names().size());

  const RunReport orders = verify_all({"orders"}, 1);
  for (const auto& c : orders.checks) EXPECT_EQ(c.module, "orders");
  EXPECT_FALSE(orders.checks.empty());

  const RunReport faulty = verify_all({"orders"}, 1, Fault::TranslationSign);
  EXPECT_EQ(faulty.exit_status, 1);
  std::vector<std::string> failing;
  for (const auto& c : faulty.checks)
    if (!c.pass) failing.push_back(c.module + "." + c.law);
  EXPECT_EQ(failing, std::vector<std::string>{"orders.translation_identity"});

  EXPECT_THROW(verify_all({"nope"}, 1), Error);
  EXPECT_THROW(parse_fault("sideways"), Error);
}
