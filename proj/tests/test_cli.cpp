#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qedcs/errors.hpp"
#include "qedcs_app/config.hpp"
#include "qedcs_app/experiments.hpp"
#include "qedcs_app/results.hpp"

namespace qedcs::app {
namespace {

namespace fs = std::filesystem;

const std::string kDefaultConfig = std::string(QEDCS_SOURCE_DIR) + "/configs/default.json";

nlohmann::json default_json() {
  std::ifstream in(kDefaultConfig);
  return nlohmann::json::parse(in);
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qedcs_test_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + QEDCS_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Config, DefaultConfigLoads) {
  const ExperimentConfig c = load_config(kDefaultConfig, false, std::nullopt);
  EXPECT_EQ(c.mass, 1.0);
  EXPECT_EQ(c.seed, 20240611u);
  EXPECT_EQ(c.u, FourVector(-1.0, 0.0, 0.0, 0.0));
  EXPECT_FALSE(c.raw.contains("quick"));
}

TEST(Config, QuickProfileMergesOverrides) {
  const ExperimentConfig c = load_config(kDefaultConfig, true, std::nullopt);
  EXPECT_TRUE(c.quick);
  EXPECT_EQ(c.raw["identities"]["samples"], 200);
  EXPECT_EQ(c.raw["identities"]["rapidity_max"], 1);
  EXPECT_NE(c.hash(), load_config(kDefaultConfig, false, std::nullopt).hash());
}

TEST(Config, HashIsDeterministicAndTracksTheSeed) {
  const ExperimentConfig a = load_config(kDefaultConfig, false, std::nullopt);
  const ExperimentConfig b = load_config(kDefaultConfig, false, std::nullopt);
  const ExperimentConfig c = load_config(kDefaultConfig, false, 7u);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.hash().size(), 16u);
  EXPECT_NE(a.hash(), c.hash());
  EXPECT_EQ(c.seed, 7u);
}

TEST(Config, Fnv1aReferenceValues) {
  EXPECT_EQ(fnv1a(""), 14695981039346656037ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Config, MalformedInputIsRejected) {
  const fs::path dir = scratch_dir("malformed");
  std::ofstream(dir / "bad.json") << "{ \"schema_version\": 1, ";
  EXPECT_THROW(load_config((dir / "bad.json").string(), false, std::nullopt), ConfigError);
  EXPECT_THROW(load_config((dir / "missing.json").string(), false, std::nullopt), ConfigError);

  nlohmann::json j = default_json();
  j["schema_version"] = 2;
  EXPECT_THROW(config_from_json(j, ".", false, std::nullopt), ConfigError);
  j = default_json();
  j["mass"] = "heavy";
  EXPECT_THROW(config_from_json(j, ".", false, std::nullopt), ConfigError);
}

TEST(Config, DiagnosticsNameTheJsonPath) {
  nlohmann::json j = default_json();
  j["dichotomy"]["N"] = {8, 12};
  const ExperimentConfig c = config_from_json(j, QEDCS_SOURCE_DIR, false, std::nullopt);
  try {
    run_dichotomy(c);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("dichotomy.N"), std::string::npos) << e.what();
  }
}

TEST(Config, RefinementListsMustIncrease) {
  nlohmann::json j = default_json();
  j["representative"]["N"] = {10, 8};
  const ExperimentConfig c = config_from_json(j, QEDCS_SOURCE_DIR, false, std::nullopt);
  EXPECT_THROW(run_representative(c), ConfigError);
}

TEST(Results, CsvQuotingAndLineEndings) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  ResultTable t;
  t.config_hash = "0123456789abcdef";
  t.rows.push_back(check_le("exp", "L=1;N=4", "metric", 0.5, 1.0));
  t.rows.push_back(check_range("exp", "x=1,y=2", "ranged", 3.0, 1.0, 2.0));
  const std::string csv = results_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find("\r\n")),
            "config_hash,experiment,parameters,metric,value,comparison,lower,upper,pass,elapsed_s");
  EXPECT_NE(csv.find("\"x=1,y=2\""), std::string::npos);
  EXPECT_NE(csv.find(",true,"), std::string::npos);
  EXPECT_NE(csv.find(",false,"), std::string::npos);
  std::size_t lines = 0;
  for (std::size_t p = csv.find("\r\n"); p != std::string::npos; p = csv.find("\r\n", p + 2)) ++lines;
  EXPECT_EQ(lines, 3u);
  EXPECT_FALSE(t.all_pass());
}

TEST(Results, DoublesRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17}) EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Results, ReadsTheValidationSet) {
  const auto ws = read_wset(std::string(QEDCS_SOURCE_DIR) + "/data/wset_v1.csv");
  ASSERT_EQ(ws.size(), 20u);
  for (const auto& w : ws) EXPECT_LT(w[0].imag(), 0.0);
  EXPECT_THROW(read_wset("/nonexistent/wset.csv"), ConfigError);
}

TEST(Cli, CommandListIsStable) {
  const std::vector<std::string> expected = {"verify-identities", "verify-bounds", "dichotomy",
                                             "representative",    "flow",          "oracle-crosscheck"};
  EXPECT_EQ(command_names(), expected);
}

TEST(Cli, SeedChangeKeepsVerdicts) {
  const ResultTable a = run_verify_bounds(load_config(kDefaultConfig, true, std::nullopt));
  const ResultTable b = run_verify_bounds(load_config(kDefaultConfig, true, 99u));
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].metric, b.rows[k].metric);
    EXPECT_EQ(a.rows[k].pass, b.rows[k].pass) << a.rows[k].metric;
  }
  EXPECT_NE(a.config_hash, b.config_hash);
}

TEST(Cli, ExitCodesAndOutputs) {
  const fs::path dir = scratch_dir("exit");
  EXPECT_EQ(run_cli("verify-identities --quick --config \"" + kDefaultConfig + "\" --out \"" + dir.string() + "\""), 0);
  EXPECT_TRUE(fs::exists(dir / "verify-identities.csv"));
  EXPECT_TRUE(fs::exists(dir / "verify-identities_series.csv"));
  EXPECT_TRUE(fs::exists(dir / "verify-identities.json"));
  const nlohmann::json report = nlohmann::json::parse(slurp(dir / "verify-identities.json"));
  EXPECT_TRUE(report.is_object());

  std::ofstream(dir / "bad.json") << "not json";
  EXPECT_EQ(run_cli("verify-identities --config \"" + (dir / "bad.json").string() + "\" --out \"" + dir.string() + "\""),
            1);
  EXPECT_EQ(run_cli("no-such-command"), 1);
}

}  // namespace
}  // namespace qedcs::app
