#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qedcs/errors.hpp"
#include "qedcs_app/config.hpp"
#include "qedcs_app/experiments.hpp"
#include "qedcs_app/results.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;

void print_summary(const qedcs::app::ResultTable& t, std::ostream& os) {
  std::size_t failed = 0;
  for (const auto& r : t.rows) {
    if (r.comparison == qedcs::app::Comparison::Info) continue;
    os << (r.pass ? "PASS " : "FAIL ") << r.experiment << " " << r.metric << " = " << qedcs::app::format_double(r.value);
    if (!r.parameters.empty()) os << " [" << r.parameters << "]";
    os << "\n";
    if (!r.pass) ++failed;
  }
  os << t.command << ": " << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed")
     << " (config " << t.config_hash << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernels, operators and identities of external-field QED on Cauchy surfaces"};
  app.require_subcommand(1);

  std::string config_path = "configs/default.json";
  std::optional<std::uint64_t> seed;
  bool quick = false;
  std::string out_dir = "results";

  for (const std::string& name : qedcs::app::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "Experiment config (JSON)")->capture_default_str();
    sub->add_option("--seed", seed, "Override the config seed");
    sub->add_flag("--quick", quick, "Use the quick profile");
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const qedcs::app::ExperimentConfig config = qedcs::app::load_config(config_path, quick, seed);
    const qedcs::app::ResultTable table = qedcs::app::run_command(command, config);
    qedcs::app::write_outputs(table, out_dir);
    print_summary(table, std::cout);
    return table.all_pass() ? kExitPass : kExitFail;
  } catch (const qedcs::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
