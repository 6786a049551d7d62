#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "gibbslab/run.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> dense_cap;
  std::vector<std::string> only;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Experiment config (JSON)")->required();
  cmd->add_option("--out", args.out_dir, "Output directory (overrides config)");
  cmd->add_option("--seed", args.seed, "Seed override");
  cmd->add_option("--dense-cap", args.dense_cap, "Dense superoperator cap override");
}

gibbslab::ExperimentConfig load(const CommonArgs& args) {
  gibbslab::ExperimentConfig cfg = gibbslab::load_config(args.config_path);
  if (args.seed) {
    cfg.sampling.seed = *args.seed;
    cfg.sampling.seed_set = true;
  }
  if (args.dense_cap) cfg.dense_cap = *args.dense_cap;
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  return cfg;
}

int report_failures(const gibbslab::RunResult& result) {
  if (result.exit_code == 2) {
    std::cerr << "error: " << result.report.value("error", "configuration error") << "\n";
    return 2;
  }
  if (result.report.contains("checks")) {
    for (const auto& check : result.report.at("checks")) {
      std::cout << (check.value("pass", false) ? "[pass] " : "[FAIL] ")
                << check.value("name", "?") << "\n";
      if (!check.value("pass", false) && check.contains("min_slack"))
        std::cout << "       min slack " << check.at("min_slack").get<double>() << "\n";
    }
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("GIBBSLAB_THREADS"))
    Eigen::setNbThreads(std::atoi(threads));

  CLI::App app{"gibbslab: Gibbs states, heat-bath dynamics, and entropy-decay certificates "
               "for commuting spin chains"};
  app.require_subcommand(1);

  CommonArgs args;
  auto* build_cmd = app.add_subcommand("build-gibbs", "Construct the Gibbs state and check its structure");
  add_common(build_cmd, args);
  auto* check_cmd = app.add_subcommand("check", "Run the configured property checks");
  add_common(check_cmd, args);
  check_cmd->add_option("--only", args.only, "Run only these checks")->delimiter(',');
  auto* mlsi_cmd = app.add_subcommand("estimate-mlsi", "Estimate MLSI and conditional MLSI quotients");
  add_common(mlsi_cmd, args);
  auto* scan_cmd = app.add_subcommand("mixing-scan", "h-norm decay across splittings");
  add_common(scan_cmd, args);
  auto* evolve_cmd = app.add_subcommand("evolve", "Trajectory table over the configured time grid");
  add_common(evolve_cmd, args);
  auto* certify_cmd = app.add_subcommand("certify", "Assemble the MLSI lower-bound certificate");
  add_common(certify_cmd, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    gibbslab::ExperimentConfig cfg = load(args);
    gibbslab::RunResult result;
    if (build_cmd->parsed()) {
      cfg.checks = {"gibbs-structure"};
      result = gibbslab::run_experiment(cfg, cfg.out_dir, &std::cout);
    } else if (check_cmd->parsed()) {
      if (!args.only.empty()) {
        for (const auto& c : args.only)
          if (!gibbslab::kKnownChecks.count(c))
            throw gibbslab::ConfigError("unknown check '" + c + "'");
        cfg.checks = args.only;
      }
      if (cfg.checks.empty())
        throw gibbslab::ConfigError("config lists no checks and --only not given");
      result = gibbslab::run_experiment(cfg, cfg.out_dir, &std::cout);
    } else if (mlsi_cmd->parsed()) {
      cfg.checks = {"mlsi"};
      if (cfg.geometry) cfg.checks.push_back("conditional-mlsi");
      result = gibbslab::run_experiment(cfg, cfg.out_dir, &std::cout);
    } else if (scan_cmd->parsed()) {
      result = gibbslab::run_mixing_scan(cfg, cfg.out_dir, &std::cout);
    } else if (evolve_cmd->parsed()) {
      result = gibbslab::run_evolve(cfg, cfg.out_dir, &std::cout);
    } else {
      cfg.checks = {"gibbs-structure", "mixing", "step1", "step2", "conditional-mlsi", "qf",
                    "assemble"};
      result = gibbslab::run_experiment(cfg, cfg.out_dir, &std::cout);
    }
    return report_failures(result);
  } catch (const gibbslab::CapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gibbslab::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
