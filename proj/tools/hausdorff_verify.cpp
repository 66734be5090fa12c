#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hausdorff/experiments.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"verification harness for weighted averaging-operator bounds"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  long long seed = 0;
  CLI::App* run = app.add_subcommand("run", "run one experiment from a config");
  run->add_option("--config", config_path, "experiment config (JSON)")
      ->required();
  run->add_option("--out", out_dir, "output directory (default: out)");
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "override the config seed");
  CLI::App* list = app.add_subcommand("list", "print experiment names");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const std::string& name : hausdorff::experiment_names()) {
      std::cout << name << '\n';
    }
    return 0;
  }

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "config: cannot open " << config_path << '\n';
    return 2;
  }
  hausdorff::json config;
  try {
    config = hausdorff::json::parse(in, nullptr, true, true);
  } catch (const hausdorff::json::exception& ex) {
    std::cerr << "config: " << config_path << ": " << ex.what() << '\n';
    return 2;
  }

  std::optional<long long> seed_override;
  if (seed_opt->count() > 0) seed_override = seed;

  try {
    hausdorff::ReportBundle bundle = hausdorff::run_experiment(
        config, fs::path(config_path).parent_path(), seed_override);
    hausdorff::write_bundle(bundle, out_dir);
    for (const hausdorff::json& r : bundle.records) {
      if (r.at("kind") != "verdict") continue;
      std::cout << (r.at("pass").get<bool>() ? "pass  " : "FAIL  ")
                << r.at("name").get<std::string>() << '\n';
    }
    std::cout << (bundle.all_pass ? "ok" : "failed") << ": "
              << bundle.verdicts << " verdict(s), results in " << out_dir
              << '\n';
    return bundle.all_pass ? 0 : 1;
  } catch (const hausdorff::ConfigError& ex) {
    std::cerr << "config: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 3;
  }
}
