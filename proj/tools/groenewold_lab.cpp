#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "groenewold/config.hpp"
#include "groenewold/error.hpp"
#include "groenewold/presets.hpp"
#include "groenewold/run.hpp"

int main(int argc, char** argv) {
  using namespace groenewold;

  CLI::App app{"Quantum, classical and intermediate dynamics of radial oscillator Hamiltonians"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset;
  std::string out_dir = ".";
  bool validate_only = false;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "run an experiment configuration");
  run->add_option("config", config_path, "JSON configuration (merged over --preset when both are given)");
  run->add_option("--out", out_dir, "output directory")->capture_default_str();
  run->add_option("--preset", preset, "bundled preset to start from");
  run->add_flag("--validate-only", validate_only, "only cross-validate the generators");
  run->add_flag("-q,--quiet", quiet, "no progress output");

  auto* list = app.add_subcommand("presets", "list bundled presets");
  std::string show;
  list->add_option("name", show, "print this preset");

  CLI11_PARSE(app, argc, argv);

  if (*list) {
    for (const auto& p : bundled_presets()) {
      if (show.empty()) std::cout << p.name << '\n';
      else if (p.name == show) {
        std::cout << p.json;
        return kExitOk;
      }
    }
    if (!show.empty()) {
      std::cerr << "unknown preset '" << show << "'\n";
      return kExitConfig;
    }
    return kExitOk;
  }

  if (config_path.empty() && preset.empty()) {
    std::cerr << "run: give a configuration file, --preset, or both\n";
    return kExitConfig;
  }
  ExperimentConfig config;
  try {
    config = load_config(config_path, preset);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }

  RunOptions options;
  options.out_dir = out_dir;
  options.validate_only = validate_only;
  options.log = quiet ? nullptr : &std::cerr;
  const RunResult result = run_experiment(config, options);
  if (!quiet) {
    for (const auto& f : result.files) std::cerr << "wrote " << f << '\n';
  }
  return result.exit_code;
}
