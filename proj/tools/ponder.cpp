// ponder: run, validate and list scenario configs.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ponder/cli/config.hpp"
#include "ponder/cli/runner.hpp"
#include "ponder/errors.hpp"

#ifndef PONDER_SCENARIO_DIR
#define PONDER_SCENARIO_DIR "scenarios"
#endif

namespace fs = std::filesystem;

namespace {

enum Exit { ok = 0, failure = 1, config_error = 2, numerical_error = 3 };

fs::path scenario_dir() {
  if (const char* d = std::getenv("PONDER_SCENARIO_DIR"); d && *d) return d;
  return PONDER_SCENARIO_DIR;
}

int guarded(const std::function<void()>& fn) {
  try {
    fn();
    return ok;
  } catch (const ponder::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const ponder::DomainError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return numerical_error;
  } catch (const ponder::TruncationError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return numerical_error;
  } catch (const ponder::StiffnessError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return numerical_error;
  } catch (const ponder::InfinitePeriodError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return numerical_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return failure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electron dynamics in moving ponderomotive potentials"};
  app.require_subcommand(1);

  std::string config;
  std::string output;
  unsigned workers = 0;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "Run a scenario config and write its outputs");
  run->add_option("config", config, "Scenario JSON file")->required();
  run->add_option("-o,--output", output, "Output directory (overrides the config)");
  run->add_option("-j,--workers", workers, "Worker threads, 0 = all cores")->capture_default_str();
  run->add_flag("-q,--quiet", quiet, "Only report errors");

  auto* validate = app.add_subcommand("validate", "Check a scenario config without running it");
  validate->add_option("config", config, "Scenario JSON file")->required();

  auto* list = app.add_subcommand("list-examples", "List the shipped scenario configs");

  CLI11_PARSE(app, argc, argv);

  if (*run) {
    return guarded([&] {
      const auto cfg = ponder::cli::load_config(config);
      ponder::cli::RunOptions opts;
      opts.output_dir = ponder::cli::resolve_output_dir(cfg, config, output);
      opts.workers = workers;
      opts.config_path = config;
      const auto report = ponder::cli::run(cfg, opts);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
      if (!quiet) {
        std::cout << "wrote " << report.files.size() << " files to " << opts.output_dir.string() << " in "
                  << report.manifest["wall_clock_s"].get<double>() << " s\n";
      }
    });
  }
  if (*validate) {
    return guarded([&] {
      const auto cfg = ponder::cli::load_config(config);
      std::cout << config << ": ok (" << ponder::cli::to_string(cfg.kind) << ", " << cfg.cases.size()
                << (cfg.cases.size() == 1 ? " case" : " cases") << ")\n";
    });
  }
  if (*list) {
    return guarded([&] {
      const fs::path dir = scenario_dir();
      if (!fs::is_directory(dir)) throw ponder::IOError("scenario directory " + dir.string() + " not found");
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() == ".json") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        std::string line = f.filename().string();
        try {
          const auto cfg = ponder::cli::load_config(f);
          line += "  [" + ponder::cli::to_string(cfg.kind) + "]  " + cfg.description;
        } catch (const std::exception& e) {
          line += "  (invalid: " + std::string(e.what()) + ")";
        }
        std::cout << line << "\n";
      }
    });
  }
  return ok;
}
