// dwdm80: run, list and validate link-simulation scenarios.
//
//   dwdm80 run <config> [--out DIR] [--jobs N] [--seed S]
//   dwdm80 list
//   dwdm80 validate <config>
//   dwdm80 template <name>
//
// Exit status: 0 success, 1 model/runtime error, 2 configuration error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dwdm80/common/error.hpp"
#include "dwdm80/experiment/config.hpp"
#include "dwdm80/experiment/runner.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

using namespace dwdm80::experiment;

// A config argument of the form "builtin:<name>" selects a builtin template.
Scenario resolve(const std::string& arg) {
  const std::string prefix = "builtin:";
  if (arg.rfind(prefix, 0) == 0) {
    const std::string name = arg.substr(prefix.size());
    try {
      return parse_scenario(builtin_template(name));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("(builtin)", e.what());
    }
  }
  return load_scenario(arg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dwdm80: 80 km DWDM direct-detection link simulator"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = "results";
  std::size_t jobs = default_jobs();
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Run a scenario and write results.csv, snr_profile.csv, manifest.json");
  run->add_option("config", config, "Scenario JSON file (or builtin:<name>)")->required();
  run->add_option("--out", out_dir, "Output directory (results go to DIR/<id>/)");
  run->add_option("--jobs", jobs, "Worker threads (default: $DWDM80_JOBS or 1)")->check(CLI::PositiveNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Root seed, overrides the config");

  auto* list = app.add_subcommand("list", "List builtin scenario templates");

  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("config", config, "Scenario JSON file (or builtin:<name>)")->required();

  std::string name;
  auto* tmpl = app.add_subcommand("template", "Print a builtin template as JSON");
  tmpl->add_option("name", name, "Template name (see list)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*list) {
      for (const auto& n : builtin_names()) {
        const Scenario s = parse_scenario(builtin_template(n));
        std::cout << n << "\t" << axis_name(s.kind) << "\t" << s.series.size() << " series\n";
      }
      return 0;
    }
    if (*tmpl) {
      std::cout << to_json(parse_scenario(builtin_template(name))).dump(2) << "\n";
      return 0;
    }
    if (*validate) {
      const Scenario s = resolve(config);
      std::cout << "ok: " << s.id << " (" << to_string(s.kind) << ", " << s.series.size() << " series)\n";
      return 0;
    }
    const Scenario s = resolve(config);
    RunOptions opt;
    opt.out_dir = out_dir;
    opt.jobs = jobs;
    if (*seed_opt) opt.seed = seed;
    const RunSummary summary = run_scenario(s, opt);
    for (const auto& w : summary.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << summary.directory.string() << ": " << summary.rows << " rows\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    if (*tmpl) {
      std::cerr << "config error: " << e.what() << "\n";
      return kExitConfig;
    }
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
