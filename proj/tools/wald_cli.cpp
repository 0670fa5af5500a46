// Command-line front end. Exit codes: 0 ok, 1 usage, 2 configuration, 3 computation.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "wald/experiment.hpp"

namespace {

enum Exit : int { ok = 0, usage = 1, configuration = 2, computation = 3 };

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> method;
  std::optional<std::uint64_t> draws;
  std::optional<std::string> out;
  bool mc = false;
  bool print = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON configuration file (defaults reproduce the reference setup)");
  cmd->add_option("--seed", o.seed, "Base seed for Monte Carlo and cross-validation streams");
  cmd->add_option("--workers", o.workers, "Worker threads; never changes results")->check(CLI::PositiveNumber);
  cmd->add_option("--method", o.method, "Regret evaluation: exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  cmd->add_flag("--mc", o.mc, "Shorthand for --method mc")->excludes("--method");
  cmd->add_option("--draws", o.draws, "Monte Carlo draws per state")->check(CLI::PositiveNumber);
  cmd->add_option("-o,--out", o.out, "Output directory for CSV files");
  cmd->add_flag("--print", o.print, "Also write CSV contents to stdout");
}

wald::ExperimentConfig effective_config(const Overrides& o) {
  auto cfg = o.config_path.empty() ? wald::ExperimentConfig{} : wald::load_config(o.config_path);
  if (o.seed) cfg.seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (o.method) cfg.monte_carlo = *o.method == "mc";
  if (o.mc) cfg.monte_carlo = true;
  if (o.draws) cfg.draws = *o.draws;
  if (o.out) cfg.output_dir = *o.out;
  return cfg;
}

void write_outputs(const std::vector<wald::CsvFile>& files, const std::string& dir, bool print) {
  std::filesystem::create_directories(dir);
  for (const auto& f : files) {
    const auto path = std::filesystem::path(dir) / f.name;
    std::ofstream out(path, std::ios::binary);
    out << f.content;
    if (!out) throw std::runtime_error("cannot write " + path.string());
    std::cerr << "wrote " << path.string() << '\n';
    if (print) std::cout << f.content;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-sample regret evaluation of out-of-sample predictors"};
  app.require_subcommand(1);
  Overrides overrides;
  std::string chosen;
  for (const auto& name : wald::subcommand_names()) {
    auto* cmd = app.add_subcommand(name, "Run the " + name + " experiment");
    add_common(cmd, overrides);
    cmd->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    const auto cfg = effective_config(overrides);
    const auto files = wald::run_subcommand(chosen, cfg);
    write_outputs(files, cfg.output_dir, overrides.print);
  } catch (const wald::config_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return configuration;
  } catch (const std::exception& e) {
    std::cerr << "computation error: " << e.what() << '\n';
    return computation;
  }
  return ok;
}
