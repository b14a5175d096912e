#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "pfadapt/harness.hpp"

namespace fs = std::filesystem;
using pfadapt::harness::ExperimentConfig;

namespace {

int cmd_run(const std::string& config_path, long long seed_override,
            int runs_override, const std::string& out_override) {
  ExperimentConfig cfg = pfadapt::harness::load_config(config_path);
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  if (runs_override > 0) cfg.runs = runs_override;
  if (!out_override.empty()) cfg.out = out_override;

  const auto rows = pfadapt::harness::run_table(cfg);
  pfadapt::harness::write_outputs(cfg, rows, cfg.out);
  std::cout << "wrote " << rows.size() << " rows to " << cfg.out << "\n";
  return 0;
}

int cmd_list(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    std::cerr << "no such directory: " << dir << "\n";
    return 1;
  }
  std::vector<fs::path> configs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".cfg") configs.push_back(entry.path());
  }
  std::sort(configs.begin(), configs.end());
  for (const auto& p : configs) {
    std::string first_comment;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("#", 0) == 0) {
        first_comment = line.substr(1);
        break;
      }
    }
    std::cout << p.string() << " -" << first_comment << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Block-adaptive bootstrap particle filter experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  long long seed_override = -1;
  int runs_override = 0;
  std::string out_override;
  auto* run = app.add_subcommand("run", "Run an experiment config, write CSV");
  run->add_option("--config", config_path, "config file path")->required();
  run->add_option("--seed", seed_override, "override base seed");
  run->add_option("--runs", runs_override, "override replicate count");
  run->add_option("--out", out_override, "override output CSV path");

  std::string list_dir = "configs";
  auto* list =
      app.add_subcommand("list-experiments", "List bundled experiment configs");
  list->add_option("--dir", list_dir, "directory to scan for .cfg files");

  std::string describe_path;
  auto* describe =
      app.add_subcommand("describe", "Print the resolved experiment grid");
  describe->add_option("--config", describe_path, "config file path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(config_path, seed_override, runs_override, out_override);
    }
    if (list->parsed()) return cmd_list(list_dir);
    if (describe->parsed()) {
      std::cout << pfadapt::harness::describe(
          pfadapt::harness::load_config(describe_path));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
