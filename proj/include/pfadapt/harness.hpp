#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pfadapt/adapt.hpp"
#include "pfadapt/models.hpp"

namespace pfadapt::harness {

inline constexpr const char* kVersion = "0.1.0";

enum class Mode { Sweep, Adaptive, TwoPhase };

struct ExperimentConfig {
  std::string name = "experiment";
  std::string model = "growth1";  // lgss | growth1 | growth2 | lorenz63
  Mode mode = Mode::Sweep;
  int T = 1000;
  int runs = 100;
  std::uint64_t seed = 1;
  int W = 20;
  std::vector<int> K_list = {7};

  // sweep
  std::vector<long long> M_list = {256};
  // adaptive
  std::vector<int> M0_list = {16};
  std::vector<int> W_list;  // empty -> {W}
  // two-phase, pairs M1:M2 with the switch at T/2
  std::vector<std::pair<int, int>> phase_pairs;
  int M_ref = 1 << 17;  // surrogate reference size when no exact filter exists

  double p_low = 0.2;
  double p_high = 0.6;
  int M_min = 16;
  int M_max = 1 << 16;
  double scale = 2.0;
  std::string method = "uniformity-a";
  int last_windows = 50;

  std::vector<std::string> metrics;  // empty -> mode defaults
  std::string out = "results.csv";
  std::map<std::string, double> model_overrides;
};

ExperimentConfig load_config(const std::string& path);
std::unique_ptr<Model> make_model(const ExperimentConfig& cfg);
AssessMethod parse_method(const std::string& name);

struct GridCell {
  std::size_t index = 0;
  long long M = -1;  // sweep M, or adaptive M0
  int K = -1;
  int W = -1;
  int M1 = -1;  // two-phase only
  int M2 = -1;
};

std::vector<GridCell> make_grid(const ExperimentConfig& cfg);

// Deterministic, collision-free seed derivation per (base, cell, replicate).
std::vector<std::uint64_t> replicate_seeds(std::uint64_t base,
                                           std::uint64_t cell, int runs);

// Per-replicate metric values for one grid cell. Diverged replicates yield
// NaN entries.
using CellResults = std::map<std::string, std::vector<double>>;
CellResults run_cell(const ExperimentConfig& cfg, const GridCell& cell);

struct TableRow {
  std::string model;
  long long M = -1;
  int K = -1;
  int W = -1;
  std::string metric;
  double value = 0.0;
  double stderr_ = 0.0;
  int runs = 0;
  std::uint64_t seed = 0;
};

std::vector<TableRow> run_table(const ExperimentConfig& cfg);
std::string csv_string(const std::vector<TableRow>& rows);
std::string describe(const ExperimentConfig& cfg);

// Writes the CSV to `out_path` and a sidecar `<out_path>.meta.txt` with the
// resolved configuration and tool version.
void write_outputs(const ExperimentConfig& cfg,
                   const std::vector<TableRow>& rows,
                   const std::string& out_path);

}  // namespace pfadapt::harness
