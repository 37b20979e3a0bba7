#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adamo/config.hpp"
#include "adamo/param_block.hpp"
#include "adamo/rng.hpp"

namespace adamo {

struct RunSummary {
  double final_test_acc = 0.0;
  double final_train_acc = 0.0;
  double final_train_loss = 0.0;
  double initial_test_acc = 0.0;
  std::optional<long> grokking_epoch;
  bool diverged = false;
  std::map<std::string, double> final_norms;
  double final_norm_total = 0.0;
  long radial_lr_cap_hits = 0;
  std::string metrics_path;
  std::string checkpoint_path;  // empty when checkpointing is off

  nlohmann::json to_json(const ExperimentConfig& cfg) const;
};

// Deterministic training loop; writes metrics.csv, summary.json and (by
// default) checkpoint.bin into cfg.out_dir. Numeric divergence is recorded
// in the summary rather than thrown.
RunSummary run_experiment(const ExperimentConfig& cfg);

// First epoch whose accuracy strictly exceeds the threshold; the series must
// be ordered by epoch.
std::optional<long> grokking_epoch(
    const std::vector<std::pair<long, double>>& test_acc_series,
    double threshold);

// Losses on w0 + a*d1 + b*d2 for a, b on a symmetric grid over
// [-span, span]; grid(i, j) pairs a=coef(i) with b=coef(j), and the center
// coefficient of an odd grid is exactly zero.
Matrix landscape_slice(const Vector& w0,
                       const std::function<double(const Vector&)>& loss,
                       const Vector& dir1, const Vector& dir2, int grid_n,
                       double span);

// Grid coefficient for index i of an n-point axis spanning [-span, span].
double landscape_coef(int i, int grid_n, double span);

// Random direction with each block segment rescaled to that block's
// parameter norm (per-block filter normalization).
Vector filter_normalized_direction(const std::vector<ParamBlock>& blocks,
                                   Rng& rng);

// Rebuilds the run context from a checkpoint and writes an (a, b, loss) CSV
// for the training loss over a seeded filter-normalized 2D slice.
void landscape_from_checkpoint(const std::string& checkpoint_path, int grid_n,
                               double span, const std::string& out_csv);

struct SweepCell {
  std::string v1;
  std::string v2;
  double final_test_acc = 0.0;
  bool diverged = false;
};

struct SweepResult {
  std::string p1_name;
  std::string p2_name;
  std::vector<SweepCell> cells;  // row-major over (v1, v2)
};

// Runs every cell of a two-axis grid ("k1=a,b,c;k2=d,e") on top of the base
// config; cell runs reuse the base seed and skip checkpoint/data export.
// Divergent cells are recorded and the sweep continues.
SweepResult sensitivity_sweep(const std::string& base_config_text,
                              const std::vector<std::string>& overrides,
                              const std::string& grid_spec);

void write_sweep_csv(const SweepResult& result, const std::string& path);

}  // namespace adamo
