#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "adamo/optimizer.hpp"

namespace adamo {

enum class TaskKind { kGrokking, kToy2d, kQuadratic };

TaskKind task_kind_from_string(const std::string& s);
const char* to_string(TaskKind t);

// Full description of one experiment. Sources are merged with precedence
// CLI overrides > config file > defaults; unknown keys are rejected.
struct ExperimentConfig {
  TaskKind task = TaskKind::kGrokking;
  OptKind optimizer = OptKind::kAdamO;
  OptimizerConfig opt;

  long epochs = 5000;
  long batch_size = 512;
  std::uint64_t seed = 1;
  long eval_every = 1;
  std::string out_dir = "out";

  // grokking task
  int p = 97;
  double split_fraction = 0.3;
  int hidden = 128;

  // toy2d task
  int n_points = 400;
  double noise = 0.15;

  // quadratic task
  int quad_dim = 16;
  double quad_scale = 1.0;

  double grok_threshold = 0.95;
  double divergence_threshold = 1e6;
  bool export_data = false;
  bool save_checkpoint = true;

  void validate() const;

  // Canonical flat key=value rendering (fixed key order); this is the text
  // embedded in checkpoints and echoed into summaries.
  std::string to_text() const;
  nlohmann::json to_json() const;

  // Applies one key=value assignment; throws ConfigError on unknown keys or
  // unparsable values. "lr" is an alias that sets eta_theta and, unless
  // eta_rho is assigned explicitly anywhere, eta_rho as well.
  static ExperimentConfig from_file(const std::string& path,
                                    const std::vector<std::string>& overrides);
  static ExperimentConfig from_text(const std::string& text,
                                    const std::vector<std::string>& overrides);
};

}  // namespace adamo
