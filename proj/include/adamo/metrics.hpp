#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "adamo/errors.hpp"

namespace adamo {

// Deterministic decimal rendering used for every numeric artifact
// ('.' separator, round-trippable precision).
std::string format_double(double v);

struct BlockMetrics {
  double w_norm = 0.0;
  double g_norm = 0.0;    // mean per-step gradient norm over the epoch
  double dw_rho = 0.0;    // sqrt of the epoch sum of squared radial updates
  double dw_theta = 0.0;  // sqrt of the epoch sum of squared tangential updates
  double dw_total = 0.0;  // sqrt of the epoch sum of squared total updates
};

struct MetricsRecord {
  long epoch = 0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double test_acc = 0.0;
  double grad_norm_global = 0.0;  // mean per-step global gradient norm
  double eta_rho_t = 0.0;
  double tau = 0.0;
  std::vector<BlockMetrics> blocks;
};

// Streams records to a CSV file. One header row, then one row per record;
// rows are newline-terminated and written in epoch order.
class MetricsWriter {
 public:
  MetricsWriter(const std::string& path,
                const std::vector<std::string>& block_names);

  void append(const MetricsRecord& rec);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::size_t n_blocks_;
  std::ofstream out_;
};

}  // namespace adamo
