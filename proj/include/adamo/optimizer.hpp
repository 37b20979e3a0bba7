#pragma once

#include <string>
#include <vector>

#include "adamo/curvature.hpp"
#include "adamo/geometry.hpp"
#include "adamo/param_block.hpp"

namespace adamo {

enum class DecayMode { kRadial, kIsotropic };
enum class OptKind { kAdam, kAdamW, kAdamP, kAdamO };

OptKind opt_kind_from_string(const std::string& s);
const char* to_string(OptKind k);
DecayMode decay_mode_from_string(const std::string& s);
const char* to_string(DecayMode m);

// Every scalar hyperparameter of the optimizer family plus the variant
// switches. The same struct configures all four optimizers; the baselines
// read eta_theta as their learning rate and lambda as their weight decay.
struct OptimizerConfig {
  double eta_theta = 8e-4;   // tangential learning rate
  double eta_rho = 5e-3;     // base radial learning rate
  double lambda = 2e-4;      // weight decay coefficient
  double beta1_theta = 0.9;  // tangential first-moment EMA rate
  double beta2_theta = 0.999;
  double beta1_rho = 0.9;   // radial first-moment EMA rate
  double beta_tau = 0.99;   // curvature EMA rate
  double tau_target = 1.0;  // target curvature scale
  double eps = 1e-8;
  double alpha = 1.0;         // low-dim stabilization factor, (0, 1]
  long dim_threshold = 8192;  // element-count threshold for the low-dim path
  DecayMode decay_mode = DecayMode::kRadial;
  bool enable_curvature = true;
  bool enable_projection = true;
  bool enable_dimension = true;
  double adamp_delta = 0.1;      // cosine threshold scale (AdamP baseline)
  double adamp_wd_ratio = 0.5;   // decay scale on AdamP's projected branch
  double radial_lr_cap = 10.0;   // bounds eta_rho_t at cap * eta_rho
  double eps_norm = 1e-24;       // degenerate-projection threshold

  void validate() const;  // throws ConfigError
};

// Per-block optimizer state. The projected moments serve the full
// decomposition path; the plain moments serve the low-dim fast path and the
// Adam-family baselines. A block only ever uses one of the two sets.
struct BlockState {
  Vector m_rho;     // radial first moment
  Vector m_theta;   // tangential first moment
  Vector v_theta;   // tangential second moment
  Vector m_plain;   // unprojected Adam first moment
  Vector v_plain;   // unprojected Adam second moment
  CurvatureState curv;
  long t = 0;

  static BlockState init(Index numel, const OptimizerConfig& cfg);
};

// Diagnostics for one applied step. The rho/theta norms refer to the applied
// update components: the decomposed update for the full path, and the
// realized update decomposed against the pre-step parameters otherwise.
struct StepInfo {
  double delta_rho_norm = 0.0;
  double delta_theta_norm = 0.0;
  double delta_total_norm = 0.0;
  double eta_rho_t = 0.0;
  double tau = 0.0;
  bool lr_capped = false;
};

// Optional capture of the raw update vectors, for tests and diagnostics.
struct StepVectors {
  Vector delta_rho;
  Vector delta_theta;
  Vector w_pre;
};

// True when a block takes the low-dim fast path: rank <= 1 or fewer
// elements than dim_threshold.
bool low_dim_predicate(const ParamBlock& block, const OptimizerConfig& cfg);

// (1 - eta_rho_t*lambda) * w; rescales the norm without rotating.
Vector radial_decay(const Vector& w, double eta_rho_t, double lambda);

StepInfo adamo_step(ParamBlock& block, const Vector& grad, BlockState& st,
                    const OptimizerConfig& cfg, StepVectors* dbg = nullptr);
StepInfo lowdim_step(ParamBlock& block, const Vector& grad, BlockState& st,
                     const OptimizerConfig& cfg);
StepInfo adam_step(ParamBlock& block, const Vector& grad, BlockState& st,
                   const OptimizerConfig& cfg);
StepInfo adamw_step(ParamBlock& block, const Vector& grad, BlockState& st,
                    const OptimizerConfig& cfg);
StepInfo adamp_step(ParamBlock& block, const Vector& grad, BlockState& st,
                    const OptimizerConfig& cfg);

// Owns per-block state and dispatches on the configured optimizer kind.
// Distinct blocks are independent; a single step call is not re-entrant.
class Optimizer {
 public:
  Optimizer(OptKind kind, OptimizerConfig cfg);

  // Builds zeroed states matching the given blocks. Must be called before
  // step(); tags and sizes are fixed from this point on.
  void attach(const std::vector<ParamBlock>& blocks);

  std::vector<StepInfo> step(std::vector<ParamBlock>& blocks,
                             const std::vector<Vector>& grads,
                             std::vector<StepVectors>* dbg = nullptr);

  OptKind kind() const { return kind_; }
  const OptimizerConfig& config() const { return cfg_; }
  std::vector<BlockState>& states() { return states_; }
  const std::vector<BlockState>& states() const { return states_; }

 private:
  OptKind kind_;
  OptimizerConfig cfg_;
  std::vector<BlockState> states_;
};

}  // namespace adamo
