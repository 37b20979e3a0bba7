#include "adamo/optimizer.hpp"

#include <cmath>

namespace adamo {

namespace {

void check_step_inputs(const ParamBlock& block, const Vector& grad,
                       const char* op) {
  if (grad.size() != block.values.size()) {
    throw DimensionError(std::string(op) + ": gradient size " +
                         std::to_string(grad.size()) + " != block '" +
                         block.name + "' size " +
                         std::to_string(block.values.size()));
  }
  if (!all_finite(grad)) {
    throw NumericError(std::string(op) + ": non-finite gradient for block '" +
                       block.name + "'");
  }
}

// Fills the rho/theta diagnostics by decomposing an applied update against
// the pre-step parameter vector.
void log_decomposed(StepInfo& info, const Vector& delta, const Vector& w_pre,
                    double eps_norm) {
  const Decomposition d = decompose(delta, w_pre, eps_norm);
  info.delta_rho_norm = std::sqrt(norm2(d.radial));
  info.delta_theta_norm = std::sqrt(norm2(d.tangential));
  info.delta_total_norm = std::sqrt(norm2(delta));
}

// Standard Adam update vector from the plain moments. The caller has already
// advanced st.t. The returned vector is scaled by `lr`.
Vector plain_adam_update(const Vector& g, BlockState& st,
                         const OptimizerConfig& cfg, double lr) {
  st.m_plain = cfg.beta1_theta * st.m_plain + (1.0 - cfg.beta1_theta) * g;
  st.v_plain =
      cfg.beta2_theta * st.v_plain + (1.0 - cfg.beta2_theta) * g.cwiseProduct(g);
  const double bc1 = 1.0 - std::pow(cfg.beta1_theta, double(st.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2_theta, double(st.t));
  const Vector m_hat = st.m_plain / bc1;
  const Vector v_hat = st.v_plain / bc2;
  const Vector denom = (v_hat.array().sqrt() + cfg.eps).matrix();
  return lr * m_hat.cwiseQuotient(denom);
}

// Curvature bookkeeping shared by the full and low-dim paths: advances the
// EMA unconditionally, then picks the radial step size.
void curvature_prelude(const Vector& grad, BlockState& st,
                       const OptimizerConfig& cfg, StepInfo& info) {
  curvature_update(st.curv, grad, cfg.beta_tau);
  if (cfg.enable_curvature) {
    bool capped = false;
    info.eta_rho_t = radial_lr(st.curv.tau, cfg.eta_rho, cfg.tau_target,
                               cfg.eps, cfg.radial_lr_cap, &capped);
    info.lr_capped = capped;
  } else {
    info.eta_rho_t = cfg.eta_rho;
  }
  info.tau = st.curv.tau;
}

// Low-dim fast path body (plain Adam scaled by alpha, no decay).
StepInfo lowdim_core(ParamBlock& block, const Vector& grad, BlockState& st,
                     const OptimizerConfig& cfg, StepInfo info,
                     StepVectors* dbg) {
  const Vector delta = plain_adam_update(grad, st, cfg, cfg.alpha * cfg.eta_theta);
  if (dbg) {
    dbg->w_pre = block.values;
    const Decomposition d = decompose(delta, block.values, cfg.eps_norm);
    dbg->delta_rho = d.radial;
    dbg->delta_theta = d.tangential;
  }
  log_decomposed(info, delta, block.values, cfg.eps_norm);
  block.values -= delta;
  return info;
}

}  // namespace

OptKind opt_kind_from_string(const std::string& s) {
  if (s == "adam") return OptKind::kAdam;
  if (s == "adamw") return OptKind::kAdamW;
  if (s == "adamp") return OptKind::kAdamP;
  if (s == "adamo") return OptKind::kAdamO;
  throw ConfigError("unknown optimizer '" + s + "'");
}

const char* to_string(OptKind k) {
  switch (k) {
    case OptKind::kAdam:
      return "adam";
    case OptKind::kAdamW:
      return "adamw";
    case OptKind::kAdamP:
      return "adamp";
    case OptKind::kAdamO:
      return "adamo";
  }
  return "?";
}

DecayMode decay_mode_from_string(const std::string& s) {
  if (s == "radial") return DecayMode::kRadial;
  if (s == "isotropic") return DecayMode::kIsotropic;
  throw ConfigError("unknown decay_mode '" + s + "'");
}

const char* to_string(DecayMode m) {
  return m == DecayMode::kRadial ? "radial" : "isotropic";
}

void OptimizerConfig::validate() const {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw ConfigError(msg);
  };
  require(eta_theta > 0.0, "eta_theta must be positive");
  require(eta_rho > 0.0, "eta_rho must be positive");
  require(lambda >= 0.0, "lambda must be nonnegative");
  require(beta1_theta >= 0.0 && beta1_theta < 1.0, "beta1_theta must be in [0,1)");
  require(beta2_theta >= 0.0 && beta2_theta < 1.0, "beta2_theta must be in [0,1)");
  require(beta1_rho >= 0.0 && beta1_rho < 1.0, "beta1_rho must be in [0,1)");
  require(beta_tau >= 0.0 && beta_tau < 1.0, "beta_tau must be in [0,1)");
  require(tau_target > 0.0, "tau_target must be positive");
  require(eps > 0.0, "eps must be positive");
  require(alpha > 0.0 && alpha <= 1.0, "alpha must be in (0,1]");
  require(dim_threshold >= 1, "dim_threshold must be at least 1");
  require(adamp_delta >= 0.0, "adamp_delta must be nonnegative");
  require(adamp_wd_ratio >= 0.0 && adamp_wd_ratio <= 1.0,
          "adamp_wd_ratio must be in [0,1]");
  require(radial_lr_cap > 0.0, "radial_lr_cap must be positive");
  require(eps_norm > 0.0, "eps_norm must be positive");
}

BlockState BlockState::init(Index numel, const OptimizerConfig& cfg) {
  BlockState st;
  st.m_rho = Vector::Zero(numel);
  st.m_theta = Vector::Zero(numel);
  st.v_theta = Vector::Zero(numel);
  st.m_plain = Vector::Zero(numel);
  st.v_plain = Vector::Zero(numel);
  st.curv = CurvatureState::init(numel, cfg.tau_target);
  st.t = 0;
  return st;
}

bool low_dim_predicate(const ParamBlock& block, const OptimizerConfig& cfg) {
  return block.logical_dim <= 1 || block.numel() < cfg.dim_threshold;
}

Vector radial_decay(const Vector& w, double eta_rho_t, double lambda) {
  const double rate = eta_rho_t * lambda;
  if (rate >= 1.0) {
    throw ConfigError("radial_decay: eta_rho_t*lambda must stay below 1");
  }
  return (1.0 - rate) * w;
}

StepInfo adamo_step(ParamBlock& block, const Vector& grad, BlockState& st,
                    const OptimizerConfig& cfg, StepVectors* dbg) {
  check_step_inputs(block, grad, "adamo_step");
  st.t += 1;

  StepInfo info;
  curvature_prelude(grad, st, cfg, info);

  if (cfg.enable_dimension && low_dim_predicate(block, cfg)) {
    return lowdim_core(block, grad, st, cfg, info, dbg);
  }

  const Vector& w = block.values;
  const Decomposition g_rt = decompose(grad, w, cfg.eps_norm);

  // First moments are re-projected onto the current subspaces before the EMA
  // update; the second moment is accumulated as-is.
  st.m_rho = cfg.beta1_rho * project_radial(st.m_rho, w, cfg.eps_norm) +
             (1.0 - cfg.beta1_rho) * g_rt.radial;
  st.m_theta = cfg.beta1_theta * project_tangential(st.m_theta, w, cfg.eps_norm) +
               (1.0 - cfg.beta1_theta) * g_rt.tangential;
  st.v_theta = cfg.beta2_theta * st.v_theta +
               (1.0 - cfg.beta2_theta) * g_rt.tangential.cwiseProduct(g_rt.tangential);

  const double bc1r = 1.0 - std::pow(cfg.beta1_rho, double(st.t));
  const double bc1t = 1.0 - std::pow(cfg.beta1_theta, double(st.t));
  const double bc2t = 1.0 - std::pow(cfg.beta2_theta, double(st.t));
  const Vector m_hat_rho = st.m_rho / bc1r;
  const Vector m_hat_theta = st.m_theta / bc1t;
  const Vector v_hat_theta = st.v_theta / bc2t;

  const Vector delta_rho =
      info.eta_rho_t * project_radial(m_hat_rho, w, cfg.eps_norm);
  const Vector denom = (v_hat_theta.array().sqrt() + cfg.eps).matrix();
  const Vector precond = m_hat_theta.cwiseQuotient(denom);
  // The preconditioner breaks exact orthogonality, so the tangential step is
  // re-projected after preconditioning.
  const Vector delta_theta =
      cfg.eta_theta * project_tangential(precond, w, cfg.eps_norm);

  const bool theta_only = cfg.enable_projection && block.scale_invariant;
  const Vector delta =
      theta_only ? delta_theta : Vector(delta_rho + delta_theta);

  const double decay_lr =
      cfg.decay_mode == DecayMode::kRadial ? info.eta_rho_t : cfg.eta_theta;
  const double rate = decay_lr * cfg.lambda;
  if (rate >= 1.0) {
    throw ConfigError("adamo_step: decay step (lr*lambda) must stay below 1");
  }

  if (dbg) {
    dbg->w_pre = w;
    dbg->delta_rho =
        theta_only ? Vector(Vector::Zero(block.numel())) : delta_rho;
    dbg->delta_theta = delta_theta;
  }

  info.delta_rho_norm = theta_only ? 0.0 : std::sqrt(norm2(delta_rho));
  info.delta_theta_norm = std::sqrt(norm2(delta_theta));
  info.delta_total_norm = std::sqrt(norm2(delta));

  block.values = (1.0 - rate) * w - delta;
  return info;
}

StepInfo lowdim_step(ParamBlock& block, const Vector& grad, BlockState& st,
                     const OptimizerConfig& cfg) {
  check_step_inputs(block, grad, "lowdim_step");
  if (!low_dim_predicate(block, cfg)) {
    throw ConfigError("lowdim_step: block '" + block.name +
                      "' is not low-dimensional");
  }
  st.t += 1;
  StepInfo info;
  curvature_prelude(grad, st, cfg, info);
  return lowdim_core(block, grad, st, cfg, info, nullptr);
}

StepInfo adam_step(ParamBlock& block, const Vector& grad, BlockState& st,
                   const OptimizerConfig& cfg) {
  check_step_inputs(block, grad, "adam_step");
  st.t += 1;
  StepInfo info;
  Vector delta;
  if (cfg.lambda != 0.0) {
    // coupled L2: decay enters the moments through the gradient
    const Vector g_eff = grad + cfg.lambda * block.values;
    delta = plain_adam_update(g_eff, st, cfg, cfg.eta_theta);
  } else {
    delta = plain_adam_update(grad, st, cfg, cfg.eta_theta);
  }
  log_decomposed(info, delta, block.values, cfg.eps_norm);
  block.values -= delta;
  return info;
}

StepInfo adamw_step(ParamBlock& block, const Vector& grad, BlockState& st,
                    const OptimizerConfig& cfg) {
  check_step_inputs(block, grad, "adamw_step");
  st.t += 1;
  StepInfo info;
  const Vector w_pre = block.values;
  if (cfg.lambda != 0.0) {
    block.values *= (1.0 - cfg.eta_theta * cfg.lambda);
  }
  const Vector delta = plain_adam_update(grad, st, cfg, cfg.eta_theta);
  log_decomposed(info, delta, w_pre, cfg.eps_norm);
  block.values -= delta;
  return info;
}

StepInfo adamp_step(ParamBlock& block, const Vector& grad, BlockState& st,
                    const OptimizerConfig& cfg) {
  check_step_inputs(block, grad, "adamp_step");
  st.t += 1;
  StepInfo info;
  const Vector w_pre = block.values;
  Vector delta = plain_adam_update(grad, st, cfg, cfg.eta_theta);

  // Projection heuristic: when the gradient is nearly orthogonal to the
  // parameters (cosine below delta/sqrt(numel), the scale-invariant
  // signature), constrain the update tangentially and soften the decay.
  const double norm_prod =
      std::sqrt(norm2(w_pre)) * std::sqrt(norm2(grad));
  const double cosine =
      std::abs(dot(w_pre, grad)) / std::max(norm_prod, cfg.eps);
  double wd_scale = 1.0;
  if (cosine < cfg.adamp_delta / std::sqrt(double(block.numel()))) {
    delta = project_tangential(delta, w_pre, cfg.eps_norm);
    wd_scale = cfg.adamp_wd_ratio;
  }
  if (cfg.lambda != 0.0) {
    block.values *= (1.0 - cfg.eta_theta * cfg.lambda * wd_scale);
  }
  log_decomposed(info, delta, w_pre, cfg.eps_norm);
  block.values -= delta;
  return info;
}

Optimizer::Optimizer(OptKind kind, OptimizerConfig cfg)
    : kind_(kind), cfg_(cfg) {
  cfg_.validate();
}

void Optimizer::attach(const std::vector<ParamBlock>& blocks) {
  states_.clear();
  states_.reserve(blocks.size());
  for (const auto& b : blocks) {
    states_.push_back(BlockState::init(b.numel(), cfg_));
  }
}

std::vector<StepInfo> Optimizer::step(std::vector<ParamBlock>& blocks,
                                      const std::vector<Vector>& grads,
                                      std::vector<StepVectors>* dbg) {
  if (states_.size() != blocks.size()) {
    throw ConfigError("Optimizer::step called before attach()");
  }
  if (grads.size() != blocks.size()) {
    throw DimensionError("Optimizer::step: one gradient per block required");
  }
  if (dbg) dbg->resize(blocks.size());

  std::vector<StepInfo> infos(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    StepVectors* d = dbg ? &(*dbg)[i] : nullptr;
    switch (kind_) {
      case OptKind::kAdam:
        infos[i] = adam_step(blocks[i], grads[i], states_[i], cfg_);
        break;
      case OptKind::kAdamW:
        infos[i] = adamw_step(blocks[i], grads[i], states_[i], cfg_);
        break;
      case OptKind::kAdamP:
        infos[i] = adamp_step(blocks[i], grads[i], states_[i], cfg_);
        break;
      case OptKind::kAdamO:
        infos[i] = adamo_step(blocks[i], grads[i], states_[i], cfg_, d);
        break;
    }
  }
  return infos;
}

}  // namespace adamo
