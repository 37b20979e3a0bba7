#pragma once

#include <cmath>

#include "adamo/vecmath.hpp"

namespace adamo {

// EMA of the squared change in successive gradients, used only to modulate
// the radial step size. Seeded at tau_target with a zero previous gradient.
struct CurvatureState {
  double tau = 1.0;
  Vector g_prev;

  static CurvatureState init(Index numel, double tau_target) {
    CurvatureState s;
    s.tau = tau_target;
    s.g_prev = Vector::Zero(numel);
    return s;
  }
};

// Advances the EMA with kappa = ||g - g_prev||^2 and returns kappa.
inline double curvature_update(CurvatureState& st, const Vector& g,
                               double beta_tau) {
  detail::check_same_size(g.size(), st.g_prev.size(), "curvature_update");
  if (!all_finite(g)) {
    throw NumericError("curvature_update: non-finite gradient");
  }
  const double kappa = norm2(g - st.g_prev);
  st.tau = beta_tau * st.tau + (1.0 - beta_tau) * kappa;
  st.g_prev = g;
  return kappa;
}

// eta_rho / sqrt(tau/tau_target + eps), clamped to cap*eta_rho. The raw
// formula amplifies by 1/sqrt(eps) as tau -> 0, which would destabilize the
// radial step; the cap bounds that regime. `capped`, when given, reports
// whether the clamp was active.
inline double radial_lr(double tau, double eta_rho, double tau_target,
                        double eps, double cap = 10.0,
                        bool* capped = nullptr) {
  if (tau_target <= 0.0) {
    throw ConfigError("radial_lr: tau_target must be positive");
  }
  if (tau < 0.0) {
    throw NumericError("radial_lr: tau must be nonnegative");
  }
  const double raw = eta_rho / std::sqrt(tau / tau_target + eps);
  const double hi = cap * eta_rho;
  if (raw > hi) {
    if (capped) *capped = true;
    return hi;
  }
  if (capped) *capped = false;
  return raw;
}

}  // namespace adamo
