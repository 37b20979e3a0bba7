#pragma once

#include "adamo/geometry.hpp"

namespace adamo {

// f(w) = 0.5*||w||^2, grad = w.
inline double quadratic_objective(const Vector& w, Vector& grad) {
  grad = w;
  return 0.5 * norm2(w);
}

// Negative cosine similarity against a fixed anchor: f(w) = -<x,w>/(|x||w|).
// Zero-homogeneous in w, so the analytic gradient is orthogonal to w:
// grad = -phi_theta_w(x) / (|x||w|). Degenerate near-zero w yields (0, 0).
inline double scale_invariant_objective(const Vector& w, const Vector& x,
                                        Vector& grad) {
  detail::check_same_size(w.size(), x.size(), "scale_invariant_objective");
  const double wn2 = norm2(w);
  const double xn2 = norm2(x);
  if (wn2 < kDefaultEpsNorm || xn2 < kDefaultEpsNorm) {
    grad = Vector::Zero(w.size());
    return 0.0;
  }
  const double denom = std::sqrt(xn2) * std::sqrt(wn2);
  grad = -project_tangential(x, w) / denom;
  return -dot(x, w) / denom;
}

}  // namespace adamo
