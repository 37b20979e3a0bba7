#pragma once

#include "adamo/vecmath.hpp"

namespace adamo {

// Below this squared norm of the reference vector the decomposition is
// degenerate: the radial part is defined as zero and everything is routed
// tangentially, so learning can proceed from an all-zero block.
inline constexpr double kDefaultEpsNorm = 1e-24;

// Orthogonal split of a vector relative to a reference direction w.
// radial is parallel to w, tangential = input - radial.
struct Decomposition {
  Vector radial;
  Vector tangential;
};

namespace detail {

template <typename DZ, typename DW>
void check_projection_inputs(const Eigen::MatrixBase<DZ>& z,
                             const Eigen::MatrixBase<DW>& w, const char* op) {
  check_same_size(z.size(), w.size(), op);
  if (!all_finite(z) || !all_finite(w)) {
    throw NumericError(std::string(op) + ": non-finite input");
  }
}

}  // namespace detail

// Component of z along w: (<z,w>/<w,w>) * w, or zero when ||w||^2 < eps_norm.
template <typename DZ, typename DW>
Eigen::Vector<typename DZ::Scalar, Eigen::Dynamic> project_radial(
    const Eigen::MatrixBase<DZ>& z, const Eigen::MatrixBase<DW>& w,
    double eps_norm = kDefaultEpsNorm) {
  detail::check_projection_inputs(z, w, "project_radial");
  const auto wn = norm2(w);
  if (wn < eps_norm) {
    return Eigen::Vector<typename DZ::Scalar, Eigen::Dynamic>::Zero(z.size());
  }
  const auto coef = dot(z, w) / wn;
  return coef * w.derived();
}

// Residual of z after removing the radial part; always computed by
// subtraction so radial + tangential reconstructs z up to rounding.
template <typename DZ, typename DW>
Eigen::Vector<typename DZ::Scalar, Eigen::Dynamic> project_tangential(
    const Eigen::MatrixBase<DZ>& z, const Eigen::MatrixBase<DW>& w,
    double eps_norm = kDefaultEpsNorm) {
  return z.derived() - project_radial(z, w, eps_norm);
}

template <typename DZ, typename DW>
Decomposition decompose(const Eigen::MatrixBase<DZ>& z,
                        const Eigen::MatrixBase<DW>& w,
                        double eps_norm = kDefaultEpsNorm) {
  Decomposition d;
  d.radial = project_radial(z, w, eps_norm);
  d.tangential = z.derived() - d.radial;
  return d;
}

}  // namespace adamo
