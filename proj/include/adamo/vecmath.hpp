#pragma once

#include <Eigen/Dense>
#include <string>

#include "adamo/errors.hpp"

namespace adamo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

namespace detail {

inline void check_same_size(Index a, Index b, const char* op) {
  if (a != b) {
    throw DimensionError(std::string(op) + ": length mismatch (" +
                         std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace detail

// Inner product with a fixed left-to-right accumulation order. The reduction
// order is part of the contract: repeated calls are bit-identical.
template <typename DA, typename DB>
typename DA::Scalar dot(const Eigen::MatrixBase<DA>& a,
                        const Eigen::MatrixBase<DB>& b) {
  detail::check_same_size(a.size(), b.size(), "dot");
  typename DA::Scalar acc{0};
  for (Index i = 0; i < a.size(); ++i) {
    acc += a.derived().coeff(i) * b.derived().coeff(i);
  }
  return acc;
}

// Squared Euclidean norm; identical accumulation to dot(a, a).
template <typename DA>
typename DA::Scalar norm2(const Eigen::MatrixBase<DA>& a) {
  typename DA::Scalar acc{0};
  for (Index i = 0; i < a.size(); ++i) {
    const typename DA::Scalar x = a.derived().coeff(i);
    acc += x * x;
  }
  return acc;
}

// alpha * x + y
template <typename DX, typename DY>
Eigen::Vector<typename DX::Scalar, Eigen::Dynamic> axpy(
    typename DX::Scalar alpha, const Eigen::MatrixBase<DX>& x,
    const Eigen::MatrixBase<DY>& y) {
  detail::check_same_size(x.size(), y.size(), "axpy");
  return alpha * x.derived() + y.derived();
}

// Elementwise product.
template <typename DA, typename DB>
Eigen::Vector<typename DA::Scalar, Eigen::Dynamic> hadamard(
    const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  detail::check_same_size(a.size(), b.size(), "hadamard");
  return a.derived().cwiseProduct(b.derived());
}

template <typename DA>
bool all_finite(const Eigen::MatrixBase<DA>& a) {
  return a.derived().allFinite();
}

}  // namespace adamo
