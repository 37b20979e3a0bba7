#include "adamo/mlp.hpp"

#include <cmath>

namespace adamo {

MlpModel::MlpModel(int in_dim, int hidden_dim, int out_dim)
    : in_(in_dim), hidden_(hidden_dim), out_(out_dim) {
  if (in_dim < 1 || hidden_dim < 1 || out_dim < 1) {
    throw ConfigError("MlpModel: all layer sizes must be positive");
  }
  blocks_.resize(4);
  blocks_[0] = {"W1", Vector::Zero(Index(hidden_) * in_), 2, false};
  blocks_[1] = {"b1", Vector::Zero(hidden_), 1, false};
  blocks_[2] = {"W2", Vector::Zero(Index(out_) * hidden_), 2, false};
  blocks_[3] = {"b2", Vector::Zero(out_), 1, false};
}

void MlpModel::init_kaiming(Rng& rng) {
  auto fill_uniform = [&rng](Vector& v, double bound) {
    for (Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(-bound, bound);
  };
  fill_uniform(blocks_[0].values, std::sqrt(6.0 / in_));
  blocks_[1].values.setZero();
  fill_uniform(blocks_[2].values, std::sqrt(6.0 / hidden_));
  blocks_[3].values.setZero();
}

Eigen::Map<const Matrix> MlpModel::W1() const {
  return {blocks_[0].values.data(), hidden_, in_};
}
Eigen::Map<const Vector> MlpModel::b1() const {
  return {blocks_[1].values.data(), hidden_};
}
Eigen::Map<const Matrix> MlpModel::W2() const {
  return {blocks_[2].values.data(), out_, hidden_};
}
Eigen::Map<const Vector> MlpModel::b2() const {
  return {blocks_[3].values.data(), out_};
}

Matrix MlpModel::forward(const Matrix& X, Cache* cache) const {
  if (X.cols() != in_) {
    throw DimensionError("MlpModel::forward: input width " +
                         std::to_string(X.cols()) + " != " +
                         std::to_string(in_));
  }
  Matrix Z1 = X * W1().transpose();
  Z1.rowwise() += b1().transpose();
  Matrix H = Z1.cwiseMax(0.0);
  Matrix logits = H * W2().transpose();
  logits.rowwise() += b2().transpose();
  if (cache) {
    cache->X = X;
    cache->Z1 = std::move(Z1);
    cache->H = std::move(H);
  }
  return logits;
}

std::vector<Vector> MlpModel::backward(const Cache& cache,
                                       const Matrix& dlogits) const {
  if (cache.X.rows() != dlogits.rows() || cache.H.rows() != dlogits.rows() ||
      dlogits.cols() != out_ || cache.X.cols() != in_ ||
      cache.H.cols() != hidden_) {
    throw DimensionError("MlpModel::backward: cache/dlogits shape mismatch");
  }
  const Matrix dW2 = dlogits.transpose() * cache.H;
  const Vector db2 = dlogits.colwise().sum().transpose();
  const Matrix dH = dlogits * W2();
  const Matrix dZ1 =
      (cache.Z1.array() > 0.0).select(dH, Matrix::Zero(dH.rows(), dH.cols()));
  const Matrix dW1 = dZ1.transpose() * cache.X;
  const Vector db1 = dZ1.colwise().sum().transpose();

  std::vector<Vector> grads(4);
  grads[0] = Eigen::Map<const Vector>(dW1.data(), dW1.size());
  grads[1] = db1;
  grads[2] = Eigen::Map<const Vector>(dW2.data(), dW2.size());
  grads[3] = db2;
  return grads;
}

LossGrad cross_entropy_with_grad(const Matrix& logits,
                                 const std::vector<int>& targets) {
  const Index n = logits.rows();
  const Index k = logits.cols();
  if (n == 0 || k == 0) {
    throw DimensionError("cross_entropy_with_grad: empty logits");
  }
  if (Index(targets.size()) != n) {
    throw DimensionError("cross_entropy_with_grad: one target per row required");
  }
  if (!logits.allFinite()) {
    throw NumericError("cross_entropy_with_grad: non-finite logits");
  }

  LossGrad out;
  out.dlogits.resize(n, k);
  double loss_sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    const int t = targets[std::size_t(i)];
    if (t < 0 || Index(t) >= k) {
      throw DimensionError("cross_entropy_with_grad: target out of range");
    }
    const double row_max = logits.row(i).maxCoeff();
    double sum_exp = 0.0;
    for (Index j = 0; j < k; ++j) {
      sum_exp += std::exp(logits(i, j) - row_max);
    }
    const double lse = row_max + std::log(sum_exp);
    loss_sum += lse - logits(i, t);
    for (Index j = 0; j < k; ++j) {
      const double p = std::exp(logits(i, j) - lse);
      out.dlogits(i, j) = (p - (Index(t) == j ? 1.0 : 0.0)) / double(n);
    }
  }
  out.loss = loss_sum / double(n);
  return out;
}

double accuracy(const Matrix& logits, const std::vector<int>& targets) {
  const Index n = logits.rows();
  if (n == 0) return 0.0;
  if (Index(targets.size()) != n) {
    throw DimensionError("accuracy: one target per row required");
  }
  Index correct = 0;
  for (Index i = 0; i < n; ++i) {
    Index arg = 0;
    logits.row(i).maxCoeff(&arg);
    if (arg == Index(targets[std::size_t(i)])) ++correct;
  }
  return double(correct) / double(n);
}

}  // namespace adamo
