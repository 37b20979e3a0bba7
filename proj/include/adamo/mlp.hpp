#pragma once

#include <vector>

#include "adamo/param_block.hpp"
#include "adamo/rng.hpp"

namespace adamo {

// Two-layer ReLU network with manually derived gradients. Parameters live in
// flat ParamBlocks (column-major matrix storage) so the optimizer can step
// them directly; W1/W2 are rank-2 blocks, b1/b2 rank-1.
class MlpModel {
 public:
  MlpModel(int in_dim, int hidden_dim, int out_dim);

  // Kaiming-uniform fan-in scaling on the weight matrices, zero biases.
  // Entries are drawn in block storage order.
  void init_kaiming(Rng& rng);

  int in_dim() const { return in_; }
  int hidden_dim() const { return hidden_; }
  int out_dim() const { return out_; }

  // Block order: W1, b1, W2, b2.
  std::vector<ParamBlock>& blocks() { return blocks_; }
  const std::vector<ParamBlock>& blocks() const { return blocks_; }

  Eigen::Map<const Matrix> W1() const;  // hidden x in
  Eigen::Map<const Vector> b1() const;
  Eigen::Map<const Matrix> W2() const;  // out x hidden
  Eigen::Map<const Vector> b2() const;

  struct Cache {
    Matrix X;   // n x in
    Matrix Z1;  // n x hidden, pre-activation
    Matrix H;   // n x hidden, post-ReLU
  };

  // Row-per-sample logits: W2*relu(W1*x + b1) + b2.
  Matrix forward(const Matrix& X, Cache* cache = nullptr) const;

  // Gradients for every block, aligned with blocks() order and flattening.
  std::vector<Vector> backward(const Cache& cache, const Matrix& dlogits) const;

 private:
  int in_, hidden_, out_;
  std::vector<ParamBlock> blocks_;
};

struct LossGrad {
  double loss = 0.0;
  Matrix dlogits;
};

// Mean softmax cross-entropy with the max-subtraction log-sum-exp;
// dlogits = (softmax - onehot) / n.
LossGrad cross_entropy_with_grad(const Matrix& logits,
                                 const std::vector<int>& targets);

// Fraction of rows whose argmax (first maximum wins) equals the target.
double accuracy(const Matrix& logits, const std::vector<int>& targets);

}  // namespace adamo
