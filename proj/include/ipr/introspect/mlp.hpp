#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace ipr::introspect {

enum class OutputHead { kSigmoid, kSoftmax, kLinear };

// Small fully connected network: tanh hidden layers and a task head.
// Trained with plain SGD + momentum; everything seeded and single-threaded
// so identical configs produce bit-identical weights.
class Mlp {
 public:
  Mlp() = default;
  // layers = {in, hidden..., out}
  static Mlp init(const std::vector<int>& layers, OutputHead head, uint64_t seed);

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;

  // Forward pass with fixed per-layer hidden unit masks (1 keep / 0 drop);
  // kept activations are scaled by 1/keep_prob. Masks must match hidden
  // layer sizes.
  Eigen::VectorXd forward_masked(const Eigen::VectorXd& x,
                                 const std::vector<Eigen::VectorXd>& masks,
                                 double keep_prob) const;

  // One SGD step on a mini-batch; returns the batch loss (MSE for
  // sigmoid/linear heads, cross-entropy for softmax).
  double train_batch(const std::vector<Eigen::VectorXd>& xs,
                     const std::vector<Eigen::VectorXd>& ys, double lr, double momentum);

  double loss(const std::vector<Eigen::VectorXd>& xs,
              const std::vector<Eigen::VectorXd>& ys) const;

  const std::vector<int>& layers() const { return layers_; }
  OutputHead head() const { return head_; }
  size_t n_params() const;
  size_t param_bytes() const { return n_params() * sizeof(double); }

  std::string to_json() const;
  static Mlp from_json(const std::string& text);

  bool same_weights(const Mlp& other) const;

 private:
  std::vector<int> layers_;
  OutputHead head_ = OutputHead::kSigmoid;
  std::vector<Eigen::MatrixXd> w_;
  std::vector<Eigen::VectorXd> b_;
  std::vector<Eigen::MatrixXd> vw_;  // momentum buffers
  std::vector<Eigen::VectorXd> vb_;
};

Eigen::VectorXd softmax(const Eigen::VectorXd& z);

}  // namespace ipr::introspect
