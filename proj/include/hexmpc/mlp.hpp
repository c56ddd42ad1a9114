#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace hexmpc {

enum class Activation { relu, identity };

/// Fully connected network with 64-bit parameters stored in one flat vector.
/// Hidden layers use ReLU, the output layer is linear; callers apply any
/// output squashing themselves. Batches are column-per-sample matrices.
class Mlp {
 public:
  /// Caller-provided activation cache for one forward pass. A cache is
  /// single-use: backward consumes the pass it was filled by.
  struct Cache {
    Eigen::MatrixXd input;
    std::vector<Eigen::MatrixXd> pre;   // pre-activation per layer
    std::vector<Eigen::MatrixXd> post;  // post-activation per layer
    bool filled = false;
  };

  Mlp() = default;
  Mlp(std::vector<int> layer_sizes, std::uint64_t seed);

  int input_size() const { return sizes_.front(); }
  int output_size() const { return sizes_.back(); }
  const std::vector<int>& layer_sizes() const { return sizes_; }
  int layer_count() const { return static_cast<int>(sizes_.size()) - 1; }

  Eigen::VectorXd& params() { return params_; }
  const Eigen::VectorXd& params() const { return params_; }
  int param_count() const { return static_cast<int>(params_.size()); }

  Eigen::VectorXd forward(const Eigen::VectorXd& input) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input, Cache* cache = nullptr) const;

  /// Reverse-mode gradients for the pass recorded in cache. param_grad is
  /// accumulated into (resized/zeroed if empty); input_grad is optional.
  /// Throws if the cache was not filled by a forward pass.
  void backward(Cache& cache, const Eigen::MatrixXd& output_grad,
                Eigen::VectorXd& param_grad, Eigen::MatrixXd* input_grad = nullptr) const;

  Eigen::Map<const Eigen::MatrixXd> weight(int layer) const;
  Eigen::Map<const Eigen::VectorXd> bias(int layer) const;
  Eigen::Map<Eigen::MatrixXd> weight(int layer);
  Eigen::Map<Eigen::VectorXd> bias(int layer);

 private:
  std::vector<int> sizes_;
  std::vector<int> weight_offset_;
  std::vector<int> bias_offset_;
  Eigen::VectorXd params_;
};

/// Adaptive-moment gradient descent state (first/second moment accumulators
/// with bias correction).
class AdamState {
 public:
  AdamState() = default;
  AdamState(int param_count, double learning_rate = 3e-4, double beta1 = 0.9,
            double beta2 = 0.999, double epsilon = 1e-8);

  /// Computes the descent step for grad, updates the moments, and applies the
  /// step scaled by step_scale (1 = plain update). Throws std::runtime_error
  /// on non-finite gradients. Returns the applied step's L2 norm.
  double step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, double step_scale = 1.0);

  double learning_rate() const { return lr_; }
  void set_learning_rate(double lr) { lr_ = lr; }
  std::int64_t step_count() const { return t_; }

 private:
  Eigen::VectorXd m_, v_;
  std::int64_t t_ = 0;
  double lr_ = 3e-4;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
};

}  // namespace hexmpc
