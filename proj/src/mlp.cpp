#include "hexmpc/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "hexmpc/rng.hpp"

namespace hexmpc {

Mlp::Mlp(std::vector<int> layer_sizes, std::uint64_t seed) : sizes_(std::move(layer_sizes)) {
  if (sizes_.size() < 2) {
    throw std::invalid_argument("Mlp: need at least input and output layer");
  }
  int total = 0;
  for (int l = 0; l + 1 < static_cast<int>(sizes_.size()); ++l) {
    weight_offset_.push_back(total);
    total += sizes_[l] * sizes_[l + 1];
    bias_offset_.push_back(total);
    total += sizes_[l + 1];
  }
  params_.setZero(total);
  rng::Stream stream(rng::derive(seed, rng::tag::critic_init));
  for (int l = 0; l < layer_count(); ++l) {
    double bound = 1.0 / std::sqrt(static_cast<double>(sizes_[l]));
    auto w = weight(l);
    for (int c = 0; c < w.cols(); ++c) {
      for (int r = 0; r < w.rows(); ++r) {
        w(r, c) = stream.uniform(-bound, bound);
      }
    }
    // biases stay zero
  }
}

Eigen::Map<const Eigen::MatrixXd> Mlp::weight(int layer) const {
  return {params_.data() + weight_offset_[layer], sizes_[layer + 1], sizes_[layer]};
}

Eigen::Map<const Eigen::VectorXd> Mlp::bias(int layer) const {
  return {params_.data() + bias_offset_[layer], sizes_[layer + 1]};
}

Eigen::Map<Eigen::MatrixXd> Mlp::weight(int layer) {
  return {params_.data() + weight_offset_[layer], sizes_[layer + 1], sizes_[layer]};
}

Eigen::Map<Eigen::VectorXd> Mlp::bias(int layer) {
  return {params_.data() + bias_offset_[layer], sizes_[layer + 1]};
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& input) const {
  return forward(Eigen::MatrixXd(input), nullptr).col(0);
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input, Cache* cache) const {
  if (input.rows() != input_size()) {
    throw std::invalid_argument("Mlp::forward: input size mismatch");
  }
  if (cache != nullptr) {
    cache->input = input;
    cache->pre.assign(layer_count(), {});
    cache->post.assign(layer_count(), {});
  }
  Eigen::MatrixXd act = input;
  for (int l = 0; l < layer_count(); ++l) {
    Eigen::MatrixXd pre = (weight(l) * act).colwise() + bias(l);
    if (cache != nullptr) {
      cache->pre[l] = pre;
    }
    if (l + 1 < layer_count()) {
      act = pre.cwiseMax(0.0);
    } else {
      act = std::move(pre);
    }
    if (cache != nullptr) {
      cache->post[l] = act;
    }
  }
  if (cache != nullptr) {
    cache->filled = true;
  }
  return act;
}

void Mlp::backward(Cache& cache, const Eigen::MatrixXd& output_grad,
                   Eigen::VectorXd& param_grad, Eigen::MatrixXd* input_grad) const {
  if (!cache.filled) {
    throw std::runtime_error("Mlp::backward: no cached forward pass");
  }
  if (output_grad.rows() != output_size() || output_grad.cols() != cache.input.cols()) {
    throw std::invalid_argument("Mlp::backward: output gradient shape mismatch");
  }
  if (param_grad.size() != params_.size()) {
    param_grad.setZero(params_.size());
  }
  Eigen::MatrixXd delta = output_grad;
  for (int l = layer_count() - 1; l >= 0; --l) {
    if (l + 1 < layer_count()) {
      delta = delta.cwiseProduct((cache.pre[l].array() > 0.0).cast<double>().matrix());
    }
    const Eigen::MatrixXd& below = l == 0 ? cache.input : cache.post[l - 1];
    Eigen::Map<Eigen::MatrixXd> wg(param_grad.data() + weight_offset_[l], sizes_[l + 1], sizes_[l]);
    Eigen::Map<Eigen::VectorXd> bg(param_grad.data() + bias_offset_[l], sizes_[l + 1]);
    wg.noalias() += delta * below.transpose();
    bg.noalias() += delta.rowwise().sum();
    if (l > 0 || input_grad != nullptr) {
      Eigen::MatrixXd next = weight(l).transpose() * delta;
      if (l == 0) {
        *input_grad = std::move(next);
      } else {
        delta = std::move(next);
      }
    }
  }
  cache.filled = false;
}

AdamState::AdamState(int param_count, double learning_rate, double beta1, double beta2,
                     double epsilon)
    : m_(Eigen::VectorXd::Zero(param_count)),
      v_(Eigen::VectorXd::Zero(param_count)),
      lr_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      eps_(epsilon) {}

double AdamState::step(Eigen::VectorXd& params, const Eigen::VectorXd& grad, double step_scale) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw std::invalid_argument("AdamState::step: size mismatch");
  }
  if (!grad.allFinite()) {
    throw std::runtime_error("AdamState::step: non-finite gradient (|g|_inf = " +
                             std::to_string(grad.cwiseAbs().maxCoeff()) + ")");
  }
  ++t_;
  m_ = beta1_ * m_ + (1.0 - beta1_) * grad;
  v_ = beta2_ * v_ + (1.0 - beta2_) * grad.cwiseProduct(grad);
  double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  Eigen::VectorXd step =
      (lr_ * step_scale / c1) * m_.cwiseQuotient(((v_ / c2).cwiseSqrt().array() + eps_).matrix());
  params -= step;
  return step.norm();
}

}  // namespace hexmpc
