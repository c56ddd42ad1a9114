#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hexmpc/mlp.hpp"
#include "hexmpc/policy.hpp"
#include "hexmpc/rewards.hpp"
#include "hexmpc/rng.hpp"
#include "hexmpc/sim.hpp"

namespace hexmpc {

/// FIFO ring of transitions with uniform seeded sampling over the filled
/// region.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 100000);

  void push(Transition t);
  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t insert_count() const { return insert_count_; }

  /// Logical indexing, 0 = oldest retained transition.
  const Transition& operator[](std::size_t i) const { return data_[physical(i)]; }
  Transition& operator[](std::size_t i) { return data_[physical(i)]; }

  std::vector<std::uint32_t> sample_indices(rng::Stream& rng, int batch) const;

  std::string serialize() const;
  static ReplayBuffer deserialize(const std::string& bytes);
  void save(const std::string& path) const;
  static ReplayBuffer load(const std::string& path);

 private:
  std::size_t physical(std::size_t logical) const;
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::uint64_t insert_count_ = 0;
  std::vector<Transition> data_;
};

/// Recomputes the cached reward column reward_id from each transition's
/// stored features; bit-exact with direct recomputation.
void relabel(ReplayBuffer& buffer, const RewardTable& rewards, int reward_id);

struct SacConfig {
  double discount = 0.99;
  double temperature = 0.05;
  double temperature_final = -1.0;  // < 0 disables the linear anneal
  double kl_coeff = 0.1;            // epsilon of the conservative-update penalty
  double polyak = 0.005;            // target critic tracking factor, in (0, 1]
  int batch_size = 128;
  int gradient_steps_per_cycle = 40;
  int snapshot_interval = 10;  // policy updates between refreshes of the snapshot
  double critic_lr = 1e-3;
  double policy_lr = 3e-4;
  std::size_t buffer_capacity = 100000;

  void validate() const;
};

struct CriticStats {
  double loss = 0.0;
  double mean_target = 0.0;
};

struct PolicyStats {
  double loss = 0.0;         // negated pre-penalty objective
  double kl = 0.0;           // batch KL estimate against the snapshot
  double update_norm = 0.0;  // L2 norm of the applied parameter step
};

struct IterationStats {
  int iteration = 0;
  std::uint64_t total_samples = 0;
  double mean_reward = 0.0;  // mean episodic (per-cycle) reward
  double mean_kl = 0.0;
  double mean_critic_loss = 0.0;
  double mean_forward_disp = 0.0;  // body-frame forward displacement per cycle
  double mean_cycle_yaw = 0.0;     // heading change per cycle
};

/// Soft actor-critic over one primitive: twin critics with polyak targets,
/// tanh-squashed Gaussian policy updated by reparametrized gradients, and a
/// KL penalty against a periodically refreshed snapshot realized as a
/// proximal step-length damping (1 / (1 + epsilon * KL+)), so large penalties
/// yield conservative updates.
class SacTrainer {
 public:
  struct Batch {
    Eigen::VectorXd s;
    Eigen::MatrixXd a;  // 18 x B
    Eigen::VectorXd r;
    Eigen::VectorXd s_next;
    Eigen::VectorXd done;
    int size() const { return static_cast<int>(s.size()); }
  };

  SacTrainer(Primitive policy, RewardTable rewards, int reward_id, SacConfig config,
             std::uint64_t seed);

  Batch make_batch(const ReplayBuffer& buffer, const std::vector<std::uint32_t>& idx) const;
  Batch sample_batch(const ReplayBuffer& buffer);

  CriticStats critic_update(const Batch& batch);
  PolicyStats policy_update(const Batch& batch);

  /// Freezes the current policy as the KL reference.
  void snapshot_policy();

  /// Collects `cycles` stochastic cycles into the buffer, then runs the
  /// configured number of gradient steps.
  IterationStats run_iteration(const Simulator& sim, SimState& state, int cycles,
                               int steps_per_cycle, int iteration);

  const Primitive& policy() const { return policy_; }
  Primitive& policy() { return policy_; }
  const Primitive& snapshot() const { return snapshot_; }
  ReplayBuffer& buffer() { return buffer_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  const RewardTable& rewards() const { return rewards_; }
  int reward_id() const { return reward_id_; }
  const SacConfig& config() const { return config_; }

  Eigen::VectorXd policy_params() const;
  void set_policy_params(const Eigen::VectorXd& p);
  const Mlp& critic(int i) const { return i == 0 ? q1_ : q2_; }
  const Mlp& target_critic(int i) const { return i == 0 ? q1_target_ : q2_target_; }

  double temperature() const { return temperature_; }
  void set_temperature(double t) { temperature_ = t; }

  rng::Stream& exploration_rng() { return exploration_rng_; }

 private:
  Primitive policy_;
  Primitive snapshot_;
  RewardTable rewards_;
  int reward_id_;
  SacConfig config_;
  double temperature_;
  Mlp q1_, q2_, q1_target_, q2_target_;
  AdamState q1_opt_, q2_opt_, policy_opt_;
  ReplayBuffer buffer_;
  rng::Stream exploration_rng_;
  rng::Stream sample_rng_;
  rng::Stream update_rng_;
  std::int64_t policy_updates_ = 0;
};

/// Algorithm top loop for one primitive: per iteration, collect
/// cycles_per_iteration stochastic cycles and run the configured gradient
/// steps. on_iteration (optional) observes each finished iteration, so a
/// partial learning curve survives a simulator failure.
std::vector<IterationStats> train_primitive(
    const Simulator& sim, SimState& state, SacTrainer& trainer, int iterations,
    int cycles_per_iteration, int steps_per_cycle,
    const std::function<void(const IterationStats&)>& on_iteration = {});

}  // namespace hexmpc
