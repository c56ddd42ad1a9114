#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hexmpc/geometry.hpp"
#include "hexmpc/sim.hpp"

namespace hexmpc {

/// Weights of the low-level step rewards. com_weight and orientation_weight
/// follow the feature packing (lateral, forward, vertical) and (roll, pitch,
/// yaw).
struct RewardWeights {
  std::array<double, 3> com_weight{};
  std::array<double, 3> orientation_weight{};
  double joint_velocity_weight = 0.0;

  void validate() const;
};

/// Built-in weight sets: sim-forward, sim-turn, hw-forward, hw-turn.
RewardWeights reward_weights_by_name(const std::string& name);
std::vector<std::string> reward_weight_names();

/// w1 . dx  -  w2 . |theta|  -  w3 * qdot_abs_sum
double forward_reward(const StepFeatures& f, const RewardWeights& w);

/// -w1 . |dx|  -  w2 . |theta - theta_des|  -  w3 * qdot_abs_sum
double turn_reward(const StepFeatures& f, const RewardWeights& w,
                   const std::array<double, 3>& theta_des);

struct HighLevelGoal {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> theta;
  double orientation_weight = 1.0;
};

/// Negative Euclidean distance to the goal.
double hl_reward_sim(const Pose2& pose, const HighLevelGoal& goal);

/// Distance term plus weighted absolute heading error. Throws if the goal
/// has no target heading.
double hl_reward_hw(const Pose2& pose, const HighLevelGoal& goal);

/// One per-primitive reward definition. Turn rewards track a desired yaw that
/// ramps linearly over the cycle to cycle_yaw_target, so rewards are pure
/// functions of (features, phase) and stored transitions can be relabeled
/// exactly.
struct RewardSpec {
  enum class Kind { forward, turn, stand };
  Kind kind = Kind::forward;
  RewardWeights weights;
  double cycle_yaw_target = 0.0;
};

/// Reward definitions for every primitive in library order.
class RewardTable {
 public:
  static RewardTable standard(bool hardware_weights = false, double turn_target = 0.2);

  int size() const { return static_cast<int>(specs_.size()); }
  const RewardSpec& spec(int id) const { return specs_.at(id); }
  RewardSpec& spec(int id) { return specs_.at(id); }

  double compute(int id, const StepFeatures& f, double phase) const;
  std::vector<double> compute_all(const StepFeatures& f, double phase) const;

 private:
  std::vector<RewardSpec> specs_;
};

}  // namespace hexmpc
