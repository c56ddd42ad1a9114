#include "hexmpc/rewards.hpp"

#include <cmath>
#include <stdexcept>

namespace hexmpc {

void RewardWeights::validate() const {
  for (double v : com_weight) {
    if (!std::isfinite(v)) throw std::invalid_argument("RewardWeights: non-finite weight");
  }
  for (double v : orientation_weight) {
    if (!std::isfinite(v)) throw std::invalid_argument("RewardWeights: non-finite weight");
  }
  if (!(joint_velocity_weight >= 0.0)) {
    throw std::invalid_argument("RewardWeights: joint velocity weight must be >= 0");
  }
}

RewardWeights reward_weights_by_name(const std::string& name) {
  RewardWeights w;
  if (name == "sim-forward") {
    w.com_weight = {-1.0, 5.0, -0.1};
    w.orientation_weight = {0.1, 0.1, 0.1};
    w.joint_velocity_weight = 0.01;
  } else if (name == "sim-turn") {
    w.com_weight = {0.1, 0.1, 0.1};
    w.orientation_weight = {0.1, 0.1, 20.0};
    w.joint_velocity_weight = 0.002;
  } else if (name == "hw-forward") {
    w.com_weight = {-50.0, 300.0, -10.0};
    w.orientation_weight = {1.0, 1.0, 1.0};
    w.joint_velocity_weight = 0.01;
  } else if (name == "hw-turn") {
    w.com_weight = {1.0, 1.0, 1.0};
    w.orientation_weight = {0.1, 0.1, 40.0};
    w.joint_velocity_weight = 0.002;
  } else {
    throw std::invalid_argument("unknown reward weight set: " + name);
  }
  return w;
}

std::vector<std::string> reward_weight_names() {
  return {"sim-forward", "sim-turn", "hw-forward", "hw-turn"};
}

double forward_reward(const StepFeatures& f, const RewardWeights& w) {
  double r = 0.0;
  for (int i = 0; i < 3; ++i) {
    r += w.com_weight[i] * f.delta_x_com[i];
    r -= w.orientation_weight[i] * std::fabs(f.theta_com[i]);
  }
  return r - w.joint_velocity_weight * f.qdot_abs_sum;
}

double turn_reward(const StepFeatures& f, const RewardWeights& w,
                   const std::array<double, 3>& theta_des) {
  double r = 0.0;
  for (int i = 0; i < 3; ++i) {
    r -= w.com_weight[i] * std::fabs(f.delta_x_com[i]);
    r -= w.orientation_weight[i] * std::fabs(f.theta_com[i] - theta_des[i]);
  }
  return r - w.joint_velocity_weight * f.qdot_abs_sum;
}

double hl_reward_sim(const Pose2& pose, const HighLevelGoal& goal) {
  return -planar_distance(pose, goal.x, goal.y);
}

double hl_reward_hw(const Pose2& pose, const HighLevelGoal& goal) {
  if (!goal.theta.has_value()) {
    throw std::invalid_argument("hl_reward_hw: goal has no target heading");
  }
  return hl_reward_sim(pose, goal) -
         goal.orientation_weight * std::fabs(angle_between(*goal.theta, pose.theta));
}

RewardTable RewardTable::standard(bool hardware_weights, double turn_target) {
  RewardTable t;
  RewardWeights fw = reward_weights_by_name(hardware_weights ? "hw-forward" : "sim-forward");
  RewardWeights tw = reward_weights_by_name(hardware_weights ? "hw-turn" : "sim-turn");
  t.specs_ = {
      RewardSpec{RewardSpec::Kind::forward, fw, 0.0},
      RewardSpec{RewardSpec::Kind::turn, tw, turn_target},
      RewardSpec{RewardSpec::Kind::turn, tw, -turn_target},
      RewardSpec{RewardSpec::Kind::stand, tw, 0.0},
  };
  return t;
}

double RewardTable::compute(int id, const StepFeatures& f, double phase) const {
  const RewardSpec& s = specs_.at(id);
  switch (s.kind) {
    case RewardSpec::Kind::forward:
      return forward_reward(f, s.weights);
    case RewardSpec::Kind::turn:
      return turn_reward(f, s.weights, {0.0, 0.0, s.cycle_yaw_target * phase});
    case RewardSpec::Kind::stand:
      return turn_reward(f, s.weights, {0.0, 0.0, 0.0});
  }
  throw std::logic_error("RewardTable::compute: bad kind");
}

std::vector<double> RewardTable::compute_all(const StepFeatures& f, double phase) const {
  std::vector<double> r(specs_.size());
  for (int i = 0; i < size(); ++i) r[i] = compute(i, f, phase);
  return r;
}

}  // namespace hexmpc
