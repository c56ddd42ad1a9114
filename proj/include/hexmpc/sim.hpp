#pragma once

#include <cstdint>
#include <vector>

#include "hexmpc/geometry.hpp"
#include "hexmpc/policy.hpp"
#include "hexmpc/robot.hpp"

namespace hexmpc {

struct SimConfig {
  double dt = 0.02;                // seconds per step
  double contact_height = -0.12;   // body-frame foot z below which a foot is in stance
  double slip = 0.1;               // fraction of stance motion lost, in [0, 1)
  std::array<double, 3> noise_std = {0.002, 0.002, 0.005};  // per-step (dx, dy, dtheta)
  std::uint64_t seed = 0;

  void validate() const;
};

/// Raw per-step reward ingredients. delta_x_com is the realized body
/// displacement in the pre-step body frame, packed as (lateral, forward,
/// vertical); the vertical channel is identically zero in this planar
/// surrogate, as are roll and pitch. The yaw entry of theta_com is the
/// wrapped heading change since the start of the current cycle.
struct StepFeatures {
  std::array<double, 3> delta_x_com{};
  std::array<double, 3> theta_com{};
  double qdot_abs_sum = 0.0;
  int stance_count = 0;
};

struct SimState {
  Pose2 pose;
  JointState joints;
  std::uint64_t step_index = 0;  // also the noise-stream cursor
  double cycle_start_theta = 0.0;
};

/// One simulator step with everything needed to recompute any primitive's
/// reward later.
struct Transition {
  double s = 0.0;  // phase the action was taken at
  JointVector a{};
  StepFeatures features;
  double s_next = 0.0;
  bool done = false;
  std::vector<double> rewards;  // per-primitive cache, filled by the trainer
};

/// Least-squares planar rigid fit: finds (vx, vy, omega) minimizing
/// sum |v_i - (v + omega x p_i)|^2 over the given body-frame points. Falls
/// back to the translation-only fit (omega = 0) when the geometry makes the
/// rotation unobservable.
struct PlanarTwist {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;
};
PlanarTwist fit_planar_twist(const std::vector<std::array<double, 2>>& points,
                             const std::vector<std::array<double, 2>>& velocities);

std::array<bool, kLegCount> stance_flags(const RobotModel& model, const JointVector& q,
                                         double contact_height);

struct CycleResult {
  SimState state;
  std::vector<Transition> transitions;
  DeltaPose delta;
  double mean_log_prob = 0.0;
};

/// Deterministic planar surrogate. Feet below the contact height anchor the
/// body: the body twist is the negated least-squares rigid fit of the stance
/// feet's apparent motion, scaled by (1 - slip), plus seeded Gaussian noise.
/// States are values; step is a pure transition function.
class Simulator {
 public:
  Simulator(SimConfig config, RobotModel model);

  const SimConfig& config() const { return config_; }
  const RobotModel& model() const { return model_; }

  SimState reset(const Pose2& initial_pose) const;
  std::pair<SimState, StepFeatures> step(const SimState& state, const JointVector& qdot_des) const;

  /// Executes one full primitive cycle of T steps, routing desired joints
  /// through the velocity feedback law. Returns per-step transitions (reward
  /// cache left empty) and the cycle-level body-frame displacement.
  CycleResult run_cycle(const SimState& state, const Primitive& primitive, int steps_per_cycle,
                        ActMode mode, rng::Stream& rng) const;

 private:
  SimConfig config_;
  RobotModel model_;
};

}  // namespace hexmpc
