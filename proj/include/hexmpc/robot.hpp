#pragma once

#include <array>
#include <span>

namespace hexmpc {

inline constexpr int kLegCount = 6;
inline constexpr int kJointCount = 18;

using JointVector = std::array<double, kJointCount>;
using Vec3 = std::array<double, 3>;

/// Kinematic description of a hexapod with three joints per leg: base yaw
/// about body-vertical at the hip mount, then shoulder and elbow pitch in the
/// leg's sagittal plane.
///
/// Joint zero convention: leg straight and horizontal, foot at radius
/// mount_radius + coxa + femur + tibia from the body center and at height
/// -body_height. Positive shoulder pitches the femur down; positive elbow
/// folds the tibia up relative to the femur line.
struct RobotModel {
  std::array<double, kLegCount> mount_angle{};
  double mount_radius = 0.25;
  double coxa = 0.06;
  double femur = 0.20;
  double tibia = 0.20;
  double body_height = 0.14;
  JointVector joint_min{};
  JointVector joint_max{};
  double joint_velocity_limit = 4.0;
  double kp = 8.0;
  double kd = 0.1;

  /// Index of the leg that mirrors leg i across the body x-axis.
  std::array<int, kLegCount> mirror_leg{};

  static RobotModel standard();
  void validate() const;

  int joint_of(int leg, int joint) const { return 3 * leg + joint; }
};

struct JointState {
  JointVector q{};
  JointVector qdot{};
};

/// Body-frame tibia-tip positions of all six legs.
std::array<Vec3, kLegCount> foot_positions(const RobotModel& model, const JointVector& q);

/// Joint-velocity feedback law: kp (q_des - q) - kd qdot + qff, clamped to
/// the per-joint velocity limit. Throws on non-finite input.
JointVector velocity_command(const RobotModel& model, const JointVector& q_des,
                             const JointVector& q, const JointVector& qdot,
                             const JointVector& qff);

JointState neutral_stance(const RobotModel& model);

}  // namespace hexmpc
