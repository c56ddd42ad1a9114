#pragma once

#include <Eigen/Core>
#include <string>
#include <variant>

#include "hexmpc/mlp.hpp"
#include "hexmpc/rng.hpp"
#include "hexmpc/robot.hpp"

namespace hexmpc {

inline constexpr double kLogStdMin = -5.0;
inline constexpr double kLogStdMax = 2.0;

enum class ActMode { deterministic, stochastic };

/// Normalized cycle clock emitting the phase (k+1)/T in (0, 1], wrapping at
/// cycle end.
struct PhaseClock {
  int steps_per_cycle;
  int step = 0;

  explicit PhaseClock(int t);
  double tick();
  double phase_of(int k) const { return static_cast<double>(k + 1) / steps_per_cycle; }
};

/// Diagonal Gaussian over pre-squash space; actions are
/// center + half_span * tanh(u) per joint.
struct PolicyDist {
  JointVector mean{};
  JointVector log_std{};  // already clamped to [kLogStdMin, kLogStdMax]
};

/// Per-joint sine controller q_des(t) = amplitude * sin(2 pi t + phase) +
/// offset, with learnable exploration log-stds. The sinusoid lives in joint
/// angle space; for stochastic sampling its value is lifted through the
/// inverse squash so the deterministic action stays the plain sinusoid.
class SinusoidalPolicy {
 public:
  SinusoidalPolicy(JointVector joint_min, JointVector joint_max, double amplitude_bound);
  static SinusoidalPolicy random_init(const RobotModel& model, double amplitude_bound,
                                      std::uint64_t seed);

  JointVector amplitude{};
  JointVector phase{};
  JointVector offset{};
  JointVector log_std{};

  double amplitude_bound() const { return amplitude_bound_; }
  const JointVector& joint_min() const { return lo_; }
  const JointVector& joint_max() const { return hi_; }

  /// Raw sinusoid value (no clamping).
  JointVector value(double t) const;
  PolicyDist dist(double t) const;

  /// Projects amplitude/offset back into their bounds after a gradient step.
  void clamp_params();

  Eigen::VectorXd param_vector() const;  // [amplitude; phase; offset; log_std]
  void set_param_vector(const Eigen::VectorXd& p);

 private:
  JointVector lo_{};
  JointVector hi_{};
  double amplitude_bound_ = 0.6;
};

/// Phase-to-joint-targets network: 1 -> 64 -> 64 -> 36, the output split into
/// 18 pre-squash means and 18 log-stds.
class NeuralPolicy {
 public:
  NeuralPolicy(Mlp trunk, JointVector joint_min, JointVector joint_max);
  static NeuralPolicy random_init(const RobotModel& model, std::uint64_t seed);

  const Mlp& trunk() const { return trunk_; }
  Mlp& trunk() { return trunk_; }
  const JointVector& joint_min() const { return lo_; }
  const JointVector& joint_max() const { return hi_; }

  PolicyDist dist(double t) const;

 private:
  Mlp trunk_;
  JointVector lo_{};
  JointVector hi_{};
};

/// Holds whatever joint configuration the robot currently has.
struct StandPolicy {};

using Primitive = std::variant<SinusoidalPolicy, NeuralPolicy, StandPolicy>;

struct ActResult {
  JointVector q_des{};
  double log_prob = 0.0;  // meaningful in stochastic mode only
};

/// Evaluates a primitive at phase t in (0, 1]. Deterministic mode returns the
/// mean action; stochastic mode samples the tanh-squashed Gaussian and
/// reports its exact log-density. Throws std::invalid_argument for t outside
/// (0, 1].
ActResult act(const Primitive& primitive, double t, ActMode mode, rng::Stream& rng,
              const JointVector& current_q);

/// Reflects a sinusoidal gait across the body x-axis: swaps parameters
/// between mirrored legs and negates base-joint amplitude and offset.
/// mirror(mirror(p)) == p exactly. Throws for non-sinusoidal primitives.
SinusoidalPolicy mirror(const SinusoidalPolicy& policy, const RobotModel& model);
Primitive mirror(const Primitive& primitive, const RobotModel& model);

/// Versioned binary policy format (see docs/formats.md).
std::string serialize_policy(const Primitive& primitive);
Primitive deserialize_policy(const std::string& bytes);
void save_policy(const Primitive& primitive, const std::string& path);
Primitive load_policy(const std::string& path);

enum PrimitiveId : int {
  kPrimitiveForward = 0,
  kPrimitiveTurnLeft = 1,
  kPrimitiveTurnRight = 2,
  kPrimitiveStand = 3,
};
inline constexpr int kPrimitiveCount = 4;
const char* primitive_name(int id);
int primitive_id(const std::string& name);

/// Ordered micro-action library: forward, turn_left, turn_right (the mirror
/// of turn_left), stand.
struct PrimitiveLibrary {
  std::array<Primitive, kPrimitiveCount> entries;

  static PrimitiveLibrary assemble(Primitive forward, Primitive turn_left,
                                   const RobotModel& model);
  const Primitive& operator[](int id) const { return entries[id]; }
};

// Squash helpers shared with the trainer.
namespace squash {
inline double center(double lo, double hi) { return 0.5 * (lo + hi); }
inline double half_span(double lo, double hi) { return 0.5 * (hi - lo); }
double to_limits(double u, double lo, double hi);
double from_limits(double a, double lo, double hi);  // inverse, input clamped inside
double log1m_tanh_sq(double u);
double gaussian_log_density(double u, double mean, double log_std);
}  // namespace squash

}  // namespace hexmpc
