#include "hexmpc/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hexmpc {

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("SimConfig: dt must be > 0");
  if (!(slip >= 0.0 && slip < 1.0)) throw std::invalid_argument("SimConfig: slip must be in [0,1)");
  for (double s : noise_std) {
    if (!(s >= 0.0)) throw std::invalid_argument("SimConfig: noise_std must be >= 0");
  }
  if (!std::isfinite(contact_height)) {
    throw std::invalid_argument("SimConfig: contact_height must be finite");
  }
}

std::array<bool, kLegCount> stance_flags(const RobotModel& model, const JointVector& q,
                                         double contact_height) {
  auto feet = foot_positions(model, q);
  std::array<bool, kLegCount> flags{};
  for (int i = 0; i < kLegCount; ++i) {
    flags[i] = feet[i][2] < contact_height;
  }
  return flags;
}

PlanarTwist fit_planar_twist(const std::vector<std::array<double, 2>>& points,
                             const std::vector<std::array<double, 2>>& velocities) {
  if (points.size() != velocities.size()) {
    throw std::invalid_argument("fit_planar_twist: size mismatch");
  }
  PlanarTwist tw;
  const std::size_t n = points.size();
  if (n == 0) return tw;

  // Normal equations for residual v_i - v - omega * (-py, px).
  double spx = 0, spy = 0, spp = 0, svx = 0, svy = 0, scr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double px = points[i][0], py = points[i][1];
    double vx = velocities[i][0], vy = velocities[i][1];
    spx += px;
    spy += py;
    spp += px * px + py * py;
    svx += vx;
    svy += vy;
    scr += -py * vx + px * vy;
  }
  double nn = static_cast<double>(n);
  // omega decouples after eliminating v: (spp - (spx^2+spy^2)/n) w = scr - (spx*svy - spy*svx)/n
  double denom = spp - (spx * spx + spy * spy) / nn;
  double numer = scr - (spx * svy - spy * svx) / nn;
  double omega = denom > 1e-12 ? numer / denom : 0.0;
  if (!std::isfinite(omega)) omega = 0.0;
  tw.omega = omega;
  tw.vx = (svx + omega * spy) / nn;
  tw.vy = (svy - omega * spx) / nn;
  if (!std::isfinite(tw.vx) || !std::isfinite(tw.vy)) {
    tw = PlanarTwist{};
    tw.vx = svx / nn;
    tw.vy = svy / nn;
  }
  return tw;
}

Simulator::Simulator(SimConfig config, RobotModel model)
    : config_(config), model_(std::move(model)) {
  config_.validate();
  model_.validate();
}

SimState Simulator::reset(const Pose2& initial_pose) const {
  SimState s;
  s.pose = initial_pose;
  s.joints = neutral_stance(model_);
  s.step_index = 0;
  s.cycle_start_theta = initial_pose.theta;
  return s;
}

std::pair<SimState, StepFeatures> Simulator::step(const SimState& state,
                                                  const JointVector& qdot_des) const {
  for (double v : qdot_des) {
    if (!std::isfinite(v)) throw std::invalid_argument("Simulator::step: non-finite command");
  }
  const double dt = config_.dt;
  SimState next = state;

  const JointVector& q_old = state.joints.q;
  auto feet_old = foot_positions(model_, q_old);
  auto stance_old = stance_flags(model_, q_old, config_.contact_height);

  JointVector q_new{};
  JointVector qdot{};
  for (int j = 0; j < kJointCount; ++j) {
    q_new[j] = std::clamp(q_old[j] + qdot_des[j] * dt, model_.joint_min[j], model_.joint_max[j]);
    qdot[j] = (q_new[j] - q_old[j]) / dt;
  }
  auto feet_new = foot_positions(model_, q_new);
  auto stance_new = stance_flags(model_, q_new, config_.contact_height);

  std::vector<std::array<double, 2>> points, vels;
  for (int i = 0; i < kLegCount; ++i) {
    if (stance_old[i] && stance_new[i]) {
      points.push_back({feet_old[i][0], feet_old[i][1]});
      vels.push_back({(feet_new[i][0] - feet_old[i][0]) / dt,
                      (feet_new[i][1] - feet_old[i][1]) / dt});
    }
  }
  int stance_count = static_cast<int>(points.size());

  double dx = 0.0, dy = 0.0, dtheta = 0.0;
  if (stance_count > 0) {
    PlanarTwist tw = fit_planar_twist(points, vels);
    double keep = 1.0 - config_.slip;
    dx = -tw.vx * dt * keep;
    dy = -tw.vy * dt * keep;
    dtheta = -tw.omega * dt * keep;
  }
  auto noise = rng::counter_normal3(config_.seed, state.step_index);
  dx += noise[0] * config_.noise_std[0];
  dy += noise[1] * config_.noise_std[1];
  dtheta += noise[2] * config_.noise_std[2];

  double c = std::cos(state.pose.theta);
  double s = std::sin(state.pose.theta);
  next.pose = Pose2(state.pose.x + c * dx - s * dy, state.pose.y + s * dx + c * dy,
                    state.pose.theta + dtheta);
  next.joints.q = q_new;
  next.joints.qdot = qdot;
  next.step_index = state.step_index + 1;

  StepFeatures f;
  f.delta_x_com = {dy, dx, 0.0};  // (lateral, forward, vertical)
  f.theta_com = {0.0, 0.0, wrap_angle(next.pose.theta - state.cycle_start_theta)};
  double qsum = 0.0;
  for (double v : qdot) qsum += std::fabs(v);
  f.qdot_abs_sum = qsum;
  f.stance_count = stance_count;
  return {next, f};
}

CycleResult Simulator::run_cycle(const SimState& state, const Primitive& primitive,
                                 int steps_per_cycle, ActMode mode, rng::Stream& rng) const {
  PhaseClock clock(steps_per_cycle);
  CycleResult result;
  result.state = state;
  result.state.cycle_start_theta = state.pose.theta;
  result.transitions.reserve(static_cast<std::size_t>(steps_per_cycle));
  Pose2 start = state.pose;
  double logp_sum = 0.0;
  JointVector qff{};
  for (int k = 0; k < steps_per_cycle; ++k) {
    double t = clock.tick();
    ActResult ar = act(primitive, t, mode, rng, result.state.joints.q);
    logp_sum += ar.log_prob;
    JointVector cmd = velocity_command(model_, ar.q_des, result.state.joints.q,
                                       result.state.joints.qdot, qff);
    auto [next, features] = step(result.state, cmd);
    Transition tr;
    tr.s = t;
    tr.a = ar.q_des;
    tr.features = features;
    tr.done = (k + 1 == steps_per_cycle);
    tr.s_next = tr.done ? clock.phase_of(0) : clock.phase_of(k + 1);
    result.transitions.push_back(std::move(tr));
    result.state = next;
  }
  result.delta = between(start, result.state.pose);
  result.mean_log_prob = logp_sum / steps_per_cycle;
  return result;
}

}  // namespace hexmpc
