#include "hexmpc/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "hexmpc/binio.hpp"

namespace hexmpc {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
constexpr double kHalfLog2Pi = 0.91893853320467274178;
constexpr double kLog2 = 0.69314718055994530942;
constexpr char kPolicyMagic[8] = {'H', 'X', 'M', 'P', 'C', 'P', 'O', 'L'};
constexpr std::uint32_t kPolicyVersion = 1;

void check_phase(double t) {
  if (!(t > 0.0) || !(t <= 1.0)) {
    throw std::invalid_argument("phase must lie in (0, 1]");
  }
}
}  // namespace

namespace squash {

double to_limits(double u, double lo, double hi) {
  return center(lo, hi) + half_span(lo, hi) * std::tanh(u);
}

double from_limits(double a, double lo, double hi) {
  double y = (a - center(lo, hi)) / half_span(lo, hi);
  y = std::clamp(y, -(1.0 - 1e-12), 1.0 - 1e-12);
  return std::atanh(y);
}

double log1m_tanh_sq(double u) {
  double au = std::fabs(u);
  return 2.0 * (kLog2 - au - std::log1p(std::exp(-2.0 * au)));
}

double gaussian_log_density(double u, double mean, double log_std) {
  double z = (u - mean) * std::exp(-log_std);
  return -0.5 * z * z - log_std - kHalfLog2Pi;
}

}  // namespace squash

PhaseClock::PhaseClock(int t) : steps_per_cycle(t) {
  if (t < 1) {
    throw std::invalid_argument("PhaseClock: steps_per_cycle must be >= 1");
  }
}

double PhaseClock::tick() {
  double t = phase_of(step);
  step = (step + 1) % steps_per_cycle;
  return t;
}

SinusoidalPolicy::SinusoidalPolicy(JointVector joint_min, JointVector joint_max,
                                   double amplitude_bound)
    : lo_(joint_min), hi_(joint_max), amplitude_bound_(amplitude_bound) {
  for (int j = 0; j < kJointCount; ++j) {
    log_std[j] = std::log(0.1);
  }
}

SinusoidalPolicy SinusoidalPolicy::random_init(const RobotModel& model, double amplitude_bound,
                                               std::uint64_t seed) {
  SinusoidalPolicy p(model.joint_min, model.joint_max, amplitude_bound);
  rng::Stream stream(rng::derive(seed, rng::tag::policy_init));
  for (int j = 0; j < kJointCount; ++j) {
    p.amplitude[j] = stream.uniform(-0.1, 0.1);
    p.phase[j] = stream.uniform(-3.14159265358979323846, 3.14159265358979323846);
    p.offset[j] = 0.0;  // neutral stance
  }
  return p;
}

JointVector SinusoidalPolicy::value(double t) const {
  JointVector q{};
  for (int j = 0; j < kJointCount; ++j) {
    q[j] = amplitude[j] * std::sin(kTwoPi * t + phase[j]) + offset[j];
  }
  return q;
}

PolicyDist SinusoidalPolicy::dist(double t) const {
  PolicyDist d;
  JointVector v = value(t);
  for (int j = 0; j < kJointCount; ++j) {
    d.mean[j] = squash::from_limits(v[j], lo_[j], hi_[j]);
    d.log_std[j] = std::clamp(log_std[j], kLogStdMin, kLogStdMax);
  }
  return d;
}

void SinusoidalPolicy::clamp_params() {
  for (int j = 0; j < kJointCount; ++j) {
    amplitude[j] = std::clamp(amplitude[j], -amplitude_bound_, amplitude_bound_);
    offset[j] = std::clamp(offset[j], lo_[j], hi_[j]);
  }
}

Eigen::VectorXd SinusoidalPolicy::param_vector() const {
  Eigen::VectorXd p(4 * kJointCount);
  for (int j = 0; j < kJointCount; ++j) {
    p[j] = amplitude[j];
    p[kJointCount + j] = phase[j];
    p[2 * kJointCount + j] = offset[j];
    p[3 * kJointCount + j] = log_std[j];
  }
  return p;
}

void SinusoidalPolicy::set_param_vector(const Eigen::VectorXd& p) {
  if (p.size() != 4 * kJointCount) {
    throw std::invalid_argument("SinusoidalPolicy: parameter vector size mismatch");
  }
  for (int j = 0; j < kJointCount; ++j) {
    amplitude[j] = p[j];
    phase[j] = p[kJointCount + j];
    offset[j] = p[2 * kJointCount + j];
    log_std[j] = p[3 * kJointCount + j];
  }
}

NeuralPolicy::NeuralPolicy(Mlp trunk, JointVector joint_min, JointVector joint_max)
    : trunk_(std::move(trunk)), lo_(joint_min), hi_(joint_max) {
  if (trunk_.input_size() != 1 || trunk_.output_size() != 2 * kJointCount) {
    throw std::invalid_argument("NeuralPolicy: trunk must map 1 -> 36");
  }
}

NeuralPolicy NeuralPolicy::random_init(const RobotModel& model, std::uint64_t seed) {
  Mlp trunk({1, 64, 64, 2 * kJointCount}, rng::derive(seed, rng::tag::policy_init));
  // Small head so the initial action is the neutral stance (tanh(0) scaled).
  int last = trunk.layer_count() - 1;
  trunk.weight(last) *= 0.01;
  return NeuralPolicy(std::move(trunk), model.joint_min, model.joint_max);
}

PolicyDist NeuralPolicy::dist(double t) const {
  Eigen::VectorXd in(1);
  in[0] = t;
  Eigen::VectorXd out = trunk_.forward(in);
  PolicyDist d;
  for (int j = 0; j < kJointCount; ++j) {
    d.mean[j] = out[j];
    d.log_std[j] = std::clamp(out[kJointCount + j], kLogStdMin, kLogStdMax);
  }
  return d;
}

namespace {

ActResult act_from_dist(const PolicyDist& d, const JointVector& lo, const JointVector& hi,
                        ActMode mode, rng::Stream& rng) {
  ActResult r;
  if (mode == ActMode::deterministic) {
    for (int j = 0; j < kJointCount; ++j) {
      r.q_des[j] = squash::to_limits(d.mean[j], lo[j], hi[j]);
    }
    r.log_prob = 0.0;
    return r;
  }
  double logp = 0.0;
  for (int j = 0; j < kJointCount; ++j) {
    double u = d.mean[j] + std::exp(d.log_std[j]) * rng.normal();
    r.q_des[j] = squash::to_limits(u, lo[j], hi[j]);
    logp += squash::gaussian_log_density(u, d.mean[j], d.log_std[j]) -
            std::log(squash::half_span(lo[j], hi[j])) - squash::log1m_tanh_sq(u);
  }
  r.log_prob = logp;
  return r;
}

}  // namespace

ActResult act(const Primitive& primitive, double t, ActMode mode, rng::Stream& rng,
              const JointVector& current_q) {
  check_phase(t);
  if (std::holds_alternative<StandPolicy>(primitive)) {
    ActResult r;
    r.q_des = current_q;
    r.log_prob = 0.0;
    return r;
  }
  if (const auto* sin = std::get_if<SinusoidalPolicy>(&primitive)) {
    if (mode == ActMode::deterministic) {
      ActResult r;
      JointVector v = sin->value(t);
      for (int j = 0; j < kJointCount; ++j) {
        r.q_des[j] = std::clamp(v[j], sin->joint_min()[j], sin->joint_max()[j]);
      }
      return r;
    }
    return act_from_dist(sin->dist(t), sin->joint_min(), sin->joint_max(), mode, rng);
  }
  const auto& net = std::get<NeuralPolicy>(primitive);
  return act_from_dist(net.dist(t), net.joint_min(), net.joint_max(), mode, rng);
}

SinusoidalPolicy mirror(const SinusoidalPolicy& policy, const RobotModel& model) {
  SinusoidalPolicy out = policy;
  JointVector lo{}, hi{};
  for (int leg = 0; leg < kLegCount; ++leg) {
    int other = model.mirror_leg[leg];
    for (int k = 0; k < 3; ++k) {
      int src = 3 * other + k;
      int dst = 3 * leg + k;
      double sign = k == 0 ? -1.0 : 1.0;  // base yaw flips under reflection
      out.amplitude[dst] = sign * policy.amplitude[src];
      out.phase[dst] = policy.phase[src];
      out.offset[dst] = sign * policy.offset[src];
      out.log_std[dst] = policy.log_std[src];
      if (k == 0) {
        lo[dst] = -policy.joint_max()[src];
        hi[dst] = -policy.joint_min()[src];
      } else {
        lo[dst] = policy.joint_min()[src];
        hi[dst] = policy.joint_max()[src];
      }
    }
  }
  SinusoidalPolicy result(lo, hi, policy.amplitude_bound());
  result.amplitude = out.amplitude;
  result.phase = out.phase;
  result.offset = out.offset;
  result.log_std = out.log_std;
  return result;
}

Primitive mirror(const Primitive& primitive, const RobotModel& model) {
  if (const auto* sin = std::get_if<SinusoidalPolicy>(&primitive)) {
    return mirror(*sin, model);
  }
  throw std::runtime_error("mirror: only sinusoidal primitives can be mirrored");
}

namespace {

void write_joint_vector(binio::Writer& w, const JointVector& v) {
  for (double x : v) w.f64(x);
}

JointVector read_joint_vector(binio::Reader& r) {
  JointVector v{};
  for (double& x : v) x = r.f64();
  return v;
}

}  // namespace

std::string serialize_policy(const Primitive& primitive) {
  binio::Writer w;
  w.bytes(kPolicyMagic, sizeof(kPolicyMagic));
  w.u32(kPolicyVersion);
  if (const auto* sin = std::get_if<SinusoidalPolicy>(&primitive)) {
    w.u8(0);
    w.u32(kJointCount);
    write_joint_vector(w, sin->joint_min());
    write_joint_vector(w, sin->joint_max());
    w.f64(sin->amplitude_bound());
    write_joint_vector(w, sin->amplitude);
    write_joint_vector(w, sin->phase);
    write_joint_vector(w, sin->offset);
    write_joint_vector(w, sin->log_std);
  } else if (const auto* net = std::get_if<NeuralPolicy>(&primitive)) {
    w.u8(1);
    w.u32(kJointCount);
    write_joint_vector(w, net->joint_min());
    write_joint_vector(w, net->joint_max());
    const Mlp& trunk = net->trunk();
    w.u32(static_cast<std::uint32_t>(trunk.layer_sizes().size()));
    for (int s : trunk.layer_sizes()) w.u32(static_cast<std::uint32_t>(s));
    w.u64(static_cast<std::uint64_t>(trunk.param_count()));
    for (int i = 0; i < trunk.param_count(); ++i) w.f64(trunk.params()[i]);
  } else {
    w.u8(2);
  }
  return w.str();
}

Primitive deserialize_policy(const std::string& bytes) {
  binio::Reader r(bytes);
  r.expect_magic(kPolicyMagic, sizeof(kPolicyMagic), "policy file");
  std::uint32_t version = r.u32();
  if (version != kPolicyVersion) {
    throw std::runtime_error("policy file: unsupported version " + std::to_string(version));
  }
  std::uint8_t kind = r.u8();
  if (kind == 0) {
    if (r.u32() != kJointCount) throw std::runtime_error("policy file: joint count mismatch");
    JointVector lo = read_joint_vector(r);
    JointVector hi = read_joint_vector(r);
    double bound = r.f64();
    SinusoidalPolicy p(lo, hi, bound);
    p.amplitude = read_joint_vector(r);
    p.phase = read_joint_vector(r);
    p.offset = read_joint_vector(r);
    p.log_std = read_joint_vector(r);
    r.require_end("policy file");
    return p;
  }
  if (kind == 1) {
    if (r.u32() != kJointCount) throw std::runtime_error("policy file: joint count mismatch");
    JointVector lo = read_joint_vector(r);
    JointVector hi = read_joint_vector(r);
    std::uint32_t n_sizes = r.u32();
    std::vector<int> sizes;
    for (std::uint32_t i = 0; i < n_sizes; ++i) sizes.push_back(static_cast<int>(r.u32()));
    Mlp trunk(sizes, 0);
    std::uint64_t n_params = r.u64();
    if (n_params != static_cast<std::uint64_t>(trunk.param_count())) {
      throw std::runtime_error("policy file: parameter count mismatch");
    }
    for (int i = 0; i < trunk.param_count(); ++i) trunk.params()[i] = r.f64();
    r.require_end("policy file");
    return NeuralPolicy(std::move(trunk), lo, hi);
  }
  if (kind == 2) {
    r.require_end("policy file");
    return StandPolicy{};
  }
  throw std::runtime_error("policy file: unknown kind tag");
}

void save_policy(const Primitive& primitive, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::string bytes = serialize_policy(primitive);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

Primitive load_policy(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open policy file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return deserialize_policy(bytes);
}

const char* primitive_name(int id) {
  switch (id) {
    case kPrimitiveForward: return "forward";
    case kPrimitiveTurnLeft: return "turn_left";
    case kPrimitiveTurnRight: return "turn_right";
    case kPrimitiveStand: return "stand";
    default: throw std::invalid_argument("unknown primitive id");
  }
}

int primitive_id(const std::string& name) {
  for (int i = 0; i < kPrimitiveCount; ++i) {
    if (name == primitive_name(i)) return i;
  }
  throw std::invalid_argument("unknown primitive name: " + name);
}

PrimitiveLibrary PrimitiveLibrary::assemble(Primitive forward, Primitive turn_left,
                                            const RobotModel& model) {
  PrimitiveLibrary lib{{std::move(forward), turn_left, mirror(turn_left, model), StandPolicy{}}};
  return lib;
}

}  // namespace hexmpc
