#include "hexmpc/sac.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "hexmpc/binio.hpp"

namespace hexmpc {

namespace {
constexpr char kBufferMagic[8] = {'H', 'X', 'M', 'P', 'C', 'B', 'U', 'F'};
constexpr std::uint32_t kBufferVersion = 1;
constexpr double kHalfLog2Pi = 0.91893853320467274178;

double gaussian_logpdf(double u, double mean, double log_std) {
  double z = (u - mean) * std::exp(-log_std);
  return -0.5 * z * z - log_std - kHalfLog2Pi;
}
}  // namespace

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity must be > 0");
}

std::size_t ReplayBuffer::physical(std::size_t logical) const {
  if (data_.size() < capacity_) return logical;
  return (next_ + logical) % capacity_;
}

void ReplayBuffer::push(Transition t) {
  if (data_.size() < capacity_) {
    data_.push_back(std::move(t));
    next_ = data_.size() % capacity_;
  } else {
    data_[next_] = std::move(t);
    next_ = (next_ + 1) % capacity_;
  }
  ++insert_count_;
}

std::vector<std::uint32_t> ReplayBuffer::sample_indices(rng::Stream& rng, int batch) const {
  if (data_.empty()) throw std::runtime_error("ReplayBuffer: cannot sample from empty buffer");
  std::vector<std::uint32_t> idx(static_cast<std::size_t>(batch));
  for (auto& i : idx) {
    i = static_cast<std::uint32_t>(rng.next_u64() % data_.size());
  }
  return idx;
}

std::string ReplayBuffer::serialize() const {
  binio::Writer w;
  w.bytes(kBufferMagic, sizeof(kBufferMagic));
  w.u32(kBufferVersion);
  w.u64(capacity_);
  w.u64(data_.size());
  std::uint32_t reward_count =
      data_.empty() ? 0 : static_cast<std::uint32_t>((*this)[0].rewards.size());
  w.u32(reward_count);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const Transition& t = (*this)[i];
    if (t.rewards.size() != reward_count) {
      throw std::runtime_error("ReplayBuffer::serialize: inconsistent reward cache width");
    }
    w.f64(t.s);
    for (double a : t.a) w.f64(a);
    for (double v : t.features.delta_x_com) w.f64(v);
    for (double v : t.features.theta_com) w.f64(v);
    w.f64(t.features.qdot_abs_sum);
    w.u32(static_cast<std::uint32_t>(t.features.stance_count));
    w.f64(t.s_next);
    w.u8(t.done ? 1 : 0);
    for (double r : t.rewards) w.f64(r);
  }
  return w.str();
}

ReplayBuffer ReplayBuffer::deserialize(const std::string& bytes) {
  binio::Reader r(bytes);
  r.expect_magic(kBufferMagic, sizeof(kBufferMagic), "buffer file");
  std::uint32_t version = r.u32();
  if (version != kBufferVersion) {
    throw std::runtime_error("buffer file: unsupported version " + std::to_string(version));
  }
  std::uint64_t capacity = r.u64();
  std::uint64_t count = r.u64();
  std::uint32_t reward_count = r.u32();
  ReplayBuffer buf(capacity);
  for (std::uint64_t i = 0; i < count; ++i) {
    Transition t;
    t.s = r.f64();
    for (double& a : t.a) a = r.f64();
    for (double& v : t.features.delta_x_com) v = r.f64();
    for (double& v : t.features.theta_com) v = r.f64();
    t.features.qdot_abs_sum = r.f64();
    t.features.stance_count = static_cast<int>(r.u32());
    t.s_next = r.f64();
    t.done = r.u8() != 0;
    t.rewards.resize(reward_count);
    for (double& rv : t.rewards) rv = r.f64();
    buf.push(std::move(t));
  }
  r.require_end("buffer file");
  return buf;
}

void ReplayBuffer::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::string bytes = serialize();
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

ReplayBuffer ReplayBuffer::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open buffer file: " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

void relabel(ReplayBuffer& buffer, const RewardTable& rewards, int reward_id) {
  if (reward_id < 0 || reward_id >= rewards.size()) {
    throw std::invalid_argument("relabel: reward id out of range");
  }
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    Transition& t = buffer[i];
    if (t.rewards.size() < static_cast<std::size_t>(rewards.size())) {
      t.rewards.resize(rewards.size(), 0.0);
    }
    t.rewards[reward_id] = rewards.compute(reward_id, t.features, t.s);
  }
}

void SacConfig::validate() const {
  if (!(discount >= 0.0 && discount < 1.0)) {
    throw std::invalid_argument("SacConfig: discount must be in [0,1)");
  }
  if (!(kl_coeff >= 0.0)) throw std::invalid_argument("SacConfig: kl_coeff must be >= 0");
  if (!(polyak > 0.0 && polyak <= 1.0)) {
    throw std::invalid_argument("SacConfig: polyak must be in (0,1]");
  }
  if (batch_size < 1 || gradient_steps_per_cycle < 0 || snapshot_interval < 1) {
    throw std::invalid_argument("SacConfig: bad update schedule");
  }
  if (!(temperature >= 0.0)) throw std::invalid_argument("SacConfig: temperature must be >= 0");
  if (buffer_capacity == 0) throw std::invalid_argument("SacConfig: buffer capacity must be > 0");
}

// ---------------------------------------------------------------------------
// Batched policy distribution evaluation and parameter-space backprop for the
// two trainable primitive kinds.

namespace {

struct DistBatch {
  Eigen::MatrixXd mean;     // 18 x B, pre-squash
  Eigen::MatrixXd log_std;  // 18 x B, clamped
  // sinusoid cache
  Eigen::MatrixXd sin_val, cos_val, dmean_dangle;
  // neural cache
  Mlp::Cache net_cache;
  Eigen::ArrayXXd logstd_mask;  // 18 x B
};

class PolicyAdapter {
 public:
  explicit PolicyAdapter(Primitive& p) : p_(&p) {
    if (std::holds_alternative<StandPolicy>(*p_)) {
      throw std::invalid_argument("stand primitive is not trainable");
    }
  }

  bool is_sinusoid() const { return std::holds_alternative<SinusoidalPolicy>(*p_); }
  const JointVector& lo() const {
    return is_sinusoid() ? std::get<SinusoidalPolicy>(*p_).joint_min()
                         : std::get<NeuralPolicy>(*p_).joint_min();
  }
  const JointVector& hi() const {
    return is_sinusoid() ? std::get<SinusoidalPolicy>(*p_).joint_max()
                         : std::get<NeuralPolicy>(*p_).joint_max();
  }

  int param_count() const {
    return is_sinusoid() ? 4 * kJointCount : std::get<NeuralPolicy>(*p_).trunk().param_count();
  }

  Eigen::VectorXd get_params() const {
    if (is_sinusoid()) return std::get<SinusoidalPolicy>(*p_).param_vector();
    return std::get<NeuralPolicy>(*p_).trunk().params();
  }

  void set_params(const Eigen::VectorXd& v) {
    if (is_sinusoid()) {
      std::get<SinusoidalPolicy>(*p_).set_param_vector(v);
    } else {
      std::get<NeuralPolicy>(*p_).trunk().params() = v;
    }
  }

  void project() {
    if (is_sinusoid()) std::get<SinusoidalPolicy>(*p_).clamp_params();
  }

  void dist(const Eigen::VectorXd& phases, DistBatch& out, bool with_cache) const {
    const int b = static_cast<int>(phases.size());
    out.mean.resize(kJointCount, b);
    out.log_std.resize(kJointCount, b);
    out.logstd_mask.resize(kJointCount, b);
    if (is_sinusoid()) {
      const auto& sp = std::get<SinusoidalPolicy>(*p_);
      if (with_cache) {
        out.sin_val.resize(kJointCount, b);
        out.cos_val.resize(kJointCount, b);
        out.dmean_dangle.resize(kJointCount, b);
      }
      for (int col = 0; col < b; ++col) {
        double w = 6.28318530717958647692 * phases[col];
        for (int j = 0; j < kJointCount; ++j) {
          double sv = std::sin(w + sp.phase[j]);
          double cv = std::cos(w + sp.phase[j]);
          double angle = sp.amplitude[j] * sv + sp.offset[j];
          double half = squash::half_span(sp.joint_min()[j], sp.joint_max()[j]);
          double y = (angle - squash::center(sp.joint_min()[j], sp.joint_max()[j])) / half;
          bool clamped = !(y > -(1.0 - 1e-12) && y < 1.0 - 1e-12);
          double yc = std::clamp(y, -(1.0 - 1e-12), 1.0 - 1e-12);
          out.mean(j, col) = std::atanh(yc);
          double ls = sp.log_std[j];
          bool ls_in = ls > kLogStdMin && ls < kLogStdMax;
          out.log_std(j, col) = std::clamp(ls, kLogStdMin, kLogStdMax);
          out.logstd_mask(j, col) = ls_in ? 1.0 : 0.0;
          if (with_cache) {
            out.sin_val(j, col) = sv;
            out.cos_val(j, col) = cv;
            out.dmean_dangle(j, col) = clamped ? 0.0 : 1.0 / (half * (1.0 - yc * yc));
          }
        }
      }
    } else {
      const auto& np = std::get<NeuralPolicy>(*p_);
      Eigen::MatrixXd in(1, b);
      in.row(0) = phases.transpose();
      Eigen::MatrixXd raw = np.trunk().forward(in, with_cache ? &out.net_cache : nullptr);
      out.mean = raw.topRows(kJointCount);
      Eigen::MatrixXd ls_raw = raw.bottomRows(kJointCount);
      for (int col = 0; col < b; ++col) {
        for (int j = 0; j < kJointCount; ++j) {
          double ls = ls_raw(j, col);
          bool in_range = ls > kLogStdMin && ls < kLogStdMax;
          out.log_std(j, col) = std::clamp(ls, kLogStdMin, kLogStdMax);
          out.logstd_mask(j, col) = in_range ? 1.0 : 0.0;
        }
      }
    }
  }

  /// Maps gradients w.r.t. (mean, log_std) back to parameter space.
  Eigen::VectorXd backward(const DistBatch& cache, const Eigen::MatrixXd& dmean,
                           const Eigen::MatrixXd& dlogstd) const {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(param_count());
    Eigen::MatrixXd dls = dlogstd.cwiseProduct(cache.logstd_mask.matrix());
    if (is_sinusoid()) {
      const auto& sp = std::get<SinusoidalPolicy>(*p_);
      Eigen::MatrixXd dangle = dmean.cwiseProduct(cache.dmean_dangle);
      for (int j = 0; j < kJointCount; ++j) {
        double da = 0.0, db = 0.0, dc = 0.0, dl = 0.0;
        for (int col = 0; col < dangle.cols(); ++col) {
          da += dangle(j, col) * cache.sin_val(j, col);
          db += dangle(j, col) * sp.amplitude[j] * cache.cos_val(j, col);
          dc += dangle(j, col);
          dl += dls(j, col);
        }
        grad[j] = da;
        grad[kJointCount + j] = db;
        grad[2 * kJointCount + j] = dc;
        grad[3 * kJointCount + j] = dl;
      }
    } else {
      const auto& np = std::get<NeuralPolicy>(*p_);
      Eigen::MatrixXd dout(2 * kJointCount, dmean.cols());
      dout.topRows(kJointCount) = dmean;
      dout.bottomRows(kJointCount) = dls;
      auto& cache_mut = const_cast<Mlp::Cache&>(cache.net_cache);
      np.trunk().backward(cache_mut, dout, grad, nullptr);
    }
    return grad;
  }

 private:
  Primitive* p_;
};

Primitive clone_for_snapshot(const Primitive& p) { return p; }

}  // namespace

SacTrainer::SacTrainer(Primitive policy, RewardTable rewards, int reward_id, SacConfig config,
                       std::uint64_t seed)
    : policy_(std::move(policy)),
      snapshot_(clone_for_snapshot(policy_)),
      rewards_(std::move(rewards)),
      reward_id_(reward_id),
      config_(config),
      temperature_(config.temperature),
      q1_({1 + kJointCount, 64, 64, 1}, rng::derive(seed, 0x51)),
      q2_({1 + kJointCount, 64, 64, 1}, rng::derive(seed, 0x52)),
      q1_target_(q1_),
      q2_target_(q2_),
      q1_opt_(q1_.param_count(), config.critic_lr),
      q2_opt_(q2_.param_count(), config.critic_lr),
      policy_opt_(0, config.policy_lr),
      buffer_(config.buffer_capacity),
      exploration_rng_(rng::derive(seed, rng::tag::exploration)),
      sample_rng_(rng::derive(seed, rng::tag::replay_sampling)),
      update_rng_(rng::derive(seed, 0x75)) {
  config_.validate();
  if (reward_id_ < 0 || reward_id_ >= rewards_.size()) {
    throw std::invalid_argument("SacTrainer: reward id out of range");
  }
  PolicyAdapter adapter(policy_);
  policy_opt_ = AdamState(adapter.param_count(), config_.policy_lr);
}

SacTrainer::Batch SacTrainer::make_batch(const ReplayBuffer& buffer,
                                         const std::vector<std::uint32_t>& idx) const {
  Batch b;
  const int n = static_cast<int>(idx.size());
  b.s.resize(n);
  b.a.resize(kJointCount, n);
  b.r.resize(n);
  b.s_next.resize(n);
  b.done.resize(n);
  for (int i = 0; i < n; ++i) {
    const Transition& t = buffer[idx[i]];
    b.s[i] = t.s;
    for (int j = 0; j < kJointCount; ++j) b.a(j, i) = t.a[j];
    if (t.rewards.size() <= static_cast<std::size_t>(reward_id_)) {
      throw std::runtime_error("SacTrainer: transition has no cached reward for this primitive");
    }
    b.r[i] = t.rewards[reward_id_];
    b.s_next[i] = t.s_next;
    b.done[i] = t.done ? 1.0 : 0.0;
  }
  return b;
}

SacTrainer::Batch SacTrainer::sample_batch(const ReplayBuffer& buffer) {
  return make_batch(buffer, buffer.sample_indices(sample_rng_, config_.batch_size));
}

namespace {

/// Samples pre-squash actions for a whole batch; returns (u, log_prob).
void sample_actions(const DistBatch& dist, rng::Stream& rng, const JointVector& lo,
                    const JointVector& hi, Eigen::MatrixXd& u, Eigen::VectorXd& log_prob,
                    Eigen::MatrixXd* xi_out = nullptr) {
  const int b = static_cast<int>(dist.mean.cols());
  u.resize(kJointCount, b);
  log_prob.setZero(b);
  if (xi_out != nullptr) xi_out->resize(kJointCount, b);
  for (int col = 0; col < b; ++col) {
    for (int j = 0; j < kJointCount; ++j) {
      double xi = rng.normal();
      double sigma = std::exp(dist.log_std(j, col));
      double uu = dist.mean(j, col) + sigma * xi;
      u(j, col) = uu;
      if (xi_out != nullptr) (*xi_out)(j, col) = xi;
      log_prob[col] += gaussian_logpdf(uu, dist.mean(j, col), dist.log_std(j, col)) -
                       std::log(squash::half_span(lo[j], hi[j])) - squash::log1m_tanh_sq(uu);
    }
  }
}

Eigen::MatrixXd squash_batch(const Eigen::MatrixXd& u, const JointVector& lo,
                             const JointVector& hi) {
  Eigen::MatrixXd a(u.rows(), u.cols());
  for (int col = 0; col < u.cols(); ++col) {
    for (int j = 0; j < u.rows(); ++j) {
      a(j, col) = squash::to_limits(u(j, col), lo[j], hi[j]);
    }
  }
  return a;
}

Eigen::MatrixXd critic_input(const Eigen::VectorXd& s, const Eigen::MatrixXd& a) {
  Eigen::MatrixXd x(1 + kJointCount, s.size());
  x.row(0) = s.transpose();
  x.bottomRows(kJointCount) = a;
  return x;
}

void polyak_update(Mlp& target, const Mlp& online, double tau) {
  target.params() = (1.0 - tau) * target.params() + tau * online.params();
}

}  // namespace

CriticStats SacTrainer::critic_update(const Batch& batch) {
  PolicyAdapter adapter(policy_);
  const int b = batch.size();

  DistBatch next_dist;
  adapter.dist(batch.s_next, next_dist, false);
  Eigen::MatrixXd u_next;
  Eigen::VectorXd logp_next;
  sample_actions(next_dist, update_rng_, adapter.lo(), adapter.hi(), u_next, logp_next);
  Eigen::MatrixXd a_next = squash_batch(u_next, adapter.lo(), adapter.hi());

  Eigen::MatrixXd x_next = critic_input(batch.s_next, a_next);
  Eigen::VectorXd q1n = q1_target_.forward(x_next).row(0).transpose();
  Eigen::VectorXd q2n = q2_target_.forward(x_next).row(0).transpose();
  Eigen::VectorXd target(b);
  for (int i = 0; i < b; ++i) {
    double soft = std::min(q1n[i], q2n[i]) - temperature_ * logp_next[i];
    target[i] = batch.r[i] + config_.discount * (1.0 - batch.done[i]) * soft;
  }

  Eigen::MatrixXd x = critic_input(batch.s, batch.a);
  Mlp::Cache c1, c2;
  Eigen::VectorXd q1v = q1_.forward(x, &c1).row(0).transpose();
  Eigen::VectorXd q2v = q2_.forward(x, &c2).row(0).transpose();
  Eigen::VectorXd d1 = q1v - target;
  Eigen::VectorXd d2 = q2v - target;
  double loss = 0.5 * (d1.squaredNorm() + d2.squaredNorm()) / b;
  if (!std::isfinite(loss)) {
    throw std::runtime_error("critic_update: non-finite loss (|d1|=" + std::to_string(d1.norm()) +
                             ", |d2|=" + std::to_string(d2.norm()) + ")");
  }

  Eigen::VectorXd g1, g2;
  q1_.backward(c1, d1.transpose() / b, g1);
  q2_.backward(c2, d2.transpose() / b, g2);
  q1_opt_.step(q1_.params(), g1);
  q2_opt_.step(q2_.params(), g2);
  polyak_update(q1_target_, q1_, config_.polyak);
  polyak_update(q2_target_, q2_, config_.polyak);
  return {loss, target.mean()};
}

PolicyStats SacTrainer::policy_update(const Batch& batch) {
  PolicyAdapter adapter(policy_);
  PolicyAdapter old_adapter(snapshot_);
  const int b = batch.size();
  const double alpha = temperature_;
  const JointVector& lo = adapter.lo();
  const JointVector& hi = adapter.hi();

  DistBatch dist;
  adapter.dist(batch.s, dist, true);
  Eigen::MatrixXd u, xi;
  Eigen::VectorXd logp;
  sample_actions(dist, update_rng_, lo, hi, u, logp, &xi);
  Eigen::MatrixXd a = squash_batch(u, lo, hi);

  Eigen::MatrixXd x = critic_input(batch.s, a);
  Mlp::Cache c1, c2;
  Eigen::VectorXd q1v = q1_.forward(x, &c1).row(0).transpose();
  Eigen::VectorXd q2v = q2_.forward(x, &c2).row(0).transpose();

  Eigen::MatrixXd dy1(1, b), dy2(1, b);
  double objective = 0.0;
  for (int i = 0; i < b; ++i) {
    bool first = q1v[i] <= q2v[i];
    dy1(0, i) = first ? 1.0 / b : 0.0;
    dy2(0, i) = first ? 0.0 : 1.0 / b;
    objective += (std::min(q1v[i], q2v[i]) - alpha * logp[i]) / b;
  }
  Eigen::VectorXd scratch;
  Eigen::MatrixXd in_grad1, in_grad2;
  q1_.backward(c1, dy1, scratch, &in_grad1);
  scratch.setZero();
  q2_.backward(c2, dy2, scratch, &in_grad2);
  Eigen::MatrixXd ga = in_grad1.bottomRows(kJointCount) + in_grad2.bottomRows(kJointCount);

  // Reparametrized gradients of mean_b [min Q(s, a(u)) - alpha log pi(a|s)]
  // with respect to the distribution outputs.
  Eigen::MatrixXd dmean(kJointCount, b), dlogstd(kJointCount, b);
  for (int col = 0; col < b; ++col) {
    for (int j = 0; j < kJointCount; ++j) {
      double t = std::tanh(u(j, col));
      double half = squash::half_span(lo[j], hi[j]);
      double dq_du = ga(j, col) * half * (1.0 - t * t);
      double sig_xi = std::exp(dist.log_std(j, col)) * xi(j, col);
      dmean(j, col) = dq_du - (alpha / b) * 2.0 * t;
      dlogstd(j, col) = dq_du * sig_xi - (alpha / b) * (2.0 * t * sig_xi - 1.0);
    }
  }
  Eigen::VectorXd ascent = adapter.backward(dist, dmean, dlogstd);

  // KL estimate against the snapshot on the same samples (squash corrections
  // cancel between the two densities).
  DistBatch old_dist;
  old_adapter.dist(batch.s, old_dist, false);
  double kl = 0.0;
  for (int col = 0; col < b; ++col) {
    for (int j = 0; j < kJointCount; ++j) {
      kl += gaussian_logpdf(u(j, col), dist.mean(j, col), dist.log_std(j, col)) -
            gaussian_logpdf(u(j, col), old_dist.mean(j, col), old_dist.log_std(j, col));
    }
  }
  kl /= b;

  double damping = 1.0 / (1.0 + config_.kl_coeff * std::max(0.0, kl));
  Eigen::VectorXd params = adapter.get_params();
  double norm = policy_opt_.step(params, -ascent, damping);
  adapter.set_params(params);
  adapter.project();

  ++policy_updates_;
  if (policy_updates_ % config_.snapshot_interval == 0) {
    snapshot_policy();
  }
  return {-objective, kl, norm};
}

void SacTrainer::snapshot_policy() { snapshot_ = policy_; }

Eigen::VectorXd SacTrainer::policy_params() const {
  PolicyAdapter adapter(const_cast<Primitive&>(policy_));
  return adapter.get_params();
}

void SacTrainer::set_policy_params(const Eigen::VectorXd& p) {
  PolicyAdapter adapter(policy_);
  adapter.set_params(p);
}

IterationStats SacTrainer::run_iteration(const Simulator& sim, SimState& state, int cycles,
                                         int steps_per_cycle, int iteration) {
  IterationStats stats;
  stats.iteration = iteration;
  double reward_sum = 0.0, disp_sum = 0.0, yaw_sum = 0.0;
  for (int c = 0; c < cycles; ++c) {
    CycleResult cr = sim.run_cycle(state, policy_, steps_per_cycle, ActMode::stochastic,
                                   exploration_rng_);
    state = cr.state;
    double episode_reward = 0.0;
    for (Transition& t : cr.transitions) {
      t.rewards = rewards_.compute_all(t.features, t.s);
      episode_reward += t.rewards[reward_id_];
      buffer_.push(std::move(t));
    }
    reward_sum += episode_reward;
    disp_sum += cr.delta.cartesian()[0];
    yaw_sum += cr.delta.beta;
  }
  stats.mean_reward = reward_sum / cycles;
  stats.mean_forward_disp = disp_sum / cycles;
  stats.mean_cycle_yaw = yaw_sum / cycles;
  stats.total_samples = buffer_.insert_count();

  const int steps = config_.gradient_steps_per_cycle * cycles;
  double kl_sum = 0.0, critic_sum = 0.0;
  for (int g = 0; g < steps; ++g) {
    Batch batch = sample_batch(buffer_);
    CriticStats cs = critic_update(batch);
    PolicyStats ps = policy_update(batch);
    kl_sum += ps.kl;
    critic_sum += cs.loss;
  }
  if (steps > 0) {
    stats.mean_kl = kl_sum / steps;
    stats.mean_critic_loss = critic_sum / steps;
  }
  return stats;
}

std::vector<IterationStats> train_primitive(
    const Simulator& sim, SimState& state, SacTrainer& trainer, int iterations,
    int cycles_per_iteration, int steps_per_cycle,
    const std::function<void(const IterationStats&)>& on_iteration) {
  std::vector<IterationStats> curve;
  const SacConfig& cfg = trainer.config();
  for (int it = 0; it < iterations; ++it) {
    if (cfg.temperature_final >= 0.0 && iterations > 1) {
      double frac = static_cast<double>(it) / (iterations - 1);
      trainer.set_temperature(cfg.temperature +
                              frac * (cfg.temperature_final - cfg.temperature));
    }
    IterationStats stats =
        trainer.run_iteration(sim, state, cycles_per_iteration, steps_per_cycle, it);
    curve.push_back(stats);
    if (on_iteration) on_iteration(stats);
  }
  return curve;
}

}  // namespace hexmpc
