#include "hexmpc/config.hpp"

#include <json.hpp>
#include <set>

#include "hexmpc/io.hpp"
#include "hexmpc/rewards.hpp"
#include "hexmpc/rng.hpp"

namespace hexmpc {

using nlohmann::json;

namespace {

/// Wraps a JSON object and rejects keys that no reader asked for.
class Strict {
 public:
  Strict(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(path_ + ": missing required key '" + key + "'");
    return j_.at(key);
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(path_ + "." + key + ": " + e.what());
    }
  }

  void finish() {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
      }
    }
  }

  const json& raw() const { return j_; }
  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::vector<GoalSpec> parse_goals(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array of [x, y] or [x, y, theta]");
  std::vector<GoalSpec> out;
  for (const json& g : j) {
    if (!g.is_array() || g.size() < 2 || g.size() > 3) {
      throw ConfigError(path + ": each goal must be [x, y] or [x, y, theta]");
    }
    GoalSpec spec;
    spec.x = g.at(0).get<double>();
    spec.y = g.at(1).get<double>();
    if (g.size() == 3) spec.theta = g.at(2).get<double>();
    out.push_back(spec);
  }
  return out;
}

void parse_robot(const json& j, RobotModel& robot) {
  Strict s(j, "robot");
  s.read("mount_radius", robot.mount_radius);
  s.read("coxa", robot.coxa);
  s.read("femur", robot.femur);
  s.read("tibia", robot.tibia);
  s.read("body_height", robot.body_height);
  s.read("kp", robot.kp);
  s.read("kd", robot.kd);
  s.read("joint_velocity_limit", robot.joint_velocity_limit);
  if (s.has("mount_angles")) {
    auto v = s.at("mount_angles").get<std::vector<double>>();
    if (v.size() != kLegCount) throw ConfigError("robot.mount_angles: need exactly 6 angles");
    for (int i = 0; i < kLegCount; ++i) robot.mount_angle[i] = v[i];
  }
  double base_limit = 0.0, pitch_limit = 0.0;
  if (s.has("base_joint_limit")) base_limit = s.at("base_joint_limit").get<double>();
  if (s.has("pitch_joint_limit")) pitch_limit = s.at("pitch_joint_limit").get<double>();
  for (int leg = 0; leg < kLegCount; ++leg) {
    if (base_limit > 0.0) {
      robot.joint_min[3 * leg] = -base_limit;
      robot.joint_max[3 * leg] = base_limit;
    }
    if (pitch_limit > 0.0) {
      for (int k = 1; k < 3; ++k) {
        robot.joint_min[3 * leg + k] = -pitch_limit;
        robot.joint_max[3 * leg + k] = pitch_limit;
      }
    }
  }
  s.finish();
}

void parse_sim(const json& j, SimConfig& sim) {
  Strict s(j, "simulator");
  s.read("dt", sim.dt);
  s.read("contact_height", sim.contact_height);
  s.read("slip", sim.slip);
  if (s.has("noise_std")) {
    auto v = s.at("noise_std").get<std::vector<double>>();
    if (v.size() != 3) throw ConfigError("simulator.noise_std: need [dx, dy, dtheta]");
    sim.noise_std = {v[0], v[1], v[2]};
  }
  s.read("seed", sim.seed);
  s.finish();
}

void parse_sac(const json& j, SacConfig& sac) {
  Strict s(j, "training.sac");
  s.read("discount", sac.discount);
  s.read("temperature", sac.temperature);
  s.read("temperature_final", sac.temperature_final);
  s.read("kl_coeff", sac.kl_coeff);
  s.read("polyak", sac.polyak);
  s.read("batch_size", sac.batch_size);
  s.read("gradient_steps_per_cycle", sac.gradient_steps_per_cycle);
  s.read("snapshot_interval", sac.snapshot_interval);
  s.read("critic_lr", sac.critic_lr);
  s.read("policy_lr", sac.policy_lr);
  s.read("buffer_capacity", sac.buffer_capacity);
  s.finish();
}

void parse_primitive(const json& j, const std::string& path, PrimitiveTrainConfig& p) {
  Strict s(j, path);
  s.read("reward", p.reward);
  s.read("kind", p.kind);
  s.read("seed", p.seed);
  s.read("reuse_buffer", p.reuse_buffer);
  s.finish();
  if (p.kind != "sinusoidal" && p.kind != "neural") {
    throw ConfigError(path + ".kind: must be 'sinusoidal' or 'neural'");
  }
  reward_weights_by_name(p.reward);  // throws for unknown weight sets
}

void parse_training(const json& j, TrainingConfig& t) {
  Strict s(j, "training");
  s.read("steps_per_cycle", t.steps_per_cycle);
  s.read("cycles_per_iteration", t.cycles_per_iteration);
  s.read("iterations", t.iterations);
  s.read("amplitude_bound", t.amplitude_bound);
  s.read("turn_yaw_target", t.turn_yaw_target);
  if (s.has("sac")) parse_sac(s.at("sac"), t.sac);
  if (s.has("primitives")) {
    const json& prims = s.at("primitives");
    if (!prims.is_object()) throw ConfigError("training.primitives: expected an object");
    for (auto it = prims.begin(); it != prims.end(); ++it) {
      PrimitiveTrainConfig p = t.primitives.count(it.key()) ? t.primitives[it.key()]
                                                            : PrimitiveTrainConfig{};
      parse_primitive(it.value(), "training.primitives." + it.key(), p);
      t.primitives[it.key()] = p;
    }
  }
  s.finish();
}

void parse_dynamics(const json& j, DynamicsConfig& d) {
  Strict s(j, "dynamics");
  s.read("cycles", d.cycles);
  s.read("per_primitive", d.per_primitive);
  s.read("zero_stand", d.zero_stand);
  s.read("holdout_cycles", d.holdout_cycles);
  s.read("seed", d.seed);
  s.finish();
}

void parse_planner(const json& j, PlannerSection& p) {
  Strict s(j, "planner");
  s.read("horizon", p.mpc.horizon);
  s.read("goal_tolerance", p.mpc.goal_tolerance);
  s.read("max_cycles", p.mpc.max_cycles);
  s.read("steps_per_cycle", p.mpc.steps_per_cycle);
  s.read("score_sum", p.mpc.score_sum);
  s.read("dropout_prob", p.mpc.dropout_prob);
  s.read("seed", p.mpc.seed);
  s.read("reward", p.reward);
  s.read("orientation_weight", p.orientation_weight);
  if (s.has("goals")) p.goals = parse_goals(s.at("goals"), "planner.goals");
  if (s.has("waypoints")) p.waypoints = parse_goals(s.at("waypoints"), "planner.waypoints");
  s.finish();
  if (p.reward != "sim" && p.reward != "hw") {
    throw ConfigError("planner.reward: must be 'sim' or 'hw'");
  }
  p.mpc.reward_variant =
      p.reward == "hw" ? MpcConfig::RewardVariant::hw : MpcConfig::RewardVariant::sim;
}

void parse_acceptance(const json& j, AcceptanceSection& a) {
  Strict s(j, "acceptance");
  s.read("training_seeds", a.training_seeds);
  s.finish();
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig cfg;
  cfg.training.primitives["forward"] = PrimitiveTrainConfig{"sim-forward", "sinusoidal", 1, ""};
  cfg.training.primitives["turn_left"] =
      PrimitiveTrainConfig{"sim-turn", "sinusoidal", 2, "forward"};
  cfg.planner.goals = {{5, 0, {}}, {5, 5, {}}, {0, 5, {}}, {-5, 5, {}}, {-5, 0, {}}};
  cfg.planner.waypoints = {{0, 4, {}}, {-4, 4, {}}, {-4, 0, {}}};
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);  // allow comments
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  ExperimentConfig cfg = defaults();
  cfg.training.primitives.clear();  // file decides which primitives exist
  Strict s(j, "config");
  if (s.has("robot")) parse_robot(s.at("robot"), cfg.robot);
  if (s.has("simulator")) parse_sim(s.at("simulator"), cfg.sim);
  if (s.has("training")) parse_training(s.at("training"), cfg.training);
  if (s.has("dynamics")) parse_dynamics(s.at("dynamics"), cfg.dynamics);
  if (s.has("planner")) parse_planner(s.at("planner"), cfg.planner);
  if (s.has("acceptance")) parse_acceptance(s.at("acceptance"), cfg.acceptance);
  s.read("output_dir", cfg.output_dir);
  s.finish();
  if (cfg.training.primitives.empty()) {
    cfg.training.primitives = defaults().training.primitives;
  }
  cfg.source_hash = io::hex64(io::fnv1a64(text));
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return from_json_text(text);
}

void ExperimentConfig::override_seed(std::uint64_t master) {
  sim.seed = rng::derive(master, 0x100);
  dynamics.seed = rng::derive(master, 0x200);
  planner.mpc.seed = rng::derive(master, 0x300);
  std::uint64_t i = 0;
  for (auto& [name, prim] : training.primitives) {
    prim.seed = rng::derive(master, 0x400 + i++);
  }
  for (std::size_t k = 0; k < acceptance.training_seeds.size(); ++k) {
    acceptance.training_seeds[k] = rng::derive(master, 0x500 + k);
  }
}

void ExperimentConfig::validate() const {
  try {
    robot.validate();
    sim.validate();
    training.sac.validate();
    planner.mpc.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (training.steps_per_cycle < 1 || training.cycles_per_iteration < 1 ||
      training.iterations < 0) {
    throw ConfigError("training: steps/cycles must be >= 1 and iterations >= 0");
  }
  if (!(training.amplitude_bound > 0.0)) {
    throw ConfigError("training.amplitude_bound: must be > 0");
  }
  if (dynamics.cycles < 1 || dynamics.holdout_cycles < 1) {
    throw ConfigError("dynamics: cycle counts must be >= 1");
  }
  if (acceptance.training_seeds.empty()) {
    throw ConfigError("acceptance.training_seeds: must not be empty");
  }
  for (const auto& [name, prim] : training.primitives) {
    if (!prim.reuse_buffer.empty() && !training.primitives.count(prim.reuse_buffer)) {
      throw ConfigError("training.primitives." + name + ".reuse_buffer: unknown primitive '" +
                        prim.reuse_buffer + "'");
    }
  }
}

HighLevelGoal ExperimentConfig::to_goal(const GoalSpec& g) const {
  HighLevelGoal goal;
  goal.x = g.x;
  goal.y = g.y;
  goal.theta = g.theta;
  goal.orientation_weight = planner.orientation_weight;
  return goal;
}

std::string default_config_json() {
  json j;
  ExperimentConfig d = ExperimentConfig::defaults();
  j["robot"] = {{"mount_radius", d.robot.mount_radius}, {"coxa", d.robot.coxa},
                {"femur", d.robot.femur},               {"tibia", d.robot.tibia},
                {"body_height", d.robot.body_height},   {"kp", d.robot.kp},
                {"kd", d.robot.kd},                     {"joint_velocity_limit", d.robot.joint_velocity_limit}};
  j["simulator"] = {{"dt", d.sim.dt},
                    {"contact_height", d.sim.contact_height},
                    {"slip", d.sim.slip},
                    {"noise_std", d.sim.noise_std},
                    {"seed", d.sim.seed}};
  j["training"] = {
      {"steps_per_cycle", d.training.steps_per_cycle},
      {"cycles_per_iteration", d.training.cycles_per_iteration},
      {"iterations", d.training.iterations},
      {"amplitude_bound", d.training.amplitude_bound},
      {"turn_yaw_target", d.training.turn_yaw_target},
      {"sac",
       {{"discount", d.training.sac.discount},
        {"temperature", d.training.sac.temperature},
        {"kl_coeff", d.training.sac.kl_coeff},
        {"polyak", d.training.sac.polyak},
        {"batch_size", d.training.sac.batch_size},
        {"gradient_steps_per_cycle", d.training.sac.gradient_steps_per_cycle},
        {"snapshot_interval", d.training.sac.snapshot_interval},
        {"critic_lr", d.training.sac.critic_lr},
        {"policy_lr", d.training.sac.policy_lr},
        {"buffer_capacity", d.training.sac.buffer_capacity}}},
      {"primitives",
       {{"forward", {{"reward", "sim-forward"}, {"kind", "sinusoidal"}, {"seed", 1}}},
        {"turn_left",
         {{"reward", "sim-turn"}, {"kind", "sinusoidal"}, {"seed", 2}, {"reuse_buffer", "forward"}}}}}};
  j["dynamics"] = {{"cycles", d.dynamics.cycles},
                   {"per_primitive", d.dynamics.per_primitive},
                   {"zero_stand", d.dynamics.zero_stand},
                   {"holdout_cycles", d.dynamics.holdout_cycles},
                   {"seed", d.dynamics.seed}};
  j["planner"] = {{"horizon", d.planner.mpc.horizon},
                  {"reward", d.planner.reward},
                  {"goal_tolerance", d.planner.mpc.goal_tolerance},
                  {"max_cycles", d.planner.mpc.max_cycles},
                  {"steps_per_cycle", d.planner.mpc.steps_per_cycle},
                  {"seed", d.planner.mpc.seed},
                  {"goals", json::array({{5, 0}, {5, 5}, {0, 5}, {-5, 5}, {-5, 0}})},
                  {"waypoints", json::array({{0, 4}, {-4, 4}, {-4, 0}})}};
  j["acceptance"] = {{"training_seeds", d.acceptance.training_seeds}};
  j["output_dir"] = d.output_dir;
  return j.dump(2) + "\n";
}

}  // namespace hexmpc
