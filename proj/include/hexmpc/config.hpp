#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hexmpc/planner.hpp"
#include "hexmpc/robot.hpp"
#include "hexmpc/sac.hpp"
#include "hexmpc/sim.hpp"

namespace hexmpc {

/// Schema or value problem in a config file; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PrimitiveTrainConfig {
  std::string reward = "sim-forward";
  std::string kind = "sinusoidal";  // sinusoidal | neural
  std::uint64_t seed = 1;
  std::string reuse_buffer;  // name of a previously trained primitive, or empty
};

struct TrainingConfig {
  int steps_per_cycle = 100;
  int cycles_per_iteration = 10;
  int iterations = 50;
  double amplitude_bound = 0.6;
  double turn_yaw_target = 0.2;  // desired heading change per turn cycle (radians)
  SacConfig sac;
  std::map<std::string, PrimitiveTrainConfig> primitives;
};

struct DynamicsConfig {
  int cycles = 50;
  bool per_primitive = false;  // interpret `cycles` as cycles per primitive
  bool zero_stand = true;
  int holdout_cycles = 500;
  std::uint64_t seed = 7;
};

struct GoalSpec {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> theta;
};

struct PlannerSection {
  MpcConfig mpc;
  std::string reward = "sim";  // sim | hw
  double orientation_weight = 1.0;
  std::vector<GoalSpec> goals;
  std::vector<GoalSpec> waypoints;
};

struct AcceptanceSection {
  std::vector<std::uint64_t> training_seeds = {101, 102, 103, 104, 105};
};

struct ExperimentConfig {
  RobotModel robot = RobotModel::standard();
  SimConfig sim;
  TrainingConfig training;
  DynamicsConfig dynamics;
  PlannerSection planner;
  AcceptanceSection acceptance;
  std::string output_dir = "out";

  std::string source_hash;  // fnv1a-64 of the loaded file, hex

  static ExperimentConfig defaults();
  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  /// Rebases every seed in the config from one master seed.
  void override_seed(std::uint64_t master);

  void validate() const;

  HighLevelGoal to_goal(const GoalSpec& g) const;
};

std::string default_config_json();

}  // namespace hexmpc
