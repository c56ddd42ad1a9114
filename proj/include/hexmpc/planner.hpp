#pragma once

#include <cstdint>
#include <vector>

#include "hexmpc/dynamics_table.hpp"
#include "hexmpc/geometry.hpp"
#include "hexmpc/rewards.hpp"

namespace hexmpc {

struct MpcConfig {
  int horizon = 3;
  enum class RewardVariant { sim, hw } reward_variant = RewardVariant::sim;
  double goal_tolerance = 0.3;  // meters
  int max_cycles = 400;
  int steps_per_cycle = 100;
  bool score_sum = false;       // score per-step reward sum instead of the terminal pose
  double dropout_prob = 0.0;    // per-cycle chance the measured pose is withheld
  std::uint64_t seed = 0;

  void validate() const;
};

struct Plan {
  std::vector<int> sequence;     // primitive ids, length = horizon
  std::vector<Pose2> predicted;  // poses after each step of the sequence
  double score = 0.0;
  std::uint64_t evaluated = 0;   // number of sequences scored
};

/// Exhaustive search over all K^H primitive sequences against the lookup
/// table. Ties break to the lexicographically smallest index sequence.
/// Throws if the table lacks an entry for any library primitive.
Plan plan(const Pose2& pose, const HighLevelGoal& goal, const LookupTable& table,
          const MpcConfig& config, int library_size = kPrimitiveCount);

struct CycleLog {
  int cycle = 0;
  int primitive = 0;
  Pose2 planned;
  Pose2 realized;
  double distance = 0.0;
  double score = 0.0;
  bool dropout = false;
};

struct MpcResult {
  std::vector<CycleLog> log;
  bool success = false;
  int cycles = 0;
  double final_distance = 0.0;
};

/// Receding-horizon loop: plan, execute the first primitive for one full
/// cycle (deterministic actions), measure, re-plan. Terminates on
/// distance <= goal_tolerance or after max_cycles.
MpcResult mpc_run(const Simulator& sim, SimState& state, const PrimitiveLibrary& library,
                  const LookupTable& table, const HighLevelGoal& goal, const MpcConfig& config);

struct WaypointResult {
  HighLevelGoal goal;
  MpcResult result;
};

/// Runs mpc_run per waypoint, carrying the simulator state; advances to the
/// next waypoint on success or when the cycle budget runs out.
std::vector<WaypointResult> follow_waypoints(const Simulator& sim, SimState& state,
                                             const PrimitiveLibrary& library,
                                             const LookupTable& table,
                                             const std::vector<HighLevelGoal>& waypoints,
                                             const MpcConfig& config);

}  // namespace hexmpc
