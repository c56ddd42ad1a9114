#include "hexmpc/planner.hpp"

#include <cmath>
#include <stdexcept>

namespace hexmpc {

void MpcConfig::validate() const {
  if (horizon < 1) throw std::invalid_argument("MpcConfig: horizon must be >= 1");
  if (!(goal_tolerance > 0.0)) throw std::invalid_argument("MpcConfig: goal_tolerance must be > 0");
  if (max_cycles < 0) throw std::invalid_argument("MpcConfig: max_cycles must be >= 0");
  if (steps_per_cycle < 1) throw std::invalid_argument("MpcConfig: steps_per_cycle must be >= 1");
  if (!(dropout_prob >= 0.0 && dropout_prob <= 1.0)) {
    throw std::invalid_argument("MpcConfig: dropout_prob must be in [0,1]");
  }
}

namespace {

double goal_reward(const Pose2& pose, const HighLevelGoal& goal,
                   MpcConfig::RewardVariant variant) {
  return variant == MpcConfig::RewardVariant::hw ? hl_reward_hw(pose, goal)
                                                 : hl_reward_sim(pose, goal);
}

}  // namespace

Plan plan(const Pose2& pose, const HighLevelGoal& goal, const LookupTable& table,
          const MpcConfig& config, int library_size) {
  config.validate();
  if (library_size < 1) throw std::invalid_argument("plan: empty primitive library");
  std::vector<DeltaPose> deltas(library_size);
  for (int id = 0; id < library_size; ++id) {
    deltas[id] = table.predict(id);  // throws for unseen primitives
  }
  const int h = config.horizon;

  Plan best;
  std::vector<int> seq(h, 0);
  std::vector<Pose2> poses(h);
  std::uint64_t evaluated = 0;
  bool first = true;
  // Odometer enumeration in lexicographic order; strict improvement keeps the
  // lexicographically smallest maximizer.
  while (true) {
    Pose2 p = pose;
    double score = 0.0;
    for (int i = 0; i < h; ++i) {
      p = compose(p, deltas[seq[i]]);
      poses[i] = p;
      if (config.score_sum) score += goal_reward(p, goal, config.reward_variant);
    }
    if (!config.score_sum) score = goal_reward(p, goal, config.reward_variant);
    ++evaluated;
    if (first || score > best.score) {
      best.sequence = seq;
      best.predicted = poses;
      best.score = score;
      first = false;
    }
    int pos = h - 1;
    while (pos >= 0 && seq[pos] == library_size - 1) {
      seq[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++seq[pos];
  }
  best.evaluated = evaluated;
  return best;
}

MpcResult mpc_run(const Simulator& sim, SimState& state, const PrimitiveLibrary& library,
                  const LookupTable& table, const HighLevelGoal& goal, const MpcConfig& config) {
  config.validate();
  MpcResult result;
  rng::Stream dropout_rng(rng::derive(config.seed, rng::tag::planner));
  rng::Stream act_rng(rng::derive(config.seed, rng::tag::planner ^ 0x33));
  for (int cycle = 0;; ++cycle) {
    double distance = planar_distance(state.pose, goal.x, goal.y);
    if (distance <= config.goal_tolerance) {
      result.success = true;
      result.cycles = cycle;
      result.final_distance = distance;
      return result;
    }
    if (cycle >= config.max_cycles) {
      result.success = false;
      result.cycles = cycle;
      result.final_distance = distance;
      return result;
    }

    CycleLog entry;
    entry.cycle = cycle;
    bool dropout = config.dropout_prob > 0.0 && dropout_rng.bernoulli(config.dropout_prob);
    if (dropout) {
      // Measured pose withheld: hold position until sensing recovers.
      entry.primitive = kPrimitiveStand;
      entry.planned = state.pose;
      entry.score = goal_reward(state.pose, goal, config.reward_variant);
      entry.dropout = true;
    } else {
      Plan p = plan(state.pose, goal, table, config);
      entry.primitive = p.sequence.front();
      entry.planned = p.predicted.front();
      entry.score = p.score;
    }
    CycleResult cr = sim.run_cycle(state, library[entry.primitive], config.steps_per_cycle,
                                   ActMode::deterministic, act_rng);
    state = cr.state;
    entry.realized = state.pose;
    entry.distance = planar_distance(state.pose, goal.x, goal.y);
    result.log.push_back(entry);
  }
}

std::vector<WaypointResult> follow_waypoints(const Simulator& sim, SimState& state,
                                             const PrimitiveLibrary& library,
                                             const LookupTable& table,
                                             const std::vector<HighLevelGoal>& waypoints,
                                             const MpcConfig& config) {
  std::vector<WaypointResult> results;
  results.reserve(waypoints.size());
  for (const HighLevelGoal& goal : waypoints) {
    WaypointResult wr;
    wr.goal = goal;
    wr.result = mpc_run(sim, state, library, table, goal, config);
    results.push_back(std::move(wr));
  }
  return results;
}

}  // namespace hexmpc
