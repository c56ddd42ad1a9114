#include "hexmpc/dynamics_table.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace hexmpc {

using nlohmann::json;

LookupTable::LookupTable(int primitive_count) : entries_(primitive_count) {
  if (primitive_count < 1) throw std::invalid_argument("LookupTable: need at least one entry");
}

void LookupTable::observe(int id, const DeltaPose& delta) {
  Entry& e = entries_.at(id);
  auto xy = delta.cartesian();
  std::array<double, 3> obs = {xy[0], xy[1], delta.beta};
  e.count += 1;
  for (int i = 0; i < 3; ++i) {
    double d = obs[i] - e.mean[i];
    e.mean[i] += d / static_cast<double>(e.count);
    e.m2[i] += d * (obs[i] - e.mean[i]);
  }
}

void LookupTable::set_hard_zero(int id) {
  Entry& e = entries_.at(id);
  e.hard_zero = true;
}

bool LookupTable::has(int id) const {
  if (id < 0 || id >= size()) return false;
  const Entry& e = entries_[id];
  return e.hard_zero || e.count > 0;
}

DeltaPose LookupTable::predict(int id) const {
  const Entry& e = entries_.at(id);
  if (e.hard_zero) return DeltaPose();
  if (e.count == 0) {
    throw std::runtime_error(std::string("no dynamics learned for primitive ") +
                             std::to_string(id));
  }
  return DeltaPose::from_cartesian(e.mean[0], e.mean[1], wrap_angle(e.mean[2]));
}

std::array<double, 3> LookupTable::mean_cartesian(int id) const {
  const Entry& e = entries_.at(id);
  if (e.hard_zero) return {0.0, 0.0, 0.0};
  return e.mean;
}

std::array<double, 3> LookupTable::variance(int id) const {
  const Entry& e = entries_.at(id);
  std::array<double, 3> v{};
  if (e.count >= 2) {
    for (int i = 0; i < 3; ++i) v[i] = e.m2[i] / static_cast<double>(e.count - 1);
  }
  return v;
}

std::array<double, 3> LookupTable::standard_error(int id) const {
  const Entry& e = entries_.at(id);
  std::array<double, 3> se{};
  if (e.count >= 2) {
    auto v = variance(id);
    for (int i = 0; i < 3; ++i) se[i] = std::sqrt(v[i] / static_cast<double>(e.count));
  }
  return se;
}

std::string LookupTable::to_json() const {
  json j;
  j["format"] = "hexmpc-table";
  j["version"] = 1;
  json entries = json::array();
  for (int id = 0; id < size(); ++id) {
    const Entry& e = entries_[id];
    json je;
    je["id"] = id;
    je["name"] = id < kPrimitiveCount ? primitive_name(id) : std::to_string(id);
    je["count"] = e.count;
    je["mean"] = e.mean;
    je["m2"] = e.m2;
    je["hard_zero"] = e.hard_zero;
    entries.push_back(je);
  }
  j["entries"] = entries;
  return j.dump(2);
}

LookupTable LookupTable::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("table file: parse error: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "hexmpc-table") {
    throw std::runtime_error("table file: not a hexmpc table");
  }
  if (j.value("version", 0) != 1) {
    throw std::runtime_error("table file: unsupported version");
  }
  const json& entries = j.at("entries");
  LookupTable table(static_cast<int>(entries.size()));
  for (const json& je : entries) {
    int id = je.at("id").get<int>();
    Entry& e = table.entries_.at(id);
    e.count = je.at("count").get<std::uint64_t>();
    e.mean = je.at("mean").get<std::array<double, 3>>();
    e.m2 = je.at("m2").get<std::array<double, 3>>();
    e.hard_zero = je.at("hard_zero").get<bool>();
  }
  return table;
}

void LookupTable::save(const std::string& path) const {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << to_json() << "\n";
  if (!f) throw std::runtime_error("write failed: " + path);
}

LookupTable LookupTable::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open table file: " + path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  return from_json(text);
}

LearnTableResult learn_table(const Simulator& sim, SimState& state,
                             const PrimitiveLibrary& library, const LearnTableOptions& options) {
  if (options.cycles < 0) throw std::invalid_argument("learn_table: negative cycle count");
  LearnTableResult result;
  rng::Stream pick(rng::derive(options.seed, rng::tag::dynamics));
  rng::Stream act_rng(rng::derive(options.seed, rng::tag::dynamics ^ 0xa5a5));
  const int total = options.per_primitive ? options.cycles * kPrimitiveCount : options.cycles;
  try {
    for (int c = 0; c < total; ++c) {
      int id = options.per_primitive ? c % kPrimitiveCount : pick.index(kPrimitiveCount);
      CycleResult cycle =
          sim.run_cycle(state, library[id], options.steps_per_cycle, options.mode, act_rng);
      state = cycle.state;
      result.table.observe(id, cycle.delta);
      result.cycles_run += 1;
    }
  } catch (const std::exception& e) {
    result.error = e.what();
  }
  if (options.zero_stand) {
    result.table.set_hard_zero(kPrimitiveStand);
  }
  return result;
}

std::vector<Pose2> table_rollout(const LookupTable& table, const Pose2& pose0,
                                 const std::vector<int>& primitive_ids) {
  std::vector<Pose2> poses;
  poses.reserve(primitive_ids.size() + 1);
  poses.push_back(pose0);
  for (int id : primitive_ids) {
    poses.push_back(compose(poses.back(), table.predict(id)));
  }
  return poses;
}

}  // namespace hexmpc
