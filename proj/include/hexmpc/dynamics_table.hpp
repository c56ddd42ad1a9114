#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hexmpc/geometry.hpp"
#include "hexmpc/policy.hpp"
#include "hexmpc/sim.hpp"

namespace hexmpc {

/// Per-primitive mean cycle displacement with running sample statistics.
/// Averaging happens in Cartesian delta space (dx, dy, dbeta); the polar
/// (r, alpha, beta) form is produced on read.
class LookupTable {
 public:
  struct Entry {
    std::uint64_t count = 0;
    std::array<double, 3> mean{};  // (dx, dy, dbeta)
    std::array<double, 3> m2{};    // sum of squared deviations (Welford)
    bool hard_zero = false;
  };

  explicit LookupTable(int primitive_count = kPrimitiveCount);

  int size() const { return static_cast<int>(entries_.size()); }
  const Entry& entry(int id) const { return entries_.at(id); }

  void observe(int id, const DeltaPose& delta);
  void set_hard_zero(int id);

  bool has(int id) const;
  /// Mean displacement in canonical (r, alpha, beta) form. Throws
  /// std::runtime_error("no dynamics learned ...") for an unseen primitive.
  DeltaPose predict(int id) const;

  std::array<double, 3> mean_cartesian(int id) const;
  /// Unbiased per-component sample variance (zero when count < 2).
  std::array<double, 3> variance(int id) const;
  std::array<double, 3> standard_error(int id) const;

  std::string to_json() const;
  static LookupTable from_json(const std::string& text);
  void save(const std::string& path) const;
  static LookupTable load(const std::string& path);

 private:
  std::vector<Entry> entries_;
};

struct LearnTableOptions {
  int cycles = 50;                 // total cycles of uniformly random primitives
  bool per_primitive = false;      // round-robin `cycles` cycles of each primitive instead
  int steps_per_cycle = 100;
  bool zero_stand = true;          // pin the stand entry to zero displacement
  ActMode mode = ActMode::deterministic;
  std::uint64_t seed = 0;
};

struct LearnTableResult {
  LookupTable table;
  int cycles_run = 0;
  std::optional<std::string> error;  // simulator failure; table holds partial counts
};

/// Algorithm middle loop: execute random primitive cycles back-to-back
/// (state carries over) and average each primitive's measured displacement.
LearnTableResult learn_table(const Simulator& sim, SimState& state,
                             const PrimitiveLibrary& library, const LearnTableOptions& options);

/// Folds predicted displacements from pose0; result[0] == pose0.
std::vector<Pose2> table_rollout(const LookupTable& table, const Pose2& pose0,
                                 const std::vector<int>& primitive_ids);

}  // namespace hexmpc
