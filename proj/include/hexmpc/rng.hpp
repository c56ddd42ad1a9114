#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace hexmpc::rng {

// splitmix64 step; the basis of every random stream in the project so that
// runs are reproducible from a single 64-bit seed.
constexpr std::uint64_t splitmix(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Derives an independent child seed from (seed, stream tag).
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix(s);
  s ^= tag * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull;
  std::uint64_t b = splitmix(s);
  return a ^ (b + 0x9e3779b97f4a7c15ull);
}

// Stream tags for the places that need their own generator.
namespace tag {
inline constexpr std::uint64_t sim_noise = 0x01;
inline constexpr std::uint64_t policy_init = 0x02;
inline constexpr std::uint64_t exploration = 0x03;
inline constexpr std::uint64_t replay_sampling = 0x04;
inline constexpr std::uint64_t critic_init = 0x05;
inline constexpr std::uint64_t dynamics = 0x06;
inline constexpr std::uint64_t planner = 0x07;
inline constexpr std::uint64_t test = 0xff;
}  // namespace tag

/// Deterministic random stream (splitmix64 driven).
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix(state_); }

  /// Uniform double in (0, 1].
  double next_unit() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  /// Standard normal via Box-Muller (single value, no cached state).
  double normal() {
    double u1 = next_unit();
    double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  double normal(double mean, double std) { return mean + std * normal(); }

  /// Uniform integer in [0, n).
  int index(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  bool bernoulli(double p) { return next_unit() <= p; }

 private:
  std::uint64_t state_;
};

/// Counter-based Gaussian triple: depends only on (seed, counter), never on
/// how many draws other code made before.
inline std::array<double, 3> counter_normal3(std::uint64_t seed, std::uint64_t counter) {
  Stream s(derive(seed, counter * 0x632be59bd9b4e019ull + 0xd3833e804f4c574bull));
  return {s.normal(), s.normal(), s.normal()};
}

}  // namespace hexmpc::rng
