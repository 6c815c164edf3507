#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace patrol {

// SplitMix64 finalizer, used to turn (seed, key) tuples into engine seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seedable, splittable pseudo-random stream backed by mt19937_64.
//
// derive(key) produces a statistically independent substream of the same
// root, so each (replication, vertex) pair can draw without coordination and
// results do not depend on scheduling order.  All draws go through explicit
// inverse-CDF transforms, so sequences are reproducible across platforms.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : root_(seed), engine_(splitmix64(seed)) {}

  RngStream derive(std::uint64_t key) const {
    return RngStream(splitmix64(root_ ^ (0x9e3779b97f4a7c15ULL * (key + 1))));
  }

  std::uint64_t root() const { return root_; }

  // Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, hi].
  double uniform_open_closed(double hi) { return hi * (1.0 - uniform01()); }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Exponential with the given rate, via inverse CDF.
  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::uint64_t root_;
  std::mt19937_64 engine_;
};

}  // namespace patrol
