#pragma once

#include <cstdint>
#include <random>

namespace driftfuse {

/// Deterministic random stream. Every simulation trial owns one; a given
/// seed always reproduces the same draw sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double gaussian(double stddev) { return stddev == 0.0 ? 0.0 : stddev * normal_(engine_); }
  double uniform() { return uniform_(engine_); }  // [0, 1)
  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Seed for one sweep trial, derived from (master seed, cell, trial) so
/// results do not depend on execution order or parallelism.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell,
                          std::uint64_t trial);

}  // namespace driftfuse
