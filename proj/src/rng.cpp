#include "driftfuse/rng.hpp"

namespace driftfuse {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell,
                          std::uint64_t trial) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ (cell + 0x51ED2701FFA3C6A5ULL));
  s = splitmix64(s ^ (trial + 0xABCC5167CCAD925FULL));
  return s;
}

}  // namespace driftfuse
