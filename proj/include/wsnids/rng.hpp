#pragma once

#include <cstdint>
#include <random>

namespace wsnids {

/// Seed for a whole run; identical seed and scenario give an identical log.
struct RngSeed {
  std::uint64_t value = 0;
};

/// One round of splitmix64; used to derive independent per-node streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t salt = 0) {
  return splitmix64(splitmix64(seed ^ salt) + stream);
}

/// std::mt19937_64 output is fully specified by the standard; the
/// distributions are not, so uniform reals are built by hand here.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wsnids
