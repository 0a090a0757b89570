#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace textclass {

// Seeded generator whose stream is reproducible across platforms: all
// bounded draws go through bounded() below instead of distribution
// objects, whose output is implementation-defined.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform draw in [0, n). n must be > 0.
  std::uint64_t bounded(std::uint64_t n) {
    // rejection sampling to avoid modulo bias
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[bounded(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Stable seed derivation for independent sub-streams (per fold, per label,
// ...), so parallel schedules cannot change any stream.
std::uint64_t derive_seed(std::uint64_t base, const std::string& stream_name);

}  // namespace textclass
