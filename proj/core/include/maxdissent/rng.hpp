#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace maxdissent {

// splitmix64 finalizer; used to turn (base_seed, stream index) pairs into
// well-mixed engine seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Stream 1..runs is reserved for the per-run activation streams
// (stream = run_index + 1); fixed data (graph, problem instance, initial
// states) lives in streams above kFixedStreamBase so the two can never
// collide for any realistic run count.
inline constexpr std::uint64_t kFixedStreamBase = 1ull << 32;

inline std::uint64_t substream_seed(std::uint64_t base_seed, std::uint64_t stream) {
  return splitmix64(base_seed ^ stream);
}

// Deterministic random source. std::mt19937_64 has a fully specified output
// sequence, but the standard distributions do not, so the few draws we need
// are implemented here by hand. Identical seeds give identical draw
// sequences on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return eng_(); }

  // Unbiased integer in [0, n) via rejection sampling.
  int uniform_index(int n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return static_cast<int>(x % bound);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace maxdissent
