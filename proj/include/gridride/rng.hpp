#pragma once

#include <cmath>
#include <cstdint>

namespace gridride::rng {

// splitmix64 finalizer. All randomness in the simulator is counter-based:
// a draw is a pure function of (seed, stream tag, coordinates), so the same
// entity sees the same draw no matter which pipeline variant is running or
// how many draws happened before it.
inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream tags keep independent purposes decorrelated under one seed.
enum class Stream : std::uint64_t {
  TaskCount = 1,
  TaskGeometry = 2,
  TaskEnergy = 3,
  WorkerGen = 4,
  Preference = 5,
  BidDecision = 6,
  BidNoise = 7,
  BidMarkup = 8,
  Instance = 9,
};

inline std::uint64_t key(std::uint64_t seed, Stream s, std::uint64_t a = 0,
                         std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = mix(seed ^ 0x5bf03635aa5b3acdULL);
  h = mix(h ^ static_cast<std::uint64_t>(s));
  h = mix(h ^ a);
  h = mix(h ^ b);
  h = mix(h ^ c);
  return h;
}

// Small sequential generator for draws that need a variable number of
// uniforms (Poisson-style counts, rejection loops).
class Sequence {
 public:
  explicit Sequence(std::uint64_t k) : state_(k) {}
  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }
  double next_u01() { return to_u01(next_u64()); }

  static double to_u01(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

inline double u01(std::uint64_t k) { return Sequence::to_u01(mix(k)); }

inline double uniform(std::uint64_t k, double lo, double hi) {
  return lo + (hi - lo) * u01(k);
}

inline bool bernoulli(std::uint64_t k, double p) { return u01(k) < p; }

// Box-Muller; consumes two counter positions derived from k.
inline double normal(std::uint64_t k, double mean, double sd) {
  Sequence s(k);
  double u1 = s.next_u01();
  double u2 = s.next_u01();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  return mean + sd * z;
}

}  // namespace gridride::rng
