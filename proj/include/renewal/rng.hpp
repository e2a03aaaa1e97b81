#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace renewal {

// Seeded random stream with portable sampling helpers. All distribution
// sampling is implemented by inversion on top of the raw 64-bit engine so
// that a given seed produces the same draws on every platform (the standard
// library distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform double in [0, 1) with 53 bits of precision.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  // Geometric on {1, 2, ...} with success probability p: P(k) = (1-p)^{k-1} p.
  long geometric(double p) {
    if (p >= 1.0) return 1;
    double u = uniform();
    long k = 1 + static_cast<long>(std::floor(std::log1p(-u) / std::log1p(-p)));
    return k < 1 ? 1 : k;
  }

  // Index sampled from a finite distribution by CDF inversion.
  int categorical(const std::vector<double>& probs) {
    double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
      acc += probs[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
  }

 private:
  std::mt19937_64 eng_;
};

// SplitMix64 finalizer; used for deriving independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Normative stream-derivation rule for sweeps: the replication seed is the
// base seed XOR a SplitMix64 hash of the (V index, delta index, replication
// index) triple. Reordering sweep points never changes any stream.
inline std::uint64_t derive_stream(std::uint64_t base, std::uint64_t v_index,
                                   std::uint64_t delta_index,
                                   std::uint64_t replication) {
  std::uint64_t h = splitmix64(v_index);
  h = splitmix64(h ^ delta_index);
  h = splitmix64(h ^ replication);
  return base ^ h;
}

}  // namespace renewal
