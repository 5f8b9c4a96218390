#ifndef BENFORD_RNG_HPP_
#define BENFORD_RNG_HPP_

#include <cstdint>
#include <optional>
#include <random>

namespace benford {

/// SplitMix64 output function; used to derive substream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Reproducible random stream: std::mt19937_64 (whose output sequence is
/// fixed by the C++ standard) with hand-written transforms, so the same seed
/// gives the same numbers with any conforming standard library.
///
/// substream(i) seeds a fresh engine with splitmix64(seed + (i + 1) * golden)
/// where golden = 0x9E3779B97F4A7C15.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  Rng substream(std::uint64_t index) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1): (k + 1/2) 2^-53.
  double uniform_open();
  /// Standard normal by Box-Muller on uniform_open().
  double normal();
  bool coin() { return (next_u64() >> 63) != 0; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

}  // namespace benford

#endif  // BENFORD_RNG_HPP_
