#include "benford/rng.hpp"

#include <cmath>
#include <numbers>

namespace benford {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

Rng Rng::substream(std::uint64_t index) const {
  return Rng(splitmix64(seed_ + (index + 1) * kGolden));
}

double Rng::uniform_open() {
  const std::uint64_t k = next_u64() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(theta);
  return r * std::cos(theta);
}

}  // namespace benford
