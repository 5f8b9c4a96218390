#ifndef BENFORD_ORACLE_HPP_
#define BENFORD_ORACLE_HPP_

// Exact integer ground truth for leading-digit statistics. Nothing in here
// touches floating point or logarithms.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "benford/conformance.hpp"

namespace benford::oracle {

/// Non-negative integer in base 10^9 limbs, least significant limb first.
class DecimalBigInt {
 public:
  static constexpr std::uint32_t kBase = 1'000'000'000u;

  DecimalBigInt() = default;
  explicit DecimalBigInt(std::uint64_t value);

  bool is_zero() const { return limbs_.empty(); }

  DecimalBigInt& operator+=(const DecimalBigInt& other);
  DecimalBigInt& mul_small(std::uint64_t factor);  // factor < 2^32

  /// Leading decimal digit (0 for zero), read from the top limb.
  int leading_digit() const;
  std::size_t decimal_digits() const;
  /// The first min(count, digits) decimal digits.
  std::string leading_string(std::size_t count) const;
  std::string to_string() const;

  friend bool operator==(const DecimalBigInt&, const DecimalBigInt&) = default;

 private:
  void trim();
  std::vector<std::uint32_t> limbs_;
};

enum class SequenceKind {
  PowerOfTwo,       // 2^n, n = 1..N
  Fibonacci,        // F_1 = F_2 = 1
  Factorial,        // n!, n = 1..N
  LinearRecursion,  // x_n = c_1 x_{n-1} + ... + c_d x_{n-d}
  TwoStepPoly,      // x_n = a1 x_{n-1}^b1 + a2 x_{n-2}^b2
};

struct ExactSequenceKind {
  SequenceKind kind = SequenceKind::PowerOfTwo;
  // LinearRecursion: coefficients c_1..c_d and seeds x_1..x_d.
  std::vector<std::uint64_t> coefficients;
  std::vector<std::uint64_t> seeds;
  // TwoStepPoly: x_1 = seeds[0], x_2 = seeds[1].
  std::uint64_t a1 = 1, a2 = 1;
  unsigned b1 = 2, b2 = 2;

  static ExactSequenceKind power_of_two() { return of(SequenceKind::PowerOfTwo); }
  static ExactSequenceKind fibonacci() { return of(SequenceKind::Fibonacci); }
  static ExactSequenceKind factorial() { return of(SequenceKind::Factorial); }
  static ExactSequenceKind of(SequenceKind k) {
    ExactSequenceKind out;
    out.kind = k;
    return out;
  }
  static ExactSequenceKind linear(std::vector<std::uint64_t> coefficients,
                                  std::vector<std::uint64_t> seeds);
  static ExactSequenceKind two_step(std::uint64_t a1, std::uint64_t a2,
                                    unsigned b1, unsigned b2,
                                    std::uint64_t x1, std::uint64_t x2);
};

/// Raised when a request exceeds what exact arithmetic is allowed to do.
class OracleRefusal : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kTwoStepMaxTerms = 25;

/// Leading digits of x_1..x_N computed from the exact integers.
std::vector<int> exact_first_digits(const ExactSequenceKind& kind, std::size_t n);

/// x_1..x_N as sign and log10, read off the first 19 exact digits.
std::vector<SignedLogValue> exact_log_values(const ExactSequenceKind& kind, std::size_t n);

DigitHistogram exact_digit_histogram(const ExactSequenceKind& kind, std::size_t n);

}  // namespace benford::oracle

#endif  // BENFORD_ORACLE_HPP_
