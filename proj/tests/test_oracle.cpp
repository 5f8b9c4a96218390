#include <array>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include <gmp.h>
#include <gtest/gtest.h>

#include "benford/matrixdyn.hpp"
#include "benford/oracle.hpp"
#include "benford/orbits.hpp"

using namespace benford;
using namespace benford::oracle;

namespace {

// Leading digits straight from GMP's decimal conversion.
std::vector<int> gmp_first_digits(SequenceKind kind, std::size_t n) {
  std::vector<int> out;
  mpz_t x, prev, tmp;
  mpz_inits(x, prev, tmp, nullptr);
  mpz_set_ui(x, 1);
  mpz_set_ui(prev, 0);
  for (std::size_t k = 1; k <= n; ++k) {
    switch (kind) {
      case SequenceKind::PowerOfTwo:
        mpz_mul_2exp(x, x, 1);
        break;
      case SequenceKind::Factorial:
        mpz_mul_ui(x, x, k);
        break;
      default:  // Fibonacci: (prev, x) -> (x, prev + x), starting F_1 = 1
        if (k > 1) {
          mpz_add(tmp, prev, x);
          mpz_set(prev, x);
          mpz_set(x, tmp);
        }
        break;
    }
    char* s = mpz_get_str(nullptr, 10, x);
    out.push_back(s[0] - '0');
    void (*freefunc)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(s, std::char_traits<char>::length(s) + 1);
  }
  mpz_clears(x, prev, tmp, nullptr);
  return out;
}

std::array<std::uint64_t, 9> counts(const DigitHistogram& h) { return h.counts; }

}  // namespace

TEST(Oracle, SmallExamples) {
  EXPECT_EQ(exact_first_digits(ExactSequenceKind::power_of_two(), 6), (std::vector<int>{2, 4, 8, 1, 3, 6}));
  EXPECT_EQ(exact_first_digits(ExactSequenceKind::fibonacci(), 7), (std::vector<int>{1, 1, 2, 3, 5, 8, 1}));
  EXPECT_EQ(exact_first_digits(ExactSequenceKind::factorial(), 5), (std::vector<int>{1, 2, 6, 2, 1}));
}

TEST(Oracle, AgreesWithGmp) {
  for (auto kind : {SequenceKind::PowerOfTwo, SequenceKind::Fibonacci, SequenceKind::Factorial}) {
    EXPECT_EQ(exact_first_digits(ExactSequenceKind::of(kind), 1500), gmp_first_digits(kind, 1500));
  }
}

TEST(Oracle, FibonacciHistograms) {
  const auto h3 = exact_digit_histogram(ExactSequenceKind::fibonacci(), 1000);
  EXPECT_EQ(counts(h3), (std::array<std::uint64_t, 9>{301, 177, 125, 96, 80, 67, 56, 53, 45}));
  EXPECT_EQ(h3.total, 1000u);
  const auto h4 = exact_digit_histogram(ExactSequenceKind::fibonacci(), 10000);
  EXPECT_EQ(counts(h4), (std::array<std::uint64_t, 9>{3011, 1762, 1250, 968, 792, 668, 580, 513, 456}));
}

TEST(Oracle, PowerOfTwoPercentages) {
  const auto h = exact_digit_histogram(ExactSequenceKind::power_of_two(), 10000);
  const std::array<std::int64_t, 9> expected{3010, 1761, 1249, 970, 791, 670, 579, 512, 458};
  for (int d = 1; d <= 9; ++d) EXPECT_EQ(percent_hundredths(h.count(d), h.total), expected[d - 1]) << d;
}

TEST(Oracle, LinearRecursion) {
  // Lucas numbers 1, 3, 4, 7, 11, 18, 29, 47, 76, 123
  const auto d = exact_first_digits(ExactSequenceKind::linear({1, 1}, {1, 3}), 10);
  EXPECT_EQ(d, (std::vector<int>{1, 3, 4, 7, 1, 1, 2, 4, 7, 1}));
}

TEST(Oracle, TwoStepSmall) {
  // x_n = x_{n-1}^2 + x_{n-2}^2 from 1, 1, in 64-bit integers while they fit
  std::vector<std::uint64_t> x{1, 1};
  for (int i = 0; i < 5; ++i) {
    const std::uint64_t a = x[x.size() - 1], b = x[x.size() - 2];
    x.push_back(a * a + b * b);
  }
  EXPECT_EQ(x[6], 866u * 866u + 29u * 29u);
  EXPECT_EQ(x[6], 750797u);
  const auto d = exact_first_digits(ExactSequenceKind::two_step(1, 1, 2, 2, 1, 1), 7);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(d[i], std::to_string(x[i])[0] - '0') << i;
}

TEST(Oracle, TwoStepRefusesLongRuns) {
  EXPECT_THROW(exact_first_digits(ExactSequenceKind::two_step(1, 1, 2, 2, 1, 1), 26), OracleRefusal);
  EXPECT_NO_THROW(exact_first_digits(ExactSequenceKind::two_step(1, 1, 2, 2, 1, 1), 25));
}

TEST(Oracle, LogValuesMatchDigits) {
  for (auto kind : {SequenceKind::PowerOfTwo, SequenceKind::Fibonacci, SequenceKind::Factorial}) {
    const auto k = ExactSequenceKind::of(kind);
    const auto logs = exact_log_values(k, 3000);
    const auto digits = exact_first_digits(k, 3000);
    for (std::size_t i = 0; i < logs.size(); ++i) ASSERT_EQ(first_digit(logs[i]), digits[i]) << i;
  }
}

TEST(OracleProperty, LogDomainAgreement) {
  const std::size_t n = 10000;
  const auto pow2 = exact_first_digits(ExactSequenceKind::power_of_two(), n);
  const auto fib = exact_first_digits(ExactSequenceKind::fibonacci(), n);

  const Orbit orbit = iterate_map(MapSpec::affine_plus(2.0), 1.0L, n);
  ASSERT_EQ(orbit.values.size(), n);
  const auto rec = linear_recursion(RecursionSpec{{1.0, 1.0}, {1.0, 1.0}}, n).seq;
  ASSERT_EQ(rec.size(), n);

  int bad2 = 0, badf = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bad2 += first_digit(orbit.values[i]) != pow2[i];
    badf += first_digit(rec[i]) != fib[i];
  }
  EXPECT_LE(bad2, 5);
  EXPECT_LE(badf, 5);

  const auto h2 = digit_histogram(orbit.values);
  const auto hf = digit_histogram(rec);
  const auto o2 = exact_digit_histogram(ExactSequenceKind::power_of_two(), n);
  const auto of = exact_digit_histogram(ExactSequenceKind::fibonacci(), n);
  for (int d = 0; d < 9; ++d) {
    EXPECT_LE(std::llabs(static_cast<long long>(h2.counts[d]) - static_cast<long long>(o2.counts[d])), 5);
    EXPECT_LE(std::llabs(static_cast<long long>(hf.counts[d]) - static_cast<long long>(of.counts[d])), 5);
  }
}

TEST(OracleProperty, FibonacciMatrixExact) {
  IntMatrix a(2, 2);
  a << 1, 1, 1, 0;
  const auto entries = matrix_power_entries_exact(a, 1, 1, 90);
  std::uint64_t f0 = 1, f1 = 1;  // F_1, F_2
  for (std::size_t n = 1; n <= 90; ++n) {
    // [A^n]_11 = F_{n+1}
    EXPECT_EQ(static_cast<std::uint64_t>(entries[n - 1]), f1) << n;
    const std::uint64_t next = f0 + f1;
    f0 = f1;
    f1 = next;
  }
}
