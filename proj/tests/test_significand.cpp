#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "benford/significand.hpp"

using namespace benford;

namespace {

// log10(2) by repeated squaring: each square doubles the exponent, and a
// division by 10 whenever the value passes 10 emits a binary digit.
long double log10_two_by_squaring() {
  long double x = 2.0L, bit = 0.5L, out = 0.0L;
  for (int i = 0; i < 60; ++i) {
    x *= x;
    if (x >= 10.0L) {
      x /= 10.0L;
      out += bit;
    }
    bit /= 2;
  }
  return out;
}

}  // namespace

TEST(Significand, Examples) {
  EXPECT_NEAR(benford::significand(2025.0), 2.025, 1e-15);
  EXPECT_EQ(benford::significand(0.0), 0.0);
  EXPECT_NEAR(benford::significand(-20.25), 2.025, 1e-15);
  EXPECT_EQ(benford::significand(1000.0), 1.0);
  EXPECT_EQ(benford::significand(1e-5), 1.0);
}

TEST(Significand, NonFiniteThrows) {
  EXPECT_THROW(benford::significand(std::numeric_limits<double>::infinity()), std::domain_error);
  EXPECT_THROW(benford::significand(std::nan("")), std::domain_error);
  EXPECT_THROW(first_digit(-std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST(FirstDigit, Examples) {
  EXPECT_EQ(first_digit(2025.0), 2);
  EXPECT_EQ(first_digit(1.0), 1);
  EXPECT_EQ(first_digit(0.02025), 2);
  EXPECT_EQ(first_digit(0.0), 0);
  EXPECT_EQ(first_digit(-999.0), 9);
  EXPECT_EQ(first_digit(0.1), 1);
  EXPECT_EQ(first_digit(99.99999999999999), 9);
}

TEST(LogSignificand, Examples) {
  const long double l2 = log10_two_by_squaring();
  EXPECT_EQ(log_significand(SignedLogValue::from_real(100.0L)), 0.0L);
  EXPECT_NEAR(static_cast<double>(log_significand(SignedLogValue::from_real(2.0L))),
              static_cast<double>(l2), 1e-15);
  EXPECT_NEAR(static_cast<double>(log_significand(SignedLogValue::from_real(-0.002L))),
              static_cast<double>(l2), 1e-15);
  EXPECT_THROW(log_significand(SignedLogValue::zero()), std::domain_error);
}

TEST(SignedLogValue, RoundTrip) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> e(-300.0, 300.0);
  for (int i = 0; i < 1000; ++i) {
    const long double x = std::pow(10.0L, static_cast<long double>(e(gen))) * (i % 2 ? -1 : 1);
    const long double back = SignedLogValue::from_real(x).to_real();
    EXPECT_NEAR(static_cast<double>(back / x), 1.0, 1e-15) << static_cast<double>(x);
  }
}

TEST(SignedLogValue, FromPartsNormalises) {
  const auto v = SignedLogValue::from_parts(1, 5, 1.25L);
  EXPECT_EQ(v.characteristic, 6);
  EXPECT_EQ(v.mantissa, 0.25L);
  const auto w = SignedLogValue::from_parts(-1, 5, -0.75L);
  EXPECT_EQ(w.characteristic, 4);
  EXPECT_EQ(w.mantissa, 0.25L);
  EXPECT_EQ(w.sign, -1);
}

TEST(SignedLogValue, ZeroIgnoresLog) {
  const auto z = SignedLogValue::from_log(0, 17.3L);
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(benford::significand(z), 0.0);
  EXPECT_EQ(first_digit(z), 0);
}

TEST(SignificandProperty, PowerOfTenScaling) {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> digits(100000, 999999);
  std::uniform_int_distribution<int> k(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    const int m = digits(gen);
    const int e = k(gen);
    const SignedLogValue v = SignedLogValue::from_real(m);
    const SignedLogValue shifted = SignedLogValue::from_parts(1, v.characteristic + e, v.mantissa);
    EXPECT_EQ(benford::significand(shifted), benford::significand(v));
    // native: m * 10^e parsed from text, correctly rounded once
    const double native = std::stod(std::to_string(m) + "e" + std::to_string(e));
    EXPECT_NEAR(benford::significand(native), m / 1e5, 1e-14) << m << "e" << e;
  }
}

TEST(SignificandProperty, ConsistentWithLogSignificand) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> e(-200.0, 200.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::pow(10.0, e(gen)) * (i % 3 == 0 ? -1 : 1);
    const double s = benford::significand(x);
    const double via_log = std::pow(10.0, static_cast<double>(log_significand(SignedLogValue::from_real(x))));
    EXPECT_NEAR(s / via_log, 1.0, 1e-12);
    EXPECT_GE(s, 1.0);
    EXPECT_LT(s, 10.0);
    EXPECT_EQ(first_digit(x), static_cast<int>(std::floor(s)));
  }
}

TEST(SignificandProperty, SignSymmetry) {
  for (double x : {3.5, 1e-7, 123456.0, 9.999}) {
    EXPECT_EQ(benford::significand(-x), benford::significand(x));
    EXPECT_EQ(first_digit(-x), first_digit(x));
  }
}
