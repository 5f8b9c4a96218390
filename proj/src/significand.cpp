#include "benford/significand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace benford {
namespace {

constexpr long double kBoundarySnap = 1e-15L;

long double below_one() {
  return std::nextafter(1.0L, 0.0L);
}

bool same_decimal(long double ax, long double p) {
  if (ax == p) return true;
  // Values that entered as doubles are compared at double resolution, so
  // 1e-5 (the double) counts as exactly 10^-5.
  const double ad = static_cast<double>(ax);
  return static_cast<long double>(ad) == ax &&
         ad == static_cast<double>(p);
}

// Splits ax > 0 into characteristic k and mantissa f with ax = 10^(k+f).
// When f lands within kBoundarySnap of an integer the decision is made by
// comparing ax against the power of ten directly.
void decompose(long double ax, long double& k, long double& f) {
  const long double l = std::log10(ax);
  k = std::floor(l);
  f = l - k;
  if (f > 1.0L - kBoundarySnap) {
    const long double p = std::pow(10.0L, k + 1.0L);
    if (same_decimal(ax, p) || ax > p) {
      k += 1.0L;
      f = same_decimal(ax, p) ? 0.0L : std::log10(ax / p);
    }
  } else if (f < kBoundarySnap) {
    const long double p = std::pow(10.0L, k);
    if (same_decimal(ax, p)) {
      f = 0.0L;
    } else if (ax < p) {
      k -= 1.0L;
      f = 1.0L + std::log10(ax / p);
      if (f >= 1.0L) f = below_one();
    }
  }
  if (f < 0.0L) f = 0.0L;
}

void require_finite(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("significand: non-finite input");
  }
}

}  // namespace

SignedLogValue SignedLogValue::from_log(int sign, long double log_mag) {
  if (sign == 0) return zero();
  const long double k = std::floor(log_mag);
  return from_parts(sign, k, log_mag - k);
}

SignedLogValue SignedLogValue::from_parts(int sign, long double characteristic,
                                          long double mantissa) {
  if (sign == 0) return zero();
  SignedLogValue v;
  v.sign = sign > 0 ? 1 : -1;
  const long double shift = std::floor(mantissa);
  v.characteristic = characteristic + shift;
  v.mantissa = mantissa - shift;
  if (v.mantissa >= 1.0L) {
    v.mantissa = 0.0L;
    v.characteristic += 1.0L;
  }
  return v;
}

SignedLogValue SignedLogValue::from_real(long double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("SignedLogValue: non-finite input");
  }
  if (x == 0.0L) return zero();
  SignedLogValue v;
  v.sign = x > 0 ? 1 : -1;
  decompose(std::fabs(x), v.characteristic, v.mantissa);
  return v;
}

long double SignedLogValue::to_real() const {
  if (sign == 0) return 0.0L;
  return sign * std::pow(10.0L, characteristic) * std::pow(10.0L, mantissa);
}

SignedLogValue SignedLogValue::scaled_by(long double factor) const {
  if (factor == 0.0L || sign == 0) return zero();
  const int s = factor > 0 ? sign : -sign;
  return from_parts(s, characteristic, mantissa + std::log10(std::fabs(factor)));
}

double significand(double x) {
  require_finite(x);
  if (x == 0.0) return 0.0;
  const long double ax = std::fabs(static_cast<long double>(x));
  long double k = 0, f = 0;
  decompose(ax, k, f);
  long double t = std::pow(10.0L, f);

  // Digit boundaries: decide t >= c by comparing against c * 10^k.
  const long double c = std::nearbyint(t);
  if (c >= 2.0L && c <= 10.0L && std::fabs(t - c) < 1e-12L) {
    const long double boundary = c * std::pow(10.0L, k);
    if (same_decimal(ax, boundary)) {
      t = c;
    } else if (ax > boundary) {
      t = std::max(t, c);
    } else {
      t = std::min(t, std::nextafter(c, 0.0L));
    }
  }
  double td = static_cast<double>(t);
  if (td >= 10.0) td = std::nextafter(10.0, 0.0);
  if (td < 1.0) td = 1.0;
  // Rounding to double must not carry t across a digit boundary.
  if (t < c && td >= static_cast<double>(c) && c <= 10.0L) {
    td = std::nextafter(static_cast<double>(c), 0.0);
  }
  return td;
}

int first_digit(double x) {
  const double s = significand(x);
  if (s == 0.0) return 0;
  return static_cast<int>(std::floor(s));
}

long double log_significand(const SignedLogValue& v) {
  if (v.sign == 0) {
    throw std::domain_error("log_significand: zero value");
  }
  return v.mantissa;
}

double significand(const SignedLogValue& v) {
  if (v.sign == 0) return 0.0;
  double t = static_cast<double>(std::pow(10.0L, v.mantissa));
  if (t >= 10.0) t = std::nextafter(10.0, 0.0);
  if (t < 1.0) t = 1.0;
  return t;
}

int first_digit(const SignedLogValue& v) {
  if (v.sign == 0) return 0;
  // Compare in log space; mantissas within kBoundarySnap below log10(d) are
  // rounding residue from exact multiples such as 20 or 3e5.
  int d = 1;
  while (d < 9 &&
         v.mantissa >= std::log10(static_cast<long double>(d + 1)) - kBoundarySnap) {
    ++d;
  }
  return d;
}

}  // namespace benford
