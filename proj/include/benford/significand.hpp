#ifndef BENFORD_SIGNIFICAND_HPP_
#define BENFORD_SIGNIFICAND_HPP_

#include <cmath>
#include <cstdint>

namespace benford {

/// A real number stored as sign and base-10 logarithm of its magnitude.
///
/// The logarithm is split into an integer characteristic and a fractional
/// mantissa in [0, 1). Orbits that grow doubly exponentially carry a
/// characteristic far beyond the point where a single extended-precision
/// float could still resolve the fractional part; keeping the two pieces
/// apart lets the mantissa stay exact while the characteristic only records
/// the order of magnitude (it may saturate to +/-inf).
struct SignedLogValue {
  int sign = 0;                  // -1, 0, +1; 0 encodes the real number 0
  long double characteristic = 0; // integer-valued
  long double mantissa = 0;       // in [0, 1)

  static SignedLogValue zero() { return {}; }

  /// Builds a value from sign and log10|x|.
  static SignedLogValue from_log(int sign, long double log_mag);

  /// Builds a value from an integer characteristic and a mantissa that may
  /// lie slightly outside [0, 1); the pair is renormalised.
  static SignedLogValue from_parts(int sign, long double characteristic,
                                   long double mantissa);

  static SignedLogValue from_real(long double x);

  long double log_mag() const { return characteristic + mantissa; }

  /// Back to a native real; overflows to +/-inf or underflows to 0 outside
  /// the long double range.
  long double to_real() const;

  bool is_zero() const { return sign == 0; }

  SignedLogValue negated() const {
    SignedLogValue v = *this;
    v.sign = -v.sign;
    return v;
  }

  /// Multiplication by a nonzero real factor (a shift in the log domain).
  SignedLogValue scaled_by(long double factor) const;
};

/// S(x): the unique t in [1, 10) with |x| = 10^k t, and 0 for x = 0.
/// Throws std::domain_error for non-finite input.
double significand(double x);

/// D1(x) = floor(S(x)) in 1..9, and 0 for x = 0.
int first_digit(double x);

/// Fractional part of log10|x| for the stored value; equals log10 S(x).
/// Throws std::domain_error for the zero value.
long double log_significand(const SignedLogValue& v);

double significand(const SignedLogValue& v);
int first_digit(const SignedLogValue& v);

}  // namespace benford

#endif  // BENFORD_SIGNIFICAND_HPP_
