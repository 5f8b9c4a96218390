#ifndef BENFORD_BIGFLOAT_HPP_
#define BENFORD_BIGFLOAT_HPP_

// Thin RAII layer over MPFR for the log-domain recursions whose fractional
// parts must survive magnification by b^N.

#include <mpfr.h>

#include <string>

#include "benford/significand.hpp"

namespace benford {

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 128);
  BigFloat(long double value, mpfr_prec_t prec);
  ~BigFloat();

  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;

  static BigFloat from_string(const std::string& text, mpfr_prec_t prec);

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  /// Changes precision, rounding the current value.
  void set_precision(mpfr_prec_t prec);
  void set(long double v) { mpfr_set_ld(value_, v, MPFR_RNDN); }
  void set(const BigFloat& v) { mpfr_set(value_, v.value_, MPFR_RNDN); }

  long double to_ld() const { return mpfr_get_ld(value_, MPFR_RNDN); }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }
  /// Binary exponent e with 2^(e-1) <= |x| < 2^e; meaningless for zero.
  long exponent() const { return static_cast<long>(mpfr_get_exp(value_)); }

  std::string to_string(int digits = 20) const;

 private:
  mpfr_t value_;
};

BigFloat operator+(const BigFloat& a, const BigFloat& b);
BigFloat operator-(const BigFloat& a, const BigFloat& b);
BigFloat operator*(const BigFloat& a, const BigFloat& b);
BigFloat operator/(const BigFloat& a, const BigFloat& b);
bool operator<(const BigFloat& a, const BigFloat& b);
bool operator>(const BigFloat& a, const BigFloat& b);

/// log10 of a positive exact double, correctly rounded at prec bits.
BigFloat log10_exact(long double x, mpfr_prec_t prec);

/// log10(1 + 10^(-d)) for d >= 0, added into `acc`. Skipped when the term
/// is below the last bit of acc; otherwise evaluated at the precision that
/// acc actually resolves.
void add_log10_one_plus_exp10_neg(BigFloat& acc, const BigFloat& d);

/// acc = max(u, v) + log10(1 + 10^(-|u - v|)), i.e. log10(10^u + 10^v).
void log10_sum_exp10(BigFloat& acc, const BigFloat& u, const BigFloat& v);

/// Splits y = log10|x| into characteristic and mantissa without first
/// rounding y to long double.
SignedLogValue to_signed_log(int sign, const BigFloat& y);

/// Bits needed so that frac(b^n y) is still resolved after n steps.
mpfr_prec_t precision_for_growth(double growth, std::size_t steps, double log_mag);

}  // namespace benford

#endif  // BENFORD_BIGFLOAT_HPP_
