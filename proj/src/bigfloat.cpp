#include "benford/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace benford {

BigFloat::BigFloat(mpfr_prec_t prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(long double value, mpfr_prec_t prec) {
  mpfr_init2(value_, prec);
  mpfr_set_ld(value_, value, MPFR_RNDN);
}

BigFloat::~BigFloat() {
  if (value_->_mpfr_d != nullptr) mpfr_clear(value_);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  *value_ = *other.value_;
  other.value_->_mpfr_d = nullptr;
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    if (value_->_mpfr_d == nullptr) {
      mpfr_init2(value_, other.precision());
    } else {
      mpfr_set_prec(value_, other.precision());
    }
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) {
    if (value_->_mpfr_d != nullptr) mpfr_clear(value_);
    *value_ = *other.value_;
    other.value_->_mpfr_d = nullptr;
  }
  return *this;
}

BigFloat BigFloat::from_string(const std::string& text, mpfr_prec_t prec) {
  BigFloat r(prec);
  if (mpfr_set_str(r.value_, text.c_str(), 10, MPFR_RNDN) != 0) {
    throw std::invalid_argument("BigFloat: cannot parse '" + text + "'");
  }
  return r;
}

void BigFloat::set_precision(mpfr_prec_t prec) {
  mpfr_prec_round(value_, prec, MPFR_RNDN);
}

std::string BigFloat::to_string(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, value_);
  return std::string(buf.data());
}

namespace {

mpfr_prec_t joint_precision(const BigFloat& a, const BigFloat& b) {
  return std::max(a.precision(), b.precision());
}

// ln 10 at no less than w bits, recomputed only when a wider one is asked for.
const BigFloat& ln10_at_least(mpfr_prec_t w) {
  thread_local BigFloat cache(64);
  thread_local bool ready = false;
  if (!ready || cache.precision() < w) {
    cache = BigFloat(w + 64);
    mpfr_set_ui(cache.get(), 10, MPFR_RNDN);
    mpfr_log(cache.get(), cache.get(), MPFR_RNDN);
    ready = true;
  }
  return cache;
}

}  // namespace

BigFloat operator+(const BigFloat& a, const BigFloat& b) {
  BigFloat r(joint_precision(a, b));
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

BigFloat operator-(const BigFloat& a, const BigFloat& b) {
  BigFloat r(joint_precision(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

BigFloat operator*(const BigFloat& a, const BigFloat& b) {
  BigFloat r(joint_precision(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

BigFloat operator/(const BigFloat& a, const BigFloat& b) {
  BigFloat r(joint_precision(a, b));
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.get(), b.get()); }
bool operator>(const BigFloat& a, const BigFloat& b) {
  return mpfr_greater_p(a.get(), b.get());
}

BigFloat log10_exact(long double x, mpfr_prec_t prec) {
  if (!(x > 0.0L) || !std::isfinite(x)) {
    throw std::domain_error("log10_exact: argument must be positive and finite");
  }
  BigFloat r(x, std::max<mpfr_prec_t>(prec, 64));
  mpfr_log10(r.get(), r.get(), MPFR_RNDN);
  r.set_precision(prec);
  return r;
}

void add_log10_one_plus_exp10_neg(BigFloat& acc, const BigFloat& d) {
  if (d.sign() < 0) {
    throw std::invalid_argument("add_log10_one_plus_exp10_neg: d must be >= 0");
  }
  const mpfr_prec_t prec = acc.precision();
  const long e = acc.is_zero() ? -static_cast<long>(prec) : acc.exponent();
  const double dd = d.to_double();
  const double cutoff = static_cast<double>(prec + 8 - e) * std::log10(2.0);
  if (!std::isfinite(dd) || dd > cutoff) return;

  const mpfr_prec_t w = std::clamp<mpfr_prec_t>(prec - e + 32, 64, prec + 32);
  BigFloat t(w);
  mpfr_neg(t.get(), d.get(), MPFR_RNDN);
  mpfr_exp10(t.get(), t.get(), MPFR_RNDN);
  mpfr_log1p(t.get(), t.get(), MPFR_RNDN);
  mpfr_div(t.get(), t.get(), ln10_at_least(w).get(), MPFR_RNDN);
  mpfr_add(acc.get(), acc.get(), t.get(), MPFR_RNDN);
}

void log10_sum_exp10(BigFloat& acc, const BigFloat& u, const BigFloat& v) {
  BigFloat diff(joint_precision(u, v));
  mpfr_sub(diff.get(), u.get(), v.get(), MPFR_RNDN);
  const bool u_wins = diff.sign() >= 0;
  mpfr_abs(diff.get(), diff.get(), MPFR_RNDN);
  mpfr_set(acc.get(), u_wins ? u.get() : v.get(), MPFR_RNDN);
  add_log10_one_plus_exp10_neg(acc, diff);
}

SignedLogValue to_signed_log(int sign, const BigFloat& y) {
  if (sign == 0) return SignedLogValue::zero();
  if (!y.is_finite()) throw std::domain_error("to_signed_log: non-finite log");
  BigFloat k(y.precision());
  mpfr_floor(k.get(), y.get());
  BigFloat f(y.precision());
  mpfr_sub(f.get(), y.get(), k.get(), MPFR_RNDN);
  SignedLogValue v;
  v.sign = sign > 0 ? 1 : -1;
  v.characteristic = k.to_ld();
  v.mantissa = f.to_ld();
  if (v.mantissa >= 1.0L) {
    v.mantissa = 0.0L;
    v.characteristic += 1.0L;
  }
  return v;
}

mpfr_prec_t precision_for_growth(double growth, std::size_t steps, double log_mag) {
  const double g = std::max(growth, 1.0);
  const double bits = static_cast<double>(steps) * std::log2(g) +
                      std::log2(std::max(std::fabs(log_mag), 1.0)) +
                      std::log2(static_cast<double>(steps) + 1.0) + 128.0;
  constexpr double kMaxBits = 1 << 22;
  return static_cast<mpfr_prec_t>(std::min(std::ceil(bits), kMaxBits));
}

}  // namespace benford
