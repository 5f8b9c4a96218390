#include <cmath>

#include "benford/bigfloat.hpp"
#include "benford/orbits.hpp"

namespace benford {
namespace {

constexpr double kAsymptoticSwitch = 1e-8;
constexpr double kDivergence = 10.0;
constexpr double kRootTolerance = 1e-15;

SignedLogValue as_log(const BigFloat& v) {
  if (v.is_zero()) return SignedLogValue::zero();
  BigFloat y(v.precision());
  mpfr_abs(y.get(), v.get(), MPFR_RNDN);
  mpfr_log10(y.get(), y.get(), MPFR_RNDN);
  return to_signed_log(v.sign(), y);
}

}  // namespace

// Iterates the error e = x - ln 2 directly. For f = e^x - 2 the Newton map
// becomes e -> e + expm1(-e); for the cube it is e -> e + expm1(-e)/3.
NewtonSequences newton_sequences(NewtonTarget f, double x0, std::size_t n) {
  if (n == 0) throw std::invalid_argument("newton_sequences: N must be >= 1");
  if (!std::isfinite(x0)) throw std::domain_error("newton_sequences: non-finite x0");
  const bool simple = f == NewtonTarget::ExpMinus2;
  const mpfr_prec_t prec = simple ? precision_for_growth(2.0, n, 10.0)
                                  : precision_for_growth(1.0, n, static_cast<double>(n));

  BigFloat eps(prec);
  {
    BigFloat ln2(prec);
    mpfr_const_log2(ln2.get(), MPFR_RNDN);
    BigFloat x(x0, prec);
    mpfr_sub(eps.get(), x.get(), ln2.get(), MPFR_RNDN);
  }
  if (std::fabs(eps.to_double()) < kRootTolerance) {
    throw std::invalid_argument("newton_sequences: x0 coincides with the root ln 2");
  }

  NewtonSequences out;
  out.diffs.reserve(n);
  out.errors.reserve(n);
  BigFloat d(prec);
  std::size_t k = 0;
  for (; k < n; ++k) {
    const double ed = eps.to_double();
    if (!std::isfinite(ed) || std::fabs(ed) > kDivergence) {
      throw NewtonDiverged("newton_sequences: iteration diverged at step " + std::to_string(k) +
                           " (x0 outside the basin of ln 2)");
    }
    if (simple && std::fabs(ed) < kAsymptoticSwitch) break;
    mpfr_neg(d.get(), eps.get(), MPFR_RNDN);
    mpfr_expm1(d.get(), d.get(), MPFR_RNDN);
    if (!simple) mpfr_div_ui(d.get(), d.get(), 3, MPFR_RNDN);
    out.errors.push_back(as_log(eps));
    out.diffs.push_back(as_log(d));
    mpfr_add(eps.get(), eps.get(), d.get(), MPFR_RNDN);
    ++out.direct_steps;
    if (eps.is_zero()) {
      // Landed on the root in working precision; the orbit stays there.
      for (++k; k < n; ++k) {
        out.errors.push_back(SignedLogValue::zero());
        out.diffs.push_back(SignedLogValue::zero());
      }
      return out;
    }
  }
  if (k == n) return out;

  // Asymptotic regime: log|e'| = 2 log|e| + log C with C = f''/(2 f') = 1/2.
  const int s0 = eps.sign();
  BigFloat y(prec);
  mpfr_abs(y.get(), eps.get(), MPFR_RNDN);
  mpfr_log10(y.get(), y.get(), MPFR_RNDN);
  const BigFloat log_c = log10_exact(0.5L, prec);
  int s = s0;
  BigFloat ln10(prec);
  mpfr_set_ui(ln10.get(), 10, MPFR_RNDN);
  mpfr_log(ln10.get(), ln10.get(), MPFR_RNDN);
  BigFloat yd(prec);
  for (; k < n; ++k) {
    out.errors.push_back(to_signed_log(s, y));
    // e' - e = -e (1 - C e).
    mpfr_set(yd.get(), y.get(), MPFR_RNDN);
    const long e = yd.exponent();
    const double cutoff = static_cast<double>(prec + 8 - e) * std::log10(2.0);
    if (-y.to_double() < cutoff) {
      const mpfr_prec_t w = std::max<mpfr_prec_t>(64, prec - e + 32);
      BigFloat t(w);
      mpfr_exp10(t.get(), y.get(), MPFR_RNDN);
      mpfr_mul_d(t.get(), t.get(), -0.5 * s, MPFR_RNDN);
      mpfr_log1p(t.get(), t.get(), MPFR_RNDN);
      mpfr_div(t.get(), t.get(), ln10.get(), MPFR_RNDN);
      mpfr_add(yd.get(), yd.get(), t.get(), MPFR_RNDN);
    }
    out.diffs.push_back(to_signed_log(-s, yd));
    mpfr_mul_2ui(y.get(), y.get(), 1, MPFR_RNDN);
    mpfr_add(y.get(), y.get(), log_c.get(), MPFR_RNDN);
    s = 1;
  }
  return out;
}

}  // namespace benford
