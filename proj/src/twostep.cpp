#include "benford/twostep.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <regex>
#include <stdexcept>
#include <thread>

#include "benford/bigfloat.hpp"

namespace benford {

namespace {

constexpr long double kLn10 = std::numbers::ln10_v<long double>;
constexpr double kEscape = 10.0;
constexpr mpfr_prec_t kBasePrecision = 128;

std::optional<Rational> reduce(__int128 num, __int128 den) {
  if (den == 0) return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 a = num < 0 ? -num : num, b = den;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();
  if (num > kMax || -num > kMax || den > kMax) return std::nullopt;
  return Rational{static_cast<std::int64_t>(num), static_cast<std::int64_t>(den)};
}

// Exact value of an ExactReal at prec bits.
BigFloat to_big(const ExactReal& x, mpfr_prec_t prec) {
  BigFloat r(prec);
  if (x.exact) {
    mpfr_set_si(r.get(), x.exact->num, MPFR_RNDN);
    mpfr_div_si(r.get(), r.get(), x.exact->den, MPFR_RNDN);
  } else {
    mpfr_set_d(r.get(), x.value, MPFR_RNDN);
  }
  return r;
}

// log10 of a coefficient; -inf for a zero coefficient.
BigFloat log10_of(const ExactReal& x, mpfr_prec_t prec) {
  BigFloat r(prec);
  if (x.value == 0.0) {
    mpfr_set_inf(r.get(), -1);
    return r;
  }
  if (x.exact) {
    BigFloat num(prec + 64), den(prec + 64);
    mpfr_set_si(num.get(), x.exact->num, MPFR_RNDN);
    mpfr_set_si(den.get(), x.exact->den, MPFR_RNDN);
    mpfr_log10(num.get(), num.get(), MPFR_RNDN);
    mpfr_log10(den.get(), den.get(), MPFR_RNDN);
    mpfr_sub(r.get(), num.get(), den.get(), MPFR_RNDN);
    return r;
  }
  return log10_exact(x.value, prec);
}

long double log10_ld(const ExactReal& x) {
  if (x.value == 0.0) return -std::numeric_limits<long double>::infinity();
  if (x.exact) {
    return std::log10(static_cast<long double>(x.exact->num)) -
           std::log10(static_cast<long double>(x.exact->den));
  }
  return std::log10(static_cast<long double>(x.value));
}

long double ld(const ExactReal& x) {
  if (x.exact) return static_cast<long double>(x.exact->num) / x.exact->den;
  return x.value;
}

double growth_rate(const TwoStepParams& p) {
  return std::max({p.b1.value, std::sqrt(p.b2.value), 1.0});
}

// Worst per-step amplification of a perturbation of (y_{n-1}, y_n).
double perturbation_rate(const TwoStepParams& p) {
  return std::max({p.b1.value, p.b2.value, 1.0});
}

/// (y_{n-1}, y_n) -> (y_n, log10(a1 10^(b1 y_n) + a2 10^(b2 y_{n-1}))).
class LogOrbit {
 public:
  LogOrbit(const TwoStepParams& p, BigFloat y1, BigFloat y2, mpfr_prec_t prec)
      : la1_(log10_of(p.a1, prec)),
        la2_(log10_of(p.a2, prec)),
        b1_(to_big(p.b1, prec)),
        b2_(to_big(p.b2, prec)),
        prev_(std::move(y1)),
        cur_(std::move(y2)),
        u_(prec),
        v_(prec),
        next_(prec) {
    prev_.set_precision(prec);
    cur_.set_precision(prec);
  }

  void step() {
    mpfr_mul(u_.get(), b1_.get(), cur_.get(), MPFR_RNDN);
    mpfr_add(u_.get(), u_.get(), la1_.get(), MPFR_RNDN);
    mpfr_mul(v_.get(), b2_.get(), prev_.get(), MPFR_RNDN);
    mpfr_add(v_.get(), v_.get(), la2_.get(), MPFR_RNDN);
    log10_sum_exp10(next_, u_, v_);
    mpfr_swap(prev_.get(), cur_.get());
    mpfr_swap(cur_.get(), next_.get());
  }

  const BigFloat& prev() const { return prev_; }
  const BigFloat& cur() const { return cur_; }

  /// b2 y_{n-1} - b1 y_n for the current pair.
  long double delta() {
    mpfr_mul(u_.get(), b2_.get(), prev_.get(), MPFR_RNDN);
    mpfr_mul(v_.get(), b1_.get(), cur_.get(), MPFR_RNDN);
    mpfr_sub(u_.get(), u_.get(), v_.get(), MPFR_RNDN);
    return u_.to_ld();
  }

 private:
  BigFloat la1_, la2_, b1_, b2_;
  BigFloat prev_, cur_;
  BigFloat u_, v_, next_;
};

BigFloat seed_log(const SignedLogValue& x, mpfr_prec_t prec) {
  if (x.sign <= 0) throw std::invalid_argument("twostep: seeds must be positive");
  if (!std::isfinite(x.characteristic)) {
    throw std::invalid_argument("twostep: seed magnitude out of range");
  }
  BigFloat y(x.characteristic, prec);
  mpfr_add(y.get(), y.get(), BigFloat(x.mantissa, 64).get(), MPFR_RNDN);
  return y;
}

BigFloat seed_log(long double x, mpfr_prec_t prec) {
  if (!(x > 0.0L) || !std::isfinite(x)) {
    throw std::invalid_argument("twostep: seeds must be positive and finite");
  }
  return log10_exact(x, prec);
}

long double seed_mag(const SignedLogValue& x) {
  if (x.sign <= 0) throw std::invalid_argument("twostep: seeds must be positive");
  return std::fabs(x.log_mag());
}
long double seed_mag(long double x) {
  if (!(x > 0.0L) || !std::isfinite(x)) {
    throw std::invalid_argument("twostep: seeds must be positive and finite");
  }
  return std::fabs(std::log10(x));
}

template <class Seed>
std::vector<SignedLogValue> orbit_impl(const TwoStepParams& p, const Seed& x1, const Seed& x2,
                                       std::size_t n) {
  p.validate();
  if (n == 0) throw std::invalid_argument("orbit_log: N must be >= 1");
  const double mag = static_cast<double>(std::max(seed_mag(x1), seed_mag(x2)));
  const mpfr_prec_t prec = precision_for_growth(growth_rate(p), n, mag);
  LogOrbit orbit(p, seed_log(x1, prec), seed_log(x2, prec), prec);
  std::vector<SignedLogValue> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    orbit.step();
    out.push_back(to_signed_log(1, orbit.cur()));
  }
  return out;
}

template <class Seed>
BasinLabel run_basin(const TwoStepParams& p, const Seed& x1, const Seed& x2,
                     std::size_t max_iter, mpfr_prec_t prec) {
  LogOrbit orbit(p, seed_log(x1, prec), seed_log(x2, prec), prec);
  BasinLabel out;
  out.precision_bits = static_cast<long>(prec);
  auto side = [](const BigFloat& y) {
    if (mpfr_cmp_d(y.get(), kEscape) > 0) return 1;
    if (mpfr_cmp_d(y.get(), -kEscape) < 0) return -1;
    return 0;
  };
  int before = side(orbit.prev());
  for (std::size_t it = 0;; ++it) {
    const int now = side(orbit.cur());
    if (now != 0 && now == before) {
      out.label = now > 0 ? Basin::AInfty : Basin::A0;
      out.iterations_used = it;
      break;
    }
    if (it == max_iter) {
      out.iterations_used = it;
      break;
    }
    orbit.step();
    before = now;
  }
  out.final_log_mag = orbit.cur().to_double();
  return out;
}

template <class Seed>
BasinLabel classify_impl(const TwoStepParams& p, const Seed& x1, const Seed& x2,
                         std::size_t max_iter) {
  p.validate();
  const double rate = std::log2(perturbation_rate(p));
  const double mag = static_cast<double>(std::max(seed_mag(x1), seed_mag(x2)));
  const mpfr_prec_t cap = precision_for_growth(perturbation_rate(p), max_iter, mag);
  auto needed = [&](std::size_t it) {
    return static_cast<mpfr_prec_t>(std::ceil(static_cast<double>(it) * rate +
                                              std::log2(static_cast<double>(it) + 1.0) +
                                              std::log2(std::max(mag, 1.0)) + 40.0));
  };
  mpfr_prec_t prec = std::min(kBasePrecision, cap);
  for (;;) {
    BasinLabel label = run_basin(p, x1, x2, max_iter, prec);
    if (label.label == Basin::BoundaryUndecided) return label;
    const mpfr_prec_t want = needed(label.iterations_used);
    if (want <= prec || prec >= cap) return label;
    prec = std::min(cap, std::max(2 * prec, want));
  }
}

long double log10_one_plus_exp10(long double e) {
  // log10(1 + 10^e) without overflow for large e.
  if (e > 0) return e + std::log1p(std::pow(10.0L, -e)) / kLn10;
  return std::log1p(std::pow(10.0L, e)) / kLn10;
}

void require_exponents_above_one(const TwoStepParams& p, const char* what) {
  p.validate();
  if (!p.exponents_above_one()) {
    throw std::invalid_argument(std::string(what) + ": needs b1, b2 > 1");
  }
}

bool is_inf_basin(const TwoStepParams& p, long double x1, long double x2, std::size_t max_iter) {
  return classify_basin(p, x1, x2, max_iter).label == Basin::AInfty;
}

// Shrinks [lo, hi] along the unit ray (u, v) until it is at most tol wide.
void bisect_ray(const TwoStepParams& p, long double u, long double v, long double& lo,
                long double& hi, long double tol, std::size_t max_iter) {
  while (hi - lo > tol) {
    const long double mid = 0.5L * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (is_inf_basin(p, mid * u, mid * v, max_iter)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
}

struct Pair {
  long double u = 0, v = 0;
};

Pair apply_t(const TwoStepParams& p, Pair z) {
  return {z.v, ld(p.a2) * std::pow(z.u, ld(p.b2)) + ld(p.a1) * std::pow(z.v, ld(p.b1))};
}

}  // namespace

ExactReal ExactReal::parse(const std::string& text) {
  static const std::regex kDecimal(R"(\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*)");
  static const std::regex kFraction(R"(\s*([+-]?\d+)\s*/\s*(\d+)\s*)");
  ExactReal out;
  std::smatch m;
  if (std::regex_match(text, m, kFraction)) {
    const long long num = std::stoll(m[1].str());
    const long long den = std::stoll(m[2].str());
    if (den == 0) throw std::invalid_argument("ExactReal: zero denominator in '" + text + "'");
    out.exact = reduce(num, den);
    out.value = static_cast<double>(num) / static_cast<double>(den);
    return out;
  }
  if (!std::regex_match(text, m, kDecimal) || (m[2].length() == 0 && m[3].length() == 0)) {
    throw std::invalid_argument("ExactReal: cannot parse '" + text + "'");
  }
  out.value = std::stod(text);
  const std::string digits = m[2].str() + m[3].str();
  long exp10 = -static_cast<long>(m[3].length());
  if (m[4].matched) exp10 += std::stol(m[4].str());
  if (digits.size() <= 18 && std::labs(exp10) <= 18) {
    __int128 num = digits.empty() ? 0 : std::stoll(digits);
    __int128 den = 1;
    for (long k = 0; k < std::labs(exp10); ++k) (exp10 > 0 ? num : den) *= 10;
    if (m[1].str() == "-") num = -num;
    out.exact = reduce(num, den);
  }
  return out;
}

std::string ExactReal::to_string() const {
  if (exact) {
    if (exact->den == 1) return std::to_string(exact->num);
    // Terminating decimals print as such, everything else as p/q.
    __int128 pow10 = 1;
    for (int k = 1; k <= 18; ++k) {
      pow10 *= 10;
      if (pow10 % exact->den != 0) continue;
      const __int128 scaled = static_cast<__int128>(exact->num) * (pow10 / exact->den);
      const __int128 mag = scaled < 0 ? -scaled : scaled;
      std::string frac = std::to_string(static_cast<long long>(mag % pow10));
      frac = std::string(static_cast<std::size_t>(k) - frac.size(), '0') + frac;
      while (!frac.empty() && frac.back() == '0') frac.pop_back();
      return std::string(scaled < 0 ? "-" : "") + std::to_string(static_cast<long long>(mag / pow10)) +
             "." + frac;
    }
    return std::to_string(exact->num) + "/" + std::to_string(exact->den);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string case_name(TwoStepCase c) {
  switch (c) {
    case TwoStepCase::I: return "I";
    case TwoStepCase::II: return "II";
    case TwoStepCase::III: return "III";
  }
  return "?";
}

std::string basin_name(Basin b) {
  switch (b) {
    case Basin::A0: return "A0";
    case Basin::AInfty: return "AInfty";
    case Basin::BoundaryUndecided: return "BoundaryUndecided";
  }
  return "?";
}

TwoStepParams TwoStepParams::make(double a1, double a2, double b1, double b2, bool extended) {
  TwoStepParams p;
  p.extended = extended;
  p.a1 = a1;
  p.a2 = a2;
  p.b1 = b1;
  p.b2 = b2;
  p.validate();
  return p;
}

TwoStepParams TwoStepParams::parse(const std::string& a1, const std::string& a2,
                                   const std::string& b1, const std::string& b2,
                                   bool extended) {
  TwoStepParams p;
  p.extended = extended;
  p.a1 = ExactReal::parse(a1);
  p.a2 = ExactReal::parse(a2);
  p.b1 = ExactReal::parse(b1);
  p.b2 = ExactReal::parse(b2);
  p.validate();
  return p;
}

void TwoStepParams::validate() const {
  for (const ExactReal* a : {&a1, &a2}) {
    if (!(a->value >= 0.0) || !std::isfinite(a->value)) {
      throw std::invalid_argument("TwoStepParams: a1, a2 must be finite and >= 0");
    }
  }
  if (a1.value == 0.0 && a2.value == 0.0) {
    throw std::invalid_argument("TwoStepParams: a1 and a2 cannot both be zero");
  }
  for (const ExactReal* b : {&b1, &b2}) {
    if (!std::isfinite(b->value)) throw std::invalid_argument("TwoStepParams: b must be finite");
    if (extended ? !(b->value > 0.0) : !(b->value > 1.0)) {
      throw std::invalid_argument(extended ? "TwoStepParams: b1, b2 must be > 0"
                                           : "TwoStepParams: b1, b2 must be > 1");
    }
  }
}

TwoStepCase classify_case(const TwoStepParams& p) {
  require_exponents_above_one(p, "classify_case");
  mpq_t b1, b2, sq;
  mpq_inits(b1, b2, sq, nullptr);
  auto load = [](mpq_t q, const ExactReal& x) {
    if (x.exact) {
      mpq_set_si(q, x.exact->num, static_cast<unsigned long>(x.exact->den));
      mpq_canonicalize(q);
    } else {
      mpq_set_d(q, x.value);
    }
  };
  load(b1, p.b1);
  load(b2, p.b2);
  mpq_mul(sq, b1, b1);
  const int c = mpq_cmp(sq, b2);
  mpq_clears(b1, b2, sq, nullptr);
  if (c > 0) return TwoStepCase::I;
  if (c == 0) return TwoStepCase::II;
  return TwoStepCase::III;
}

std::vector<SignedLogValue> orbit_log(const TwoStepParams& p, const SignedLogValue& x1,
                                      const SignedLogValue& x2, std::size_t n) {
  return orbit_impl(p, x1, x2, n);
}

std::vector<SignedLogValue> orbit_log(const TwoStepParams& p, long double x1, long double x2,
                                      std::size_t n) {
  return orbit_impl(p, x1, x2, n);
}

DeltaSequence delta_sequence(const TwoStepParams& p, const SignedLogValue& x1,
                             const SignedLogValue& x2, std::size_t n) {
  p.validate();
  const double mag = static_cast<double>(std::max(seed_mag(x1), seed_mag(x2)));
  const mpfr_prec_t prec = precision_for_growth(growth_rate(p), n, mag);
  LogOrbit orbit(p, seed_log(x1, prec), seed_log(x2, prec), prec);
  DeltaSequence out;
  out.values.reserve(n + 1);
  out.values.push_back(orbit.delta());
  for (std::size_t k = 0; k < n; ++k) {
    orbit.step();
    out.values.push_back(orbit.delta());
  }
  return out;
}

BasinLabel classify_basin(const TwoStepParams& p, long double x1, long double x2,
                          std::size_t max_iter) {
  return classify_impl(p, x1, x2, max_iter);
}

BasinLabel classify_basin(const TwoStepParams& p, const SignedLogValue& x1,
                          const SignedLogValue& x2, std::size_t max_iter) {
  return classify_impl(p, x1, x2, max_iter);
}

RayBoundary boundary_on_ray(const TwoStepParams& p, long double u, long double v,
                            const RayOptions& opts) {
  p.validate();
  if (!(u > 0) || !(v > 0) || !std::isfinite(u) || !std::isfinite(v)) {
    throw std::invalid_argument("boundary_on_ray: direction must be strictly positive");
  }
  if (!(opts.tol >= 1e-12)) throw std::invalid_argument("boundary_on_ray: tol must be >= 1e-12");
  const long double norm = std::hypot(u, v);
  u /= norm;
  v /= norm;

  long double lo = opts.tol;
  if (is_inf_basin(p, lo * u, lo * v, opts.max_iter)) {
    throw std::runtime_error("boundary_on_ray: no bracket, r = tol already escapes");
  }
  long double hi = 1.0L;
  while (!is_inf_basin(p, hi * u, hi * v, opts.max_iter)) {
    lo = hi;
    hi *= 2.0L;
    if (hi > opts.r_max) {
      throw std::runtime_error("boundary_on_ray: no bracket below r_max");
    }
  }
  bisect_ray(p, u, v, lo, hi, opts.tol, opts.max_iter);
  RayBoundary out;
  out.lo = lo;
  out.hi = hi;
  out.r = 0.5L * (lo + hi);
  out.x1 = out.r * u;
  out.x2 = out.r * v;
  return out;
}

CycleLimit cycle2_limit(const TwoStepParams& p, long double x1, long double x2,
                        std::size_t max_steps) {
  p.validate();
  if (!(x1 > 0) || !(x2 > 0)) throw std::invalid_argument("cycle2_limit: seeds must be positive");
  constexpr long double kReprojectTol = 1e-14L;
  constexpr long double kSettle = 1e-12L;

  // Pull z back onto the boundary along its own ray.
  auto project = [&](Pair z) {
    const long double r = std::hypot(z.u, z.v);
    const long double u = z.u / r, v = z.v / r;
    long double lo = r * (1 - 1e-6L), hi = r * (1 + 1e-6L);
    if (is_inf_basin(p, lo * u, lo * v, kDefaultBasinIterations) ||
        !is_inf_basin(p, hi * u, hi * v, kDefaultBasinIterations)) {
      RayOptions opts;
      const RayBoundary b = boundary_on_ray(p, u, v, opts);
      lo = b.lo;
      hi = b.hi;
    }
    bisect_ray(p, u, v, lo, hi, kReprojectTol * r, kDefaultBasinIterations);
    const long double rb = 0.5L * (lo + hi);
    return Pair{rb * u, rb * v};
  };

  CycleLimit out;
  Pair z = project({x1, x2});
  bool settled = false;
  for (std::size_t k = 1; k <= max_steps; ++k) {
    const Pair next = project(apply_t(p, apply_t(p, z)));
    const long double change = std::max(std::fabs(next.u - z.u), std::fabs(next.v - z.v));
    z = next;
    out.iterations = k;
    if (change < kSettle) {
      settled = true;
      break;
    }
  }
  if (!settled) throw std::runtime_error("cycle2_limit: boundary iteration did not settle");

  // Newton on F(p, q) = (a2 p^b2 + a1 q^b1 - p, a2 q^b2 + a1 p^b1 - q).
  const long double a1 = ld(p.a1), a2 = ld(p.a2), b1 = ld(p.b1), b2 = ld(p.b2);
  for (int it = 0; it < 50; ++it) {
    const long double f1 = a2 * std::pow(z.u, b2) + a1 * std::pow(z.v, b1) - z.u;
    const long double f2 = a2 * std::pow(z.v, b2) + a1 * std::pow(z.u, b1) - z.v;
    const long double j11 = a2 * b2 * std::pow(z.u, b2 - 1) - 1;
    const long double j12 = a1 * b1 * std::pow(z.v, b1 - 1);
    const long double j21 = a1 * b1 * std::pow(z.u, b1 - 1);
    const long double j22 = a2 * b2 * std::pow(z.v, b2 - 1) - 1;
    const long double det = j11 * j22 - j12 * j21;
    if (std::fabs(det) < 1e-30L) break;
    const long double du = (f1 * j22 - f2 * j12) / det;
    const long double dv = (j11 * f2 - j21 * f1) / det;
    z.u -= du;
    z.v -= dv;
    if (std::max(std::fabs(du), std::fabs(dv)) < 1e-18L) break;
  }
  const Pair tz = apply_t(p, z);
  out.p = z.u;
  out.q = z.v;
  out.residual = std::max(std::fabs(tz.u - z.v), std::fabs(tz.v - z.u));
  if (!(out.residual <= 1e-8L)) {
    throw std::runtime_error("cycle2_limit: limit does not satisfy T(p, q) = (q, p)");
  }
  return out;
}

ShadowLimit shadow_limit(long double b, std::span<const long double> y) {
  if (!(b > 1) || !std::isfinite(b)) throw std::invalid_argument("shadow_limit: b must be > 1");
  const std::size_t n = y.size();
  if (n < 2) throw std::invalid_argument("shadow_limit: need at least two terms");
  // inc[k] = y_{k+1} - b y_k in 0-based storage, i.e. increment at index k+1.
  std::vector<long double> inc(n, 0.0L);
  long double sup = 0;
  for (std::size_t k = 1; k < n; ++k) {
    inc[k] = std::fma(-b, y[k - 1], y[k]);
    if (!std::isfinite(inc[k])) throw std::domain_error("shadow_limit: unbounded increments");
    sup = std::max(sup, std::fabs(inc[k]));
  }
  std::size_t k_needed = 1;
  if (sup > 0) {
    const long double k = std::ceil(std::log(sup / ((b - 1) * 1e-15L)) / std::log(b));
    k_needed = static_cast<std::size_t>(std::max(k, 1.0L));
  }
  if (k_needed >= n) {
    throw std::domain_error("shadow_limit: increments too large for the window to certify y_hat");
  }
  // r_n = y_n - b^n y_hat satisfies r_n = (r_{n+1} - inc_{n+1}) / b; start
  // from r_N = 0 and run backwards, which only ever divides errors by b.
  std::vector<long double> r(n, 0.0L);
  for (std::size_t k = n - 1; k-- > 0;) r[k] = (r[k + 1] - inc[k + 1]) / b;
  ShadowLimit out;
  out.certified_terms = k_needed;
  out.y_hat = (y[0] - r[0]) / b;
  out.residuals.assign(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(n - k_needed));
  return out;
}

ShadowH shadow_h_caseI(const TwoStepParams& p, long double y1, long double y2,
                       std::size_t max_terms) {
  require_exponents_above_one(p, "shadow_h_caseI");
  if (classify_case(p) != TwoStepCase::I) {
    throw std::invalid_argument("shadow_h_caseI: parameters are not in case I");
  }
  if (p.a1.value == 0.0) throw std::invalid_argument("shadow_h_caseI: a1 must be positive");
  const SignedLogValue x1 = SignedLogValue::from_log(1, y1);
  const SignedLogValue x2 = SignedLogValue::from_log(1, y2);
  if (classify_basin(p, x1, x2).label != Basin::AInfty) {
    throw std::domain_error("shadow_h_caseI: seed is not in A_infty");
  }
  const long double b1 = ld(p.b1), b2 = ld(p.b2);
  const long double la1 = log10_ld(p.a1);
  const long double s = la1 / (b1 - 1);
  const long double log_a2 = log10_ld(p.a2) - (b2 - 1) / (b1 - 1) * la1;

  const double mag = static_cast<double>(std::max(std::fabs(y1), std::fabs(y2)));
  const mpfr_prec_t prec = precision_for_growth(b1, max_terms, mag);
  LogOrbit orbit(p, seed_log(x1, prec), seed_log(x2, prec), prec);

  ShadowH out;
  out.shift = s;
  long double sum = 0, bk = 1, last_delta = std::numeric_limits<long double>::infinity();
  for (std::size_t k = 1; k <= max_terms; ++k) {
    bk *= b1;
    const long double d = orbit.delta() + (b2 - b1) * s;  // delta_{k+1}, rescaled
    const long double term = p.a2.value == 0.0 ? 0.0L : log10_one_plus_exp10(d + log_a2);
    sum += term / bk;
    // Later terms are no larger once delta keeps falling and y keeps rising.
    const long double tail = term / bk / (b1 - 1);
    const bool rising = orbit.cur() > orbit.prev() && orbit.prev().to_ld() + s > 0;
    if (d < last_delta && rising && tail < 1e-14L) {
      out.h = y2 + s + sum;
      out.terms = k;
      out.tail_bound = tail;
      return out;
    }
    last_delta = d;
    orbit.step();
  }
  throw std::runtime_error("shadow_h_caseI: tail bound not reached within max_terms");
}

ShadowH shadow_h_caseIII(const TwoStepParams& p, long double y1, long double y2,
                         std::size_t max_terms) {
  require_exponents_above_one(p, "shadow_h_caseIII");
  if (classify_case(p) != TwoStepCase::III) {
    throw std::invalid_argument("shadow_h_caseIII: parameters are not in case III");
  }
  if (p.a2.value == 0.0) throw std::invalid_argument("shadow_h_caseIII: a2 must be positive");
  const SignedLogValue x1 = SignedLogValue::from_log(1, y1);
  const SignedLogValue x2 = SignedLogValue::from_log(1, y2);
  if (classify_basin(p, x1, x2).label != Basin::AInfty) {
    throw std::domain_error("even-subsequence shadow not applicable: seed is not in A_infty");
  }
  const long double b1 = ld(p.b1), b2 = ld(p.b2);
  const long double la2 = log10_ld(p.a2);
  const long double s = la2 / (b2 - 1);
  const long double log_a1 = log10_ld(p.a1) - (b1 - 1) / (b2 - 1) * la2;

  const double mag = static_cast<double>(std::max(std::fabs(y1), std::fabs(y2)));
  const mpfr_prec_t prec = precision_for_growth(std::sqrt(static_cast<double>(b2)),
                                                2 * max_terms + 1, mag);
  LogOrbit orbit(p, seed_log(x1, prec), seed_log(x2, prec), prec);
  orbit.step();  // (y2, y3)

  ShadowH out;
  out.shift = s;
  long double sum = 0, bk = 1, last_delta = -std::numeric_limits<long double>::infinity();
  for (std::size_t k = 1; k <= max_terms; ++k) {
    bk *= b2;
    const long double d = orbit.delta() + (b2 - b1) * s;  // delta_{2k+1}, rescaled
    const long double term = p.a1.value == 0.0 ? 0.0L : log10_one_plus_exp10(log_a1 - d);
    sum += term / bk;
    // On V_o the odd deltas keep growing, so later terms only shrink.
    const long double tail = term / bk / (b2 - 1);
    if (d > 50 && d > last_delta && tail < 1e-14L) {
      out.h = y2 + s + sum;
      out.terms = k;
      out.tail_bound = tail;
      return out;
    }
    last_delta = d;
    orbit.step();
    orbit.step();
  }
  throw std::domain_error("even-subsequence shadow not applicable: odd deltas did not run off");
}

std::vector<long double> r0_fixed_points(const TwoStepParams& p) {
  require_exponents_above_one(p, "r0_fixed_points");
  if (classify_case(p) != TwoStepCase::III) {
    throw std::invalid_argument("r0_fixed_points: parameters are not in case III");
  }
  if (p.a2.value == 0.0) throw std::invalid_argument("r0_fixed_points: a2 must be positive");
  const long double b1 = ld(p.b1), b2 = ld(p.b2);
  const long double la2 = log10_ld(p.a2);
  const long double s = la2 / (b2 - 1);
  const long double log_a1 = log10_ld(p.a1) - (b1 - 1) / (b2 - 1) * la2;
  if (!std::isfinite(log_a1)) return {};  // a1 = 0: R0(r) = b2 r, fixed point at -inf only

  // g(r) = R0(r) - r is strictly convex with its minimum where R0'(r) = 1.
  auto g = [&](long double r) {
    return b2 * (std::max(log_a1, r) + std::log1p(std::pow(10.0L, -std::fabs(log_a1 - r))) / kLn10) - r;
  };
  const long double rm = log_a1 - std::log10(b2 - 1);
  const long double gm = g(rm);
  constexpr long double kTangent = 1e-14L;
  std::vector<long double> out;
  if (gm > kTangent) return out;
  const long double shift = (b2 - b1) * s;
  if (gm >= -kTangent) {
    out.push_back(rm - shift);
    return out;
  }
  auto root = [&](long double inner, long double dir) {
    long double step = 1, outer = inner + dir * step;
    while (g(outer) < 0) {
      step *= 2;
      outer = inner + dir * step;
    }
    long double neg = inner, pos = outer;
    for (int it = 0; it < 200 && std::fabs(pos - neg) > 1e-15L * std::max(1.0L, std::fabs(neg));
         ++it) {
      const long double mid = 0.5L * (neg + pos);
      (g(mid) < 0 ? neg : pos) = mid;
    }
    return 0.5L * (neg + pos);
  };
  out.push_back(root(rm, -1) - shift);
  out.push_back(root(rm, +1) - shift);
  return out;
}

CaseIIRatios caseII_ratio_orbit(const TwoStepParams& p, long double r2, std::size_t n) {
  require_exponents_above_one(p, "caseII_ratio_orbit");
  if (classify_case(p) != TwoStepCase::II) {
    throw std::invalid_argument("caseII_ratio_orbit: parameters are not in case II");
  }
  if (p.a1.value == 0.0) throw std::invalid_argument("caseII_ratio_orbit: a1 must be positive");
  if (!(r2 > 0) || !std::isfinite(r2)) throw std::invalid_argument("caseII_ratio_orbit: r2 must be > 0");
  if (n == 0) throw std::invalid_argument("caseII_ratio_orbit: N must be >= 1");
  const long double a1 = ld(p.a1), a2 = ld(p.a2), b1 = ld(p.b1);
  auto big_r = [&](long double r) { return a1 + a2 * std::pow(r, -b1); };

  CaseIIRatios out;
  long double lo = a1, hi = big_r(a1);
  for (int it = 0; it < 300 && hi - lo > 0; ++it) {
    const long double mid = 0.5L * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (mid - big_r(mid) < 0 ? lo : hi) = mid;
  }
  out.r_bar = 0.5L * (lo + hi);
  out.values.reserve(n);
  long double r = r2;
  for (std::size_t k = 0; k < n; ++k) {
    out.values.push_back(r);
    r = big_r(r);
  }
  return out;
}

void Region::validate() const {
  if (!(lo1 > 0) || !(lo2 > 0) || !(lo1 < hi1) || !(lo2 < hi2) || !std::isfinite(hi1) ||
      !std::isfinite(hi2)) {
    throw std::invalid_argument("Region: need 0 < lo < hi in both coordinates");
  }
}

double FractionResult::fraction() const {
  const std::size_t decided = a0 + a_infty;
  return decided == 0 ? 0.0 : static_cast<double>(a0_pass + a_infty_pass) / decided;
}

double FractionResult::fraction_a0() const {
  return a0 == 0 ? 0.0 : static_cast<double>(a0_pass) / a0;
}

double FractionResult::fraction_a_infty() const {
  return a_infty == 0 ? 0.0 : static_cast<double>(a_infty_pass) / a_infty;
}

FractionResult benford_fraction(const TwoStepParams& p, const Region& region, std::size_t samples,
                                std::size_t n, const Rng& rng, const Thresholds& thresholds) {
  p.validate();
  region.validate();
  if (samples == 0 || n == 0) throw std::invalid_argument("benford_fraction: samples and N must be >= 1");

  struct Outcome {
    Basin basin = Basin::BoundaryUndecided;
    bool pass = false;
  };
  std::vector<Outcome> outcomes(samples);
  auto run_one = [&](std::size_t i) {
    Rng sub = rng.substream(i);
    const long double x1 = region.lo1 + (static_cast<long double>(region.hi1) - region.lo1) * sub.uniform_open();
    const long double x2 = region.lo2 + (static_cast<long double>(region.hi2) - region.lo2) * sub.uniform_open();
    Outcome& o = outcomes[i];
    o.basin = classify_basin(p, x1, x2).label;
    if (o.basin == Basin::BoundaryUndecided) return;
    const auto orbit = orbit_log(p, x1, x2, n);
    o.pass = conformance_report(orbit, thresholds).passed();
  };

  // MPFR keeps its caches per thread only when built thread-safe.
  const unsigned hw = std::thread::hardware_concurrency();
  const std::size_t workers =
      mpfr_buildopt_tls_p() ? std::min<std::size_t>(std::max(hw, 1u), samples) : 1;
  if (workers <= 1) {
    for (std::size_t i = 0; i < samples; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < samples; i = next++) run_one(i);
      });
    }
  }

  FractionResult out;
  out.samples = samples;
  for (const Outcome& o : outcomes) {
    switch (o.basin) {
      case Basin::A0:
        ++out.a0;
        out.a0_pass += o.pass;
        break;
      case Basin::AInfty:
        ++out.a_infty;
        out.a_infty_pass += o.pass;
        break;
      case Basin::BoundaryUndecided:
        ++out.undecided;
        break;
    }
  }
  return out;
}

std::vector<BoundaryScanPoint> boundary_scan(const TwoStepParams& p, int rays,
                                             const RayOptions& opts) {
  if (rays < 1) throw std::invalid_argument("boundary_scan: rays must be >= 1");
  std::vector<BoundaryScanPoint> out;
  out.reserve(static_cast<std::size_t>(rays));
  for (int i = 1; i <= rays; ++i) {
    const long double theta = i * (std::numbers::pi_v<long double> / 2) / (rays + 2);
    const RayBoundary b = boundary_on_ray(p, std::cos(theta), std::sin(theta), opts);
    out.push_back({static_cast<double>(theta), b.r, b.x1, b.x2});
  }
  return out;
}

}  // namespace benford
