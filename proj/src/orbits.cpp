#include "benford/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "benford/bigfloat.hpp"

namespace benford {

double IndexedRule::at(std::uint64_t n) const {
  const double nd = static_cast<double>(n);
  switch (kind) {
    case Kind::Constant:
      return p;
    case Kind::Harmonic:
      return p + q / nd;
    case Kind::Linear:
      return p + q * nd;
    case Kind::Geometric:
      return p * std::pow(q, nd);
  }
  return p;
}

MapSpec MapSpec::affine_plus(double a, GTag g) {
  MapSpec s;
  s.family = MapFamily::AffinePlus;
  s.a = a;
  s.g = g;
  return s;
}

MapSpec MapSpec::contraction(double a) {
  MapSpec s;
  s.family = MapFamily::ContractionFixedPoint;
  s.a = a;
  return s;
}

MapSpec MapSpec::power_plus(double a, double b, GTag g) {
  MapSpec s;
  s.family = MapFamily::PowerPlus;
  s.a = a;
  s.b = b;
  s.g = g;
  return s;
}

MapSpec MapSpec::analytic_flat() {
  MapSpec s;
  s.family = MapFamily::AnalyticFlat;
  return s;
}

MapSpec MapSpec::exponential() {
  MapSpec s;
  s.family = MapFamily::Exponential;
  return s;
}

MapSpec MapSpec::tent() {
  MapSpec s;
  s.family = MapFamily::Tent;
  return s;
}

MapSpec MapSpec::non_autonomous_linear(IndexedRule a_rule) {
  MapSpec s;
  s.family = MapFamily::NonAutonomousLinear;
  s.a_rule = a_rule;
  return s;
}

MapSpec MapSpec::non_autonomous_power(IndexedRule a_rule, IndexedRule b_rule, GTag g) {
  MapSpec s;
  s.family = MapFamily::NonAutonomousPower;
  s.a_rule = a_rule;
  s.b_rule = b_rule;
  s.g = g;
  return s;
}

void MapSpec::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("MapSpec: " + what); };
  if (!std::isfinite(a) || !std::isfinite(b)) fail("parameters must be finite");
  switch (family) {
    case MapFamily::AffinePlus:
      if (!(a > 1.0)) fail("AffinePlus requires a > 1");
      break;
    case MapFamily::PowerPlus:
      if (!(a > 0.0)) fail("PowerPlus requires a > 0");
      if (!(b > 1.0)) fail("PowerPlus requires b > 1");
      break;
    case MapFamily::NonAutonomousPower:
      if (g != GTag::Zero && g != GTag::One) fail("NonAutonomousPower supports g in {Zero, One}");
      break;
    default:
      break;
  }
}

namespace {

constexpr double kSwitch = 150.0;
// Beyond this |log10 x| MPFR's default exponent range cannot hold x itself.
constexpr double kNativeLimit = 3.0e8;
constexpr mpfr_prec_t kExponentialPrecision = 8192;

struct Dominant {
  enum class Kind { Exact, Approx, Native, Escape };
  Kind kind = Kind::Native;
  int sign = 1;
  double d = 0.0;  // Approx: |log10 correction| <= 10^-d
  std::string reason;

  static Dominant exact(int s) { return {Kind::Exact, s, 0.0, {}}; }
  static Dominant approx(int s, double d) { return {Kind::Approx, s, d, {}}; }
  static Dominant native() { return {Kind::Native, 1, 0.0, {}}; }
  static Dominant escape(std::string why) { return {Kind::Escape, 1, 0.0, std::move(why)}; }
};

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

int power_sign(int s, double b) {
  if (s > 0) return 1;
  return std::fmod(std::fabs(b), 2.0) == 1.0 ? -1 : 1;
}

class MapEngine {
 public:
  MapEngine(const MapSpec& spec, std::size_t n, double y0) : spec_(spec) {
    prec_ = choose_precision(n, y0);
    a_ = BigFloat(spec.a, prec_);
    b_ = BigFloat(spec.b, prec_);
    if (spec.a != 0.0) {
      log10_a_ = log10_exact(std::fabs(spec.a), prec_);
    }
    log10_2_ = log10_exact(2.0L, prec_);
    if (spec.family == MapFamily::NonAutonomousPower ||
        spec.family == MapFamily::NonAutonomousLinear) {
      const auto& r = spec.a_rule;
      if (r.kind == IndexedRule::Kind::Geometric) {
        if (r.p == 0.0 || r.q == 0.0) throw std::invalid_argument("geometric rule with zero factor");
        log10_p_ = log10_exact(std::fabs(r.p), prec_);
        log10_q_ = log10_exact(std::fabs(r.q), prec_);
      }
    }
  }

  mpfr_prec_t precision() const { return prec_; }

  // T_n evaluated on reals at the precision of `out`.
  void native(std::uint64_t n, const BigFloat& x, BigFloat& out) const {
    const mpfr_prec_t w = out.precision();
    BigFloat t(w);
    switch (spec_.family) {
      case MapFamily::AffinePlus:
        g_term(x, t);
        mpfr_fma(out.get(), a_.get(), x.get(), t.get(), MPFR_RNDN);
        break;
      case MapFamily::ContractionFixedPoint:
        mpfr_neg(t.get(), x.get(), MPFR_RNDN);
        mpfr_expm1(t.get(), t.get(), MPFR_RNDN);
        mpfr_fma(out.get(), a_.get(), t.get(), x.get(), MPFR_RNDN);
        break;
      case MapFamily::PowerPlus: {
        BigFloat p(w);
        mpfr_pow(p.get(), x.get(), b_.get(), MPFR_RNDN);
        g_term(x, t);
        mpfr_fma(out.get(), a_.get(), p.get(), t.get(), MPFR_RNDN);
        break;
      }
      case MapFamily::AnalyticFlat:
        mpfr_neg(t.get(), x.get(), MPFR_RNDN);
        mpfr_expm1(t.get(), t.get(), MPFR_RNDN);
        mpfr_add(out.get(), x.get(), t.get(), MPFR_RNDN);
        break;
      case MapFamily::Exponential:
        mpfr_exp(out.get(), x.get(), MPFR_RNDN);
        break;
      case MapFamily::Tent:
        mpfr_mul_2ui(t.get(), x.get(), 1, MPFR_RNDN);
        mpfr_sub_ui(t.get(), t.get(), 1, MPFR_RNDN);
        mpfr_abs(t.get(), t.get(), MPFR_RNDN);
        mpfr_ui_sub(out.get(), 1, t.get(), MPFR_RNDN);
        break;
      case MapFamily::NonAutonomousLinear: {
        BigFloat an(w);
        rule_value(spec_.a_rule, n, an);
        mpfr_mul(out.get(), an.get(), x.get(), MPFR_RNDN);
        break;
      }
      case MapFamily::NonAutonomousPower: {
        BigFloat an(w), bn(w), p(w);
        rule_value(spec_.a_rule, n, an);
        rule_value(spec_.b_rule, n, bn);
        mpfr_pow(p.get(), x.get(), bn.get(), MPFR_RNDN);
        g_term(x, t);
        mpfr_fma(out.get(), an.get(), p.get(), t.get(), MPFR_RNDN);
        break;
      }
    }
  }

  // Leading-order log recursion for |y| > kSwitch; writes the new log
  // magnitude into `out` for Exact and Approx.
  Dominant dominant(std::uint64_t n, int s, const BigFloat& y, BigFloat& out) const {
    const double yd = y.to_double();
    const bool big = yd > 0.0;
    switch (spec_.family) {
      case MapFamily::AffinePlus: {
        if (!big) {
          if (spec_.g != GTag::Zero) return Dominant::native();
          mpfr_add(out.get(), y.get(), log10_a_.get(), MPFR_RNDN);
          return Dominant::exact(s);
        }
        if (spec_.g == GTag::ExpNeg && s < 0) {
          return Dominant::escape("e^(-x) term beyond representable range");
        }
        mpfr_add(out.get(), y.get(), log10_a_.get(), MPFR_RNDN);
        const double la = std::log10(spec_.a);
        switch (spec_.g) {
          case GTag::Zero:
          case GTag::ExpNeg:
            return Dominant::exact(s);
          case GTag::One:
            return Dominant::approx(s, yd + la);
          case GTag::Sqrt:
            return Dominant::approx(s, yd / 2 + la);
        }
        return Dominant::native();
      }
      case MapFamily::ContractionFixedPoint: {
        const double a = spec_.a;
        if (a == 0.0) {
          mpfr_set(out.get(), y.get(), MPFR_RNDN);
          return Dominant::exact(s);
        }
        if (big) {
          if (s < 0) return Dominant::escape("a e^(-x) term beyond representable range");
          mpfr_set(out.get(), y.get(), MPFR_RNDN);
          return Dominant::approx(s, yd - std::log10(std::fabs(a)) - 0.01);
        }
        if (a == 1.0) {
          mpfr_mul_2ui(out.get(), y.get(), 1, MPFR_RNDN);
          mpfr_sub(out.get(), out.get(), log10_2_.get(), MPFR_RNDN);
          return Dominant::approx(1, -yd + std::log10(3.0) - 0.01);
        }
        BigFloat one_minus_a(1.0L - static_cast<long double>(a), prec_);
        mpfr_abs(one_minus_a.get(), one_minus_a.get(), MPFR_RNDN);
        mpfr_log10(one_minus_a.get(), one_minus_a.get(), MPFR_RNDN);
        mpfr_add(out.get(), y.get(), one_minus_a.get(), MPFR_RNDN);
        const int sign = a < 1.0 ? s : -s;
        return Dominant::approx(
            sign, -yd - std::log10(std::fabs(a) / (2.0 * std::fabs(1.0 - a))) - 0.01);
      }
      case MapFamily::PowerPlus: {
        if (s < 0 && !is_integer(spec_.b)) {
          return Dominant::escape("negative value raised to a non-integer power");
        }
        const int sign = power_sign(s, spec_.b);
        if (!big && spec_.g != GTag::Zero) return Dominant::native();
        if (big && spec_.g == GTag::ExpNeg && s < 0) {
          return Dominant::escape("e^(-x) term beyond representable range");
        }
        mpfr_fma(out.get(), b_.get(), y.get(), log10_a_.get(), MPFR_RNDN);
        const double od = out.to_double();
        switch (spec_.g) {
          case GTag::Zero:
          case GTag::ExpNeg:
            return Dominant::exact(sign);
          case GTag::One:
            return od > 8.0 ? Dominant::approx(sign, od) : Dominant::native();
          case GTag::Sqrt:
            return od - yd / 2 > 8.0 ? Dominant::approx(sign, od - yd / 2) : Dominant::native();
        }
        return Dominant::native();
      }
      case MapFamily::AnalyticFlat: {
        if (big) {
          if (s < 0) return Dominant::escape("e^(-x) term beyond representable range");
          mpfr_set(out.get(), y.get(), MPFR_RNDN);
          return Dominant::approx(1, yd - 0.01);
        }
        mpfr_mul_2ui(out.get(), y.get(), 1, MPFR_RNDN);
        mpfr_sub(out.get(), out.get(), log10_2_.get(), MPFR_RNDN);
        return Dominant::approx(1, -yd + std::log10(3.0) - 0.01);
      }
      case MapFamily::Exponential: {
        if (!big) return Dominant::native();
        // log10 e^x = x log10 e, with x = s 10^y held at full precision.
        BigFloat x(out.precision());
        mpfr_exp10(x.get(), y.get(), MPFR_RNDN);
        if (!x.is_finite()) return Dominant::escape("exponent tower beyond representable range");
        BigFloat ln10(out.precision());
        mpfr_set_ui(ln10.get(), 10, MPFR_RNDN);
        mpfr_log(ln10.get(), ln10.get(), MPFR_RNDN);
        mpfr_div(out.get(), x.get(), ln10.get(), MPFR_RNDN);
        if (s < 0) mpfr_neg(out.get(), out.get(), MPFR_RNDN);
        return Dominant::exact(1);
      }
      case MapFamily::Tent: {
        mpfr_add(out.get(), y.get(), log10_2_.get(), MPFR_RNDN);
        if (s < 0 || !big) return Dominant::exact(s);
        return Dominant::approx(-1, yd - 0.01);
      }
      case MapFamily::NonAutonomousLinear: {
        int sign = s;
        if (!add_log10_rule(n, y, out, sign)) return Dominant::native();
        return Dominant::exact(sign);
      }
      case MapFamily::NonAutonomousPower: {
        const double bn = spec_.b_rule.at(n);
        if (s < 0 && !is_integer(bn)) {
          return Dominant::escape("negative value raised to a non-integer power");
        }
        BigFloat bnf(prec_);
        rule_value(spec_.b_rule, n, bnf);
        BigFloat scaled(prec_);
        mpfr_mul(scaled.get(), bnf.get(), y.get(), MPFR_RNDN);
        int sign = power_sign(s, bn);
        if (!add_log10_rule(n, scaled, out, sign)) return Dominant::native();
        if (spec_.g == GTag::Zero) return Dominant::exact(sign);
        const double od = out.to_double();
        return od > 8.0 ? Dominant::approx(sign, od) : Dominant::native();
      }
    }
    return Dominant::native();
  }

  // Extra bits for maps whose value near 0 is a difference of nearly equal
  // terms.
  mpfr_prec_t cancellation_bits(double yd) const {
    if (yd >= 0.0) return 0;
    if (spec_.family == MapFamily::AnalyticFlat ||
        spec_.family == MapFamily::ContractionFixedPoint) {
      return static_cast<mpfr_prec_t>(std::ceil(-yd * 3.33));
    }
    return 0;
  }

 private:
  mpfr_prec_t choose_precision(std::size_t n, double y0) const {
    const double mag = std::fabs(y0) + 1.0;
    switch (spec_.family) {
      case MapFamily::PowerPlus:
        return precision_for_growth(spec_.b, n, mag + std::fabs(std::log10(spec_.a)));
      case MapFamily::AnalyticFlat:
        return precision_for_growth(2.0, n, mag);
      case MapFamily::ContractionFixedPoint:
        return precision_for_growth(spec_.a == 1.0 ? 2.0 : 1.0, n,
                                    mag + static_cast<double>(n) * 2.0);
      case MapFamily::Exponential:
        return kExponentialPrecision;
      case MapFamily::NonAutonomousPower: {
        double bits = 0.0;
        for (std::size_t k = 1; k <= n && bits < (1 << 22); ++k) {
          bits += std::log2(std::max(std::fabs(spec_.b_rule.at(k)), 1.0));
        }
        const double growth = std::exp2(bits / static_cast<double>(std::max<std::size_t>(n, 1)));
        const double amax = std::max(std::fabs(std::log10(std::fabs(spec_.a_rule.at(1)))),
                                     std::fabs(std::log10(std::fabs(spec_.a_rule.at(n)))));
        return precision_for_growth(growth, n, mag + amax + 1.0);
      }
      case MapFamily::NonAutonomousLinear: {
        const double amax = std::max(std::fabs(std::log10(std::fabs(spec_.a_rule.at(1)))),
                                     std::fabs(std::log10(std::fabs(spec_.a_rule.at(n)))));
        return precision_for_growth(1.0, n, mag + static_cast<double>(n) * (amax + 1.0));
      }
      default:
        return precision_for_growth(1.0, n,
                                    mag + static_cast<double>(n) *
                                              (std::fabs(std::log10(std::fabs(spec_.a) + 1.0)) + 1.0));
    }
  }

  void g_term(const BigFloat& x, BigFloat& t) const {
    switch (spec_.g) {
      case GTag::Zero:
        mpfr_set_zero(t.get(), 1);
        break;
      case GTag::One:
        mpfr_set_ui(t.get(), 1, MPFR_RNDN);
        break;
      case GTag::Sqrt:
        mpfr_abs(t.get(), x.get(), MPFR_RNDN);
        mpfr_sqrt(t.get(), t.get(), MPFR_RNDN);
        break;
      case GTag::ExpNeg:
        mpfr_neg(t.get(), x.get(), MPFR_RNDN);
        mpfr_exp(t.get(), t.get(), MPFR_RNDN);
        break;
    }
  }

  static void rule_value(const IndexedRule& r, std::uint64_t n, BigFloat& out) {
    const mpfr_prec_t w = out.precision();
    BigFloat p(r.p, w), q(r.q, w);
    switch (r.kind) {
      case IndexedRule::Kind::Constant:
        mpfr_set(out.get(), p.get(), MPFR_RNDN);
        break;
      case IndexedRule::Kind::Harmonic:
        mpfr_div_ui(q.get(), q.get(), n, MPFR_RNDN);
        mpfr_add(out.get(), p.get(), q.get(), MPFR_RNDN);
        break;
      case IndexedRule::Kind::Linear:
        mpfr_mul_ui(q.get(), q.get(), n, MPFR_RNDN);
        mpfr_add(out.get(), p.get(), q.get(), MPFR_RNDN);
        break;
      case IndexedRule::Kind::Geometric:
        mpfr_pow_ui(q.get(), q.get(), n, MPFR_RNDN);
        mpfr_mul(out.get(), p.get(), q.get(), MPFR_RNDN);
        break;
    }
  }

  // out = base + log10|a_n|, sign *= sgn(a_n). Returns false if a_n = 0.
  bool add_log10_rule(std::uint64_t n, const BigFloat& base, BigFloat& out, int& sign) const {
    const auto& r = spec_.a_rule;
    if (r.kind == IndexedRule::Kind::Geometric) {
      BigFloat l(prec_);
      mpfr_mul_ui(l.get(), log10_q_.get(), n, MPFR_RNDN);
      mpfr_add(l.get(), l.get(), log10_p_.get(), MPFR_RNDN);
      mpfr_add(out.get(), base.get(), l.get(), MPFR_RNDN);
      if (r.p < 0) sign = -sign;
      if (r.q < 0 && n % 2 == 1) sign = -sign;
      return true;
    }
    // Only the bits of log10|a_n| that survive next to base matter.
    const long e = base.is_zero() ? 0 : std::max(0L, base.exponent());
    const mpfr_prec_t w = std::clamp<mpfr_prec_t>(prec_ - e + 32, 64, prec_ + 32);
    BigFloat an(w);
    rule_value(r, n, an);
    if (an.is_zero()) return false;
    if (an.sign() < 0) sign = -sign;
    mpfr_abs(an.get(), an.get(), MPFR_RNDN);
    mpfr_log10(an.get(), an.get(), MPFR_RNDN);
    mpfr_add(out.get(), base.get(), an.get(), MPFR_RNDN);
    return true;
  }

  MapSpec spec_;
  mpfr_prec_t prec_ = 128;
  BigFloat a_, b_, log10_a_, log10_2_, log10_p_, log10_q_;
};

struct LogState {
  int s = 0;
  BigFloat y;
};

enum class StepMode { Auto, NativeOnly };

// Evaluates T_n at x = s 10^y on reals and stores the result as (s, y).
// Returns a reason string on failure.
std::optional<std::string> native_step(const MapEngine& eng, std::uint64_t n, LogState& st) {
  const double yd = st.s == 0 ? 0.0 : st.y.to_double();
  if (std::fabs(yd) > kNativeLimit) return "value beyond representable range";
  const mpfr_prec_t w = eng.precision() + 64 + eng.cancellation_bits(yd);
  BigFloat x(w);
  if (st.s != 0) {
    mpfr_exp10(x.get(), st.y.get(), MPFR_RNDN);
    if (st.s < 0) mpfr_neg(x.get(), x.get(), MPFR_RNDN);
  }
  BigFloat next(w);
  eng.native(n, x, next);
  if (mpfr_nan_p(next.get())) return "orbit left the domain of the map";
  if (mpfr_inf_p(next.get())) return "value beyond representable range";
  if (next.is_zero()) {
    st.s = 0;
    mpfr_set_zero(st.y.get(), 1);
    return std::nullopt;
  }
  st.s = next.sign() > 0 ? 1 : -1;
  mpfr_abs(next.get(), next.get(), MPFR_RNDN);
  mpfr_log10(st.y.get(), next.get(), MPFR_RNDN);
  return std::nullopt;
}

bool negligible(double d, const BigFloat& out, mpfr_prec_t prec) {
  const long e = out.is_zero() ? -static_cast<long>(prec) : out.exponent();
  return d > static_cast<double>(prec + 8 - e) * std::log10(2.0);
}

Orbit run_orbit(const MapSpec& spec, int sign0, const BigFloat* y0_exact, long double x0_real,
                std::size_t n, StepMode mode) {
  spec.validate();
  if (n == 0) throw std::invalid_argument("iterate_map: N must be >= 1");
  const double y0d = sign0 == 0 ? 0.0 : (y0_exact ? y0_exact->to_double()
                                                   : std::log10(std::fabs(static_cast<double>(x0_real))));
  MapEngine eng(spec, n, y0d);
  const mpfr_prec_t prec = eng.precision();

  LogState st{sign0, BigFloat(prec)};
  if (sign0 != 0) {
    if (y0_exact) {
      st.y = *y0_exact;
      st.y.set_precision(prec);
    } else {
      st.y = log10_exact(std::fabs(x0_real), prec);
    }
  }

  Orbit orbit;
  orbit.values.reserve(n);
  BigFloat out(prec);
  for (std::uint64_t k = 1; k <= n; ++k) {
    std::optional<std::string> failure;
    const double yd = st.s == 0 ? 0.0 : st.y.to_double();
    if (mode == StepMode::NativeOnly || st.s == 0 || std::fabs(yd) <= kSwitch) {
      failure = native_step(eng, k, st);
    } else {
      const Dominant dom = eng.dominant(k, st.s, st.y, out);
      switch (dom.kind) {
        case Dominant::Kind::Exact:
          st.s = dom.sign;
          std::swap(st.y, out);
          break;
        case Dominant::Kind::Approx:
          if (negligible(dom.d, out, prec)) {
            st.s = dom.sign;
            std::swap(st.y, out);
          } else {
            failure = native_step(eng, k, st);
          }
          break;
        case Dominant::Kind::Native:
          failure = native_step(eng, k, st);
          break;
        case Dominant::Kind::Escape:
          failure = dom.reason;
          break;
      }
    }
    if (!failure && st.s != 0 && !st.y.is_zero() && st.y.exponent() > static_cast<long>(prec) - 64) {
      failure = "log magnitude exceeds working precision";
    }
    if (failure) {
      orbit.truncated = true;
      orbit.reason = "step " + std::to_string(k) + ": " + *failure;
      break;
    }
    orbit.values.push_back(to_signed_log(st.s, st.y));
  }
  return orbit;
}

}  // namespace

Orbit iterate_map(const MapSpec& spec, long double x0, std::size_t n) {
  if (!std::isfinite(x0)) throw std::domain_error("iterate_map: non-finite x0");
  const int s = x0 > 0 ? 1 : (x0 < 0 ? -1 : 0);
  return run_orbit(spec, s, nullptr, x0, n, StepMode::Auto);
}

Orbit iterate_map(const MapSpec& spec, const SignedLogValue& x0, std::size_t n) {
  if (x0.is_zero()) return run_orbit(spec, 0, nullptr, 0.0L, n, StepMode::Auto);
  if (!std::isfinite(x0.characteristic) || !std::isfinite(x0.mantissa)) {
    throw std::domain_error("iterate_map: non-finite x0");
  }
  BigFloat y(x0.characteristic, 128);
  BigFloat m(x0.mantissa, 128);
  y = y + m;
  return run_orbit(spec, x0.sign, &y, 0.0L, n, StepMode::Auto);
}

Orbit iterate_map_native(const MapSpec& spec, long double x0, std::size_t n) {
  if (!std::isfinite(x0)) throw std::domain_error("iterate_map_native: non-finite x0");
  const int s = x0 > 0 ? 1 : (x0 < 0 ? -1 : 0);
  return run_orbit(spec, s, nullptr, x0, n, StepMode::NativeOnly);
}

}  // namespace benford
