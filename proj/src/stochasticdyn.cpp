#include "benford/stochasticdyn.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "benford/bigfloat.hpp"

namespace benford {

namespace {

// Enough bits that partial sums of 10^5 long doubles are exact whenever the
// summands share an exponent, so X^n and X*X*...*X coincide bit for bit.
constexpr mpfr_prec_t kPathPrecision = 192;

long double cantor_log(Rng& rng) {
  constexpr int kDigits = 60;
  std::uint64_t bits = rng.next_u64();
  long double y = 0.0L;
  for (int k = kDigits; k >= 1; --k) {
    const int d = static_cast<int>(bits & 1u);
    bits >>= 1;
    y = (2.0L * d + y) / 3.0L;
  }
  return y;
}

}  // namespace

void DistSpec::validate() const {
  auto fail = [](const char* what) { throw std::invalid_argument(std::string("DistSpec: ") + what); };
  switch (family) {
    case Family::Uniform:
      if (!(p1 < p2) || !std::isfinite(p1) || !std::isfinite(p2)) fail("Uniform requires lo < hi");
      break;
    case Family::Exponential:
      if (!(p1 > 0.0) || !std::isfinite(p1)) fail("Exponential requires rate > 0");
      break;
    case Family::Normal:
      if (!(p2 > 0.0) || !std::isfinite(p1) || !std::isfinite(p2)) fail("Normal requires sd > 0");
      break;
    case Family::Cantor10:
      break;
    case Family::PointMass:
      if (p1 == 0.0 || !std::isfinite(p1)) fail("PointMass requires a finite nonzero value");
      break;
  }
}

LogSample sample_log(const DistSpec& dist, Rng& rng, std::uint64_t& zeros) {
  if (dist.family == DistSpec::Family::Cantor10) return {1, cantor_log(rng)};
  for (;;) {
    long double x = 0.0L;
    switch (dist.family) {
      case DistSpec::Family::Uniform:
        x = dist.p1 + (static_cast<long double>(dist.p2) - dist.p1) * rng.uniform_open();
        break;
      case DistSpec::Family::Exponential:
        x = -std::log(static_cast<long double>(rng.uniform_open())) / dist.p1;
        break;
      case DistSpec::Family::Normal:
        x = dist.p1 + static_cast<long double>(dist.p2) * rng.normal();
        break;
      case DistSpec::Family::PointMass:
        x = dist.p1;
        break;
      case DistSpec::Family::Cantor10:
        break;
    }
    if (x != 0.0L) return {x > 0 ? 1 : -1, std::log10(std::fabs(x))};
    ++zeros;
  }
}

RandomPath rv_power_path(const DistSpec& dist, Rng& rng, std::size_t n) {
  dist.validate();
  if (n == 0) throw std::invalid_argument("rv_power_path: N must be >= 1");
  RandomPath path;
  const LogSample s = sample_log(dist, rng, path.resampled_zeros);
  const BigFloat l(s.log_abs, kPathPrecision);
  BigFloat y(kPathPrecision);
  path.values.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    mpfr_mul_ui(y.get(), l.get(), k, MPFR_RNDN);
    const int sign = (s.sign < 0 && k % 2 == 1) ? -1 : 1;
    path.values.push_back(to_signed_log(sign, y));
  }
  return path;
}

RandomPath iid_product_path(const DistSpec& dist, Rng& rng, std::size_t n) {
  dist.validate();
  if (n == 0) throw std::invalid_argument("iid_product_path: N must be >= 1");
  RandomPath path;
  BigFloat y(kPathPrecision);
  int sign = 1;
  path.values.reserve(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const LogSample s = sample_log(dist, rng, path.resampled_zeros);
    mpfr_add(y.get(), y.get(), BigFloat(s.log_abs, kPathPrecision).get(), MPFR_RNDN);
    sign *= s.sign;
    path.values.push_back(to_signed_log(sign, y));
  }
  return path;
}

DistributionKs distribution_ks_at_n(const DistSpec& dist, std::uint64_t n, std::size_t samples,
                                    Rng& rng) {
  dist.validate();
  if (n == 0 || samples == 0) {
    throw std::invalid_argument("distribution_ks_at_n: n and samples must be >= 1");
  }
  std::vector<SignedLogValue> values;
  values.reserve(samples);
  std::uint64_t zeros = 0;
  std::complex<long double> sum = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const LogSample s = sample_log(dist, rng, zeros);
    const SignedLogValue v =
        SignedLogValue::from_parts(1, 0.0L, static_cast<long double>(n) * s.log_abs);
    sum += std::polar(1.0L, 2.0L * std::numbers::pi_v<long double> * v.mantissa);
    values.push_back(v);
  }
  DistributionKs out;
  out.ks = ks_distance(values);
  out.fourier = static_cast<double>(std::abs(sum) / static_cast<long double>(samples));
  out.samples = samples;
  return out;
}

double uniform_fourier_magnitude(std::uint64_t n) {
  const double w = 2.0 * std::numbers::pi * static_cast<double>(n) / std::numbers::ln10;
  return 1.0 / std::sqrt(1.0 + w * w);
}

void GBMSpec::validate() const {
  if (!(sigma >= 0.0) || !(x0 > 0.0) || !(t_end > 0.0) || !(dt > 0.0) || !std::isfinite(mu) ||
      !std::isfinite(sigma) || !std::isfinite(t_end)) {
    throw std::invalid_argument("GBMSpec: need sigma >= 0, x0 > 0, t_end > 0, dt > 0");
  }
}

GBMPath gbm_path(const GBMSpec& spec, Rng& rng) {
  spec.validate();
  const auto steps = static_cast<std::uint64_t>(std::llround(spec.t_end / spec.dt));
  GBMPath path;
  path.t.reserve(steps + 1);
  path.x.reserve(steps + 1);
  const long double drift = (spec.mu - 0.5L * spec.sigma * spec.sigma) * spec.dt;
  const long double vol = spec.sigma * std::sqrt(static_cast<long double>(spec.dt));
  const long double inv_ln10 = 1.0L / std::numbers::ln10_v<long double>;
  long double y = std::log10(static_cast<long double>(spec.x0));
  for (std::uint64_t k = 0; k <= steps; ++k) {
    path.t.push_back(static_cast<double>(k) * spec.dt);
    path.x.push_back(SignedLogValue::from_log(1, y));
    y += (drift + vol * rng.normal()) * inv_ln10;
  }
  return path;
}

ConformanceReport gbm_path_conformance(const GBMPath& path, const Thresholds& thresholds) {
  // The endpoint closes the interval [0, t_end) and is left out.
  if (path.x.size() < 2) throw InsufficientData("gbm_path_conformance: path too short");
  return conformance_report(std::span(path.x).first(path.x.size() - 1), thresholds);
}

GBMEnsemble gbm_ensemble(const GBMSpec& spec, double t, std::size_t paths, const Rng& rng) {
  spec.validate();
  if (!(t > 0.0) || paths < 2) throw std::invalid_argument("gbm_ensemble: need t > 0, paths >= 2");
  GBMEnsemble out;
  out.endpoints.reserve(paths);
  const long double drift = (spec.mu - 0.5L * spec.sigma * spec.sigma) * t;
  const long double vol = spec.sigma * std::sqrt(static_cast<long double>(t));
  const long double ln_x0 = std::log(static_cast<long double>(spec.x0));
  long double mean = 0.0L, m2 = 0.0L;
  for (std::size_t i = 0; i < paths; ++i) {
    Rng sub = rng.substream(i);
    const long double ln_x = ln_x0 + drift + vol * sub.normal();
    out.endpoints.push_back(SignedLogValue::from_log(1, ln_x / std::numbers::ln10_v<long double>));
    const long double delta = ln_x - mean;
    mean += delta / static_cast<long double>(i + 1);
    m2 += delta * (ln_x - mean);
  }
  out.log_variance = static_cast<double>(m2 / static_cast<long double>(paths - 1));
  out.ks = ks_distance(out.endpoints);
  return out;
}

}  // namespace benford
