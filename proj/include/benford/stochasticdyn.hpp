#ifndef BENFORD_STOCHASTICDYN_HPP_
#define BENFORD_STOCHASTICDYN_HPP_

#include <cstdint>
#include <vector>

#include "benford/conformance.hpp"
#include "benford/rng.hpp"
#include "benford/significand.hpp"

namespace benford {

struct DistSpec {
  enum class Family {
    Uniform,      // (lo, hi)
    Exponential,  // rate
    Normal,       // (mean, sd)
    Cantor10,     // 10^Y, Y uniform on the middle-thirds Cantor set
    PointMass,    // always p1; for degenerate checks
  };
  Family family = Family::Uniform;
  double p1 = 0.0;
  double p2 = 1.0;

  static DistSpec uniform(double lo, double hi) { return {Family::Uniform, lo, hi}; }
  static DistSpec exponential(double rate) { return {Family::Exponential, rate, 0.0}; }
  static DistSpec normal(double mean, double sd) { return {Family::Normal, mean, sd}; }
  static DistSpec cantor10() { return {Family::Cantor10, 0.0, 0.0}; }
  static DistSpec point_mass(double v) { return {Family::PointMass, v, 0.0}; }

  void validate() const;
};

/// One draw of X reported as sign and log10|X|; zero draws are redrawn and
/// counted in `zeros`.
struct LogSample {
  int sign = 1;
  long double log_abs = 0;
};
LogSample sample_log(const DistSpec& dist, Rng& rng, std::uint64_t& zeros);

struct RandomPath {
  std::vector<SignedLogValue> values;
  std::uint64_t resampled_zeros = 0;
};

/// (X, X^2, ..., X^N) for a single draw X.
RandomPath rv_power_path(const DistSpec& dist, Rng& rng, std::size_t n);

/// (X_1, X_1 X_2, ..., X_1 ... X_N) for independent draws.
RandomPath iid_product_path(const DistSpec& dist, Rng& rng, std::size_t n);

struct DistributionKs {
  double ks = 0.0;
  double fourier = 0.0;  // |mean of exp(2 pi i n log10|X|)|
  std::size_t samples = 0;
};

/// Monte Carlo KS distance between S(X^n) and Benford's law.
DistributionKs distribution_ks_at_n(const DistSpec& dist, std::uint64_t n, std::size_t samples,
                                    Rng& rng);

/// |E exp(2 pi i n log10 X)| for X ~ U(0,1): 1 / sqrt(1 + (2 pi n / ln 10)^2).
double uniform_fourier_magnitude(std::uint64_t n);

struct GBMSpec {
  double mu = 0.0;
  double sigma = 1.0;
  double x0 = 1.0;
  double t_end = 1.0;
  double dt = 0.01;

  void validate() const;
};

struct GBMPath {
  std::vector<double> t;            // grid times k dt, k = 0..K
  std::vector<SignedLogValue> x;    // X at those times
};

/// X_t = x0 exp((mu - sigma^2/2) t + sigma W_t) on the grid, using exact
/// Gaussian increments.
GBMPath gbm_path(const GBMSpec& spec, Rng& rng);

/// Conformance of the grid values of a path; each grid point carries weight
/// dt, so this is the Riemann-sum version of the occupation measure.
ConformanceReport gbm_path_conformance(const GBMPath& path, const Thresholds& thresholds);

struct GBMEnsemble {
  std::vector<SignedLogValue> endpoints;
  double ks = 0.0;
  double log_variance = 0.0;  // sample variance of ln X_t
};

/// X_t for `paths` independent paths; path i uses rng.substream(i).
GBMEnsemble gbm_ensemble(const GBMSpec& spec, double t, std::size_t paths, const Rng& rng);

}  // namespace benford

#endif  // BENFORD_STOCHASTICDYN_HPP_
