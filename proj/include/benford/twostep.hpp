#ifndef BENFORD_TWOSTEP_HPP_
#define BENFORD_TWOSTEP_HPP_

// Nonlinear two-step recursion x_n = a1 x_{n-1}^b1 + a2 x_{n-2}^b2 on the
// positive quadrant: log-domain orbits, basins of 0 and infinity, their common
// boundary, and the shadowing constants behind the Benford property.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "benford/conformance.hpp"
#include "benford/rng.hpp"
#include "benford/significand.hpp"

namespace benford {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

/// A parameter as the user typed it: the double plus, when the text was a
/// plain decimal or p/q, the exact rational it denotes.
struct ExactReal {
  double value = 0.0;
  std::optional<Rational> exact;

  ExactReal() = default;
  ExactReal(double v) : value(v) {}  // NOLINT: implicit on purpose
  static ExactReal parse(const std::string& text);
  std::string to_string() const;
};

enum class TwoStepCase { I, II, III };

std::string case_name(TwoStepCase c);

struct TwoStepParams {
  ExactReal a1 = 1.0;
  ExactReal a2 = 1.0;
  ExactReal b1 = 2.0;
  ExactReal b2 = 2.0;
  // Allows b in (0, 1] for orbits and basins only.
  bool extended = false;

  static TwoStepParams make(double a1, double a2, double b1, double b2, bool extended = false);
  static TwoStepParams parse(const std::string& a1, const std::string& a2,
                             const std::string& b1, const std::string& b2, bool extended = false);

  /// a1, a2 >= 0 and not both zero; b1, b2 > 1 (or > 0 in extended mode).
  void validate() const;
  bool exponents_above_one() const { return b1.value > 1.0 && b2.value > 1.0; }
};

/// Sign of b1^2 - b2, compared exactly (rationals when typed as such, the
/// binary value of the doubles otherwise). Throws for b <= 1.
TwoStepCase classify_case(const TwoStepParams& p);

/// x_3..x_{N+2} from x_1, x_2 > 0. Runs in MPFR at enough bits that the
/// mantissa of the last term is still exact.
std::vector<SignedLogValue> orbit_log(const TwoStepParams& p, const SignedLogValue& x1,
                                      const SignedLogValue& x2, std::size_t n);
std::vector<SignedLogValue> orbit_log(const TwoStepParams& p, long double x1, long double x2,
                                      std::size_t n);

/// delta_n = b2 y_{n-1} - b1 y_n for n = 2..N+2, from the same orbit.
struct DeltaSequence {
  std::vector<long double> values;  // values[0] is delta_2
  long double at(std::size_t n) const { return values.at(n - 2); }
};
DeltaSequence delta_sequence(const TwoStepParams& p, const SignedLogValue& x1,
                             const SignedLogValue& x2, std::size_t n);

enum class Basin { A0, AInfty, BoundaryUndecided };

std::string basin_name(Basin b);

struct BasinLabel {
  Basin label = Basin::BoundaryUndecided;
  std::size_t iterations_used = 0;
  double final_log_mag = 0.0;
  long precision_bits = 0;
};

inline constexpr std::size_t kDefaultBasinIterations = 10'000;

/// A0 once y_n < -10 at two consecutive n, AInfty once y_n > 10 likewise,
/// BoundaryUndecided after max_iter steps. A decision reached later than the
/// working precision can vouch for is redone at twice the bits.
BasinLabel classify_basin(const TwoStepParams& p, long double x1, long double x2,
                          std::size_t max_iter = kDefaultBasinIterations);
BasinLabel classify_basin(const TwoStepParams& p, const SignedLogValue& x1,
                          const SignedLogValue& x2, std::size_t max_iter = kDefaultBasinIterations);

struct RayOptions {
  double tol = 1e-12;
  double r_max = 1e6;
  std::size_t max_iter = kDefaultBasinIterations;
};

struct RayBoundary {
  long double r = 0;   // midpoint of [lo, hi]
  long double lo = 0;  // not AInfty
  long double hi = 0;  // AInfty
  long double x1 = 0;  // r * u
  long double x2 = 0;  // r * v
};

/// Radius where the ray t (u, v) leaves the closure of A0, by bisection on
/// "AInfty or not". (u, v) must be strictly positive and is normalised.
RayBoundary boundary_on_ray(const TwoStepParams& p, long double u, long double v,
                            const RayOptions& opts = {});

struct CycleLimit {
  long double p = 0;  // lim x_{2n-1}
  long double q = 0;  // lim x_{2n}
  std::size_t iterations = 0;
  long double residual = 0;  // max |T(p, q) - (q, p)|
};

/// Limits of the odd and even subsequences for a start on the boundary of A0.
/// Iterates T^2, pulls each iterate back onto the boundary along its ray,
/// then polishes with Newton on p = a2 p^b2 + a1 q^b1, q = a2 q^b2 + a1 p^b1.
CycleLimit cycle2_limit(const TwoStepParams& p, long double x1, long double x2,
                        std::size_t max_steps = 2000);

struct ShadowLimit {
  long double y_hat = 0;
  std::vector<long double> residuals;  // y_n - b^n y_hat for n = 1..N-K
  std::size_t certified_terms = 0;     // K
};

/// y_hat = y_1/b + sum_{k>=2} (y_k - b y_{k-1}) / b^k for y_1..y_N. K is the
/// first index with sup|increment| b^-K / (b - 1) < 1e-15; residuals are
/// reported for the indices the window can certify to that level.
ShadowLimit shadow_limit(long double b, std::span<const long double> y);

struct ShadowH {
  long double h = 0;
  long double shift = 0;  // log10 of the rescaling; y_n + shift tracks b^m h
  std::size_t terms = 0;
  long double tail_bound = 0;
};

inline constexpr std::size_t kDefaultShadowTerms = 2000;

/// Case I: h = y2 + sum_k b1^-k log10(1 + a2 10^delta_{k+1}) in coordinates
/// rescaled to a1 = 1, so that y_n + shift - b1^(n-2) h -> 0.
ShadowH shadow_h_caseI(const TwoStepParams& p, long double y1, long double y2,
                       std::size_t max_terms = kDefaultShadowTerms);

/// Case III on V_o: h = y2 + sum_k b2^-k log10(1 + a1 10^-delta_{2k+1}) with
/// a2 = 1, so that y_{2n} + shift - b2^(n-1) h -> 0.
ShadowH shadow_h_caseIII(const TwoStepParams& p, long double y1, long double y2,
                         std::size_t max_terms = kDefaultShadowTerms);

/// Fixed points of R0(r) = b2 log10(a1 + 10^r) (a2 rescaled to 1), sorted,
/// reported in the delta coordinates of the unscaled recursion.
std::vector<long double> r0_fixed_points(const TwoStepParams& p);

struct CaseIIRatios {
  std::vector<long double> values;  // r_2..r_{N+1}, r_n = x_n / x_{n-1}^b1
  long double r_bar = 0;            // fixed point of R(r) = a1 + a2 r^-b1
};

CaseIIRatios caseII_ratio_orbit(const TwoStepParams& p, long double r2, std::size_t n);

struct Region {
  double lo1 = 0, hi1 = 0, lo2 = 0, hi2 = 0;
  void validate() const;
};

struct FractionResult {
  std::size_t samples = 0;
  std::size_t a0 = 0, a0_pass = 0;
  std::size_t a_infty = 0, a_infty_pass = 0;
  std::size_t undecided = 0;

  /// Passing share among samples that landed in an open basin.
  double fraction() const;
  double fraction_a0() const;
  double fraction_a_infty() const;
};

/// Samples (x1, x2) uniformly in the region (sample i draws from
/// rng.substream(i)), labels each by basin and checks x_3..x_{N+2} for
/// conformance. Boundary-undecided samples are counted but not scored.
FractionResult benford_fraction(const TwoStepParams& p, const Region& region, std::size_t samples,
                                std::size_t n, const Rng& rng, const Thresholds& thresholds = {});

struct BoundaryScanPoint {
  double theta = 0;
  long double r = 0;
  long double x1 = 0;
  long double x2 = 0;
};

/// boundary_on_ray at theta_i = i (pi/2) / (rays + 2), i = 1..rays; with the
/// default 360 rays, i = 181 is the diagonal.
std::vector<BoundaryScanPoint> boundary_scan(const TwoStepParams& p, int rays = 360,
                                             const RayOptions& opts = {});

}  // namespace benford

#endif  // BENFORD_TWOSTEP_HPP_
