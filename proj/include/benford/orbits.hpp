#ifndef BENFORD_ORBITS_HPP_
#define BENFORD_ORBITS_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "benford/significand.hpp"

namespace benford {

/// Additive term g(x) in T(x) = a x + g(x) and T(x) = a x^b + g(x).
enum class GTag {
  Zero,    // 0
  One,     // 1
  Sqrt,    // sqrt|x|
  ExpNeg,  // e^(-x)
};

/// Built-in index formula for non-autonomous coefficients, n >= 1.
struct IndexedRule {
  enum class Kind {
    Constant,   // p
    Harmonic,   // p + q / n
    Linear,     // p + q n
    Geometric,  // p q^n
  };
  Kind kind = Kind::Constant;
  double p = 1.0;
  double q = 0.0;

  double at(std::uint64_t n) const;

  static IndexedRule constant(double p) { return {Kind::Constant, p, 0.0}; }
  static IndexedRule harmonic(double p, double q) { return {Kind::Harmonic, p, q}; }
  static IndexedRule linear(double p, double q) { return {Kind::Linear, p, q}; }
  static IndexedRule geometric(double p, double q) { return {Kind::Geometric, p, q}; }
};

enum class MapFamily {
  AffinePlus,             // a x + g(x), a > 1
  ContractionFixedPoint,  // x + a e^(-x) - a
  PowerPlus,              // a x^b + g(x), a > 0, b > 1
  AnalyticFlat,           // x - 1 + e^(-x)
  Exponential,            // e^x
  Tent,                   // 1 - |2x - 1|
  NonAutonomousLinear,    // a_n x
  NonAutonomousPower,     // a_n x^(b_n) + g(x), g in {Zero, One}
};

struct MapSpec {
  MapFamily family = MapFamily::AffinePlus;
  double a = 2.0;
  double b = 2.0;
  GTag g = GTag::Zero;
  IndexedRule a_rule;
  IndexedRule b_rule = IndexedRule::constant(2.0);

  /// Throws std::invalid_argument when the parameters violate the family's
  /// requirements.
  void validate() const;

  static MapSpec affine_plus(double a, GTag g = GTag::Zero);
  static MapSpec contraction(double a);
  static MapSpec power_plus(double a, double b, GTag g = GTag::Zero);
  static MapSpec analytic_flat();
  static MapSpec exponential();
  static MapSpec tent();
  static MapSpec non_autonomous_linear(IndexedRule a_rule);
  static MapSpec non_autonomous_power(IndexedRule a_rule, IndexedRule b_rule,
                                      GTag g = GTag::Zero);
};

struct Orbit {
  std::vector<SignedLogValue> values;
  bool truncated = false;
  std::string reason;
};

/// x_1..x_N with x_n = T_n(x_{n-1}). Values with |log10 x| <= 150 are
/// obtained by evaluating T directly; beyond that the family's log-domain
/// recursion takes over. Arithmetic is carried at a precision large enough
/// for frac(log10|x_N|) to be exact despite the family's growth rate.
/// An orbit that leaves the representable range or the family's domain is
/// returned truncated with a reason.
Orbit iterate_map(const MapSpec& spec, long double x0, std::size_t n);
Orbit iterate_map(const MapSpec& spec, const SignedLogValue& x0, std::size_t n);

/// Same orbit evaluated directly on reals (no log-domain switch), for
/// checking the two paths against each other on their common window.
Orbit iterate_map_native(const MapSpec& spec, long double x0, std::size_t n);

enum class NewtonTarget {
  ExpMinus2,       // f(x) = e^x - 2, simple root
  ExpMinus2Cubed,  // f(x) = (e^x - 2)^3, triple root
};

struct NewtonSequences {
  std::vector<SignedLogValue> diffs;   // T^(n+1)(x0) - T^n(x0), n = 0..N-1
  std::vector<SignedLogValue> errors;  // T^n(x0) - ln 2,         n = 0..N-1
  std::size_t direct_steps = 0;        // entries computed before the asymptotic switch
};

class NewtonDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Newton iterates for f with root x* = ln 2. The simple root switches to
/// log|e_(n+1)| = 2 log|e_n| + log(1/2) once |e_n| < 1e-8.
NewtonSequences newton_sequences(NewtonTarget f, double x0, std::size_t n);

enum class FlowField {
  Linear,          // x' = x
  SqrtQuad,        // x' = sqrt(x^2 + 1)
  DampedRational,  // x' = -x / (x^2 + 1)
};

struct FlowSpec {
  FlowField field = FlowField::Linear;
  double x0 = 1.0;
  double t_end = 100.0;
  double dt = 0.0;  // 0 selects min(0.01, t_end / 1e4)

  double step() const;
};

/// Fraction of [0, t_end) during which S(x(s)) <= t, for each target t.
std::vector<double> flow_occupation(const FlowSpec& spec, const std::vector<double>& t_targets);

}  // namespace benford

#endif  // BENFORD_ORBITS_HPP_
