#include <cmath>
#include <numbers>

#include "benford/orbits.hpp"

namespace benford {

double FlowSpec::step() const {
  if (dt > 0.0) return dt;
  return std::min(0.01, t_end / 1e4);
}

namespace {

constexpr double kLn10 = std::numbers::ln10;

double field(FlowField f, double x) {
  switch (f) {
    case FlowField::Linear:
      return x;
    case FlowField::SqrtQuad:
      return std::sqrt(x * x + 1.0);
    case FlowField::DampedRational:
      return -x / (x * x + 1.0);
  }
  return 0.0;
}

bool vanishes_at_zero(FlowField f) { return f != FlowField::SqrtQuad; }

// dy/ds for y = log10|x|, i.e. F(x) / (x ln 10) with x = sign 10^y.
double log_field(FlowField f, int sign, double y) {
  switch (f) {
    case FlowField::Linear:
      return 1.0 / kLn10;
    case FlowField::SqrtQuad:
      return sign * std::sqrt(1.0 + std::pow(10.0, -2.0 * y)) / kLn10;
    case FlowField::DampedRational:
      return -1.0 / ((1.0 + std::pow(10.0, 2.0 * y)) * kLn10);
  }
  return 0.0;
}

// Lebesgue measure of {z' in [0, z] : frac(z') <= u}, extended to z < 0 so
// that differences give the measure on any interval.
double occupied(double z, double u) {
  const double k = std::floor(z);
  return k * u + std::min(z - k, u);
}

// Time spent with frac(y) <= u while y moves linearly from ya to yb in h.
double segment_time(double ya, double yb, double h, double u) {
  if (std::fabs(yb - ya) < 1e-14) {
    return (ya - std::floor(ya)) <= u ? h : 0.0;
  }
  return h * (occupied(yb, u) - occupied(ya, u)) / (yb - ya);
}

class Occupation {
 public:
  explicit Occupation(const std::vector<double>& targets) : time_(targets.size(), 0.0) {
    for (double t : targets) {
      if (!(t >= 1.0 && t < 10.0)) {
        throw std::invalid_argument("flow_occupation: targets must lie in [1, 10)");
      }
      logs_.push_back(std::log10(t));
    }
  }

  void add_log_segment(double ya, double yb, double h) {
    for (std::size_t i = 0; i < logs_.size(); ++i) time_[i] += segment_time(ya, yb, h, logs_[i]);
  }

  // x moves linearly from xa to xb; a zero crossing is split out.
  void add_real_segment(double xa, double xb, double h) {
    if (xa != 0.0 && xb != 0.0 && (xa > 0) == (xb > 0)) {
      add_log_segment(std::log10(std::fabs(xa)), std::log10(std::fabs(xb)), h);
      return;
    }
    constexpr int kPieces = 32;
    for (int j = 0; j < kPieces; ++j) {
      const double pa = xa + (xb - xa) * j / kPieces;
      const double pb = xa + (xb - xa) * (j + 1) / kPieces;
      if (pa == 0.0 || pb == 0.0 || (pa > 0) != (pb > 0)) continue;
      add_log_segment(std::log10(std::fabs(pa)), std::log10(std::fabs(pb)), h / kPieces);
    }
  }

  std::vector<double> fractions(double t_end) const {
    std::vector<double> out;
    for (double t : time_) out.push_back(t / t_end);
    return out;
  }

 private:
  std::vector<double> logs_;
  std::vector<double> time_;
};

template <class F>
double rk4(F&& f, double v, double h) {
  const double k1 = f(v);
  const double k2 = f(v + 0.5 * h * k1);
  const double k3 = f(v + 0.5 * h * k2);
  const double k4 = f(v + h * k3);
  return v + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

std::vector<double> flow_occupation(const FlowSpec& spec, const std::vector<double>& t_targets) {
  if (!(spec.t_end > 0.0) || !std::isfinite(spec.t_end)) {
    throw std::invalid_argument("flow_occupation: t_end must be positive and finite");
  }
  if (!std::isfinite(spec.x0)) throw std::invalid_argument("flow_occupation: non-finite x0");
  Occupation occ(t_targets);
  const auto steps = static_cast<std::uint64_t>(std::ceil(spec.t_end / spec.step()));
  const double h = spec.t_end / static_cast<double>(steps);
  const FlowField f = spec.field;

  // Log coordinates when |x| > 100, or |x| < 0.01 for fields vanishing at 0.
  double x = spec.x0;
  int sign = x > 0 ? 1 : (x < 0 ? -1 : 0);
  double y = sign != 0 ? std::log10(std::fabs(x)) : 0.0;
  bool log_mode = false;
  auto want_log = [&](double ly) { return ly > 2.0 || (vanishes_at_zero(f) && ly < -2.0); };
  log_mode = sign != 0 && want_log(y);

  for (std::uint64_t i = 0; i < steps; ++i) {
    if (log_mode) {
      const double y1 = rk4([&](double v) { return log_field(f, sign, v); }, y, h);
      if (!std::isfinite(y1)) throw std::runtime_error("flow_occupation: integrator failure");
      occ.add_log_segment(y, y1, h);
      y = y1;
      if (!want_log(y)) {
        log_mode = false;
        x = sign * std::pow(10.0, y);
      }
    } else {
      const double x1 = rk4([&](double v) { return field(f, v); }, x, h);
      if (!std::isfinite(x1)) throw std::runtime_error("flow_occupation: integrator failure");
      occ.add_real_segment(x, x1, h);
      x = x1;
      sign = x > 0 ? 1 : (x < 0 ? -1 : 0);
      if (sign != 0) {
        y = std::log10(std::fabs(x));
        log_mode = want_log(y);
      }
    }
  }
  return occ.fractions(spec.t_end);
}

}  // namespace benford
