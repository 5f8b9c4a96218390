#include "benford/conformance.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

namespace benford {

using ordered_json = nlohmann::ordered_json;

void DigitHistogram::add(int digit) {
  ++total;
  if (digit == 0) {
    ++zeros_skipped;
    return;
  }
  if (digit < 1 || digit > 9) {
    throw std::out_of_range("DigitHistogram::add: digit outside 0..9");
  }
  ++counts[digit - 1];
}

std::array<double, 9> benford_digit_probabilities() {
  std::array<double, 9> p{};
  for (int d = 1; d <= 9; ++d) p[d - 1] = std::log10(1.0 + 1.0 / d);
  return p;
}

double Thresholds::scale_for(std::uint64_t n) const {
  if (reference_n == 0 || n == 0) return 1.0;
  return std::sqrt(static_cast<double>(reference_n) / static_cast<double>(n));
}

double ConformanceReport::max_weyl() const {
  double m = 0.0;
  for (const auto& w : weyl) m = std::max(m, w.magnitude);
  return m;
}

DigitHistogram digit_histogram(std::span<const SignedLogValue> seq) {
  DigitHistogram h;
  for (const auto& v : seq) h.add(first_digit(v));
  return h;
}

namespace {

std::vector<long double> sorted_mantissas(std::span<const SignedLogValue> seq) {
  std::vector<long double> u;
  u.reserve(seq.size());
  for (const auto& v : seq) {
    if (!v.is_zero()) u.push_back(v.mantissa);
  }
  std::sort(u.begin(), u.end());
  return u;
}

}  // namespace

double ks_distance(std::span<const SignedLogValue> seq) {
  const auto u = sorted_mantissas(seq);
  if (u.empty()) throw std::domain_error("ks_distance: no nonzero elements");
  const long double n = static_cast<long double>(u.size());
  long double d = 0.0L;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const long double above = static_cast<long double>(i + 1) / n - u[i];
    const long double below = u[i] - static_cast<long double>(i) / n;
    d = std::max({d, above, below});
  }
  return static_cast<double>(d);
}

double weyl_magnitude(std::span<const SignedLogValue> seq, int h) {
  if (h < 1) throw std::invalid_argument("weyl_magnitude: h must be >= 1");
  long double re = 0.0L, im = 0.0L;
  std::size_t n = 0;
  for (const auto& v : seq) {
    if (v.is_zero()) continue;
    long double phase = h * v.mantissa;
    phase -= std::floor(phase);
    const long double angle = 2.0L * std::numbers::pi_v<long double> * phase;
    re += std::cos(angle);
    im += std::sin(angle);
    ++n;
  }
  if (n == 0) throw std::domain_error("weyl_magnitude: no nonzero elements");
  const long double mag = std::hypot(re, im) / static_cast<long double>(n);
  return static_cast<double>(std::min(mag, 1.0L));
}

double chi_square(const DigitHistogram& hist) {
  const auto n = static_cast<double>(hist.nonzero());
  if (n == 0.0) return 0.0;
  const auto p = benford_digit_probabilities();
  double chi2 = 0.0;
  for (int d = 0; d < 9; ++d) {
    const double expected = n * p[d];
    const double diff = static_cast<double>(hist.counts[d]) - expected;
    chi2 += diff * diff / expected;
  }
  return chi2;
}

std::array<std::uint64_t, 9> benford_vector(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("benford_vector: N must be >= 1");
  std::array<std::uint64_t, 9> out{};
  std::array<long double, 9> remainder{};
  std::uint64_t assigned = 0;
  for (int d = 0; d < 9; ++d) {
    const long double target = static_cast<long double>(n) *
                               std::log10(1.0L + 1.0L / static_cast<long double>(d + 1));
    out[d] = static_cast<std::uint64_t>(std::floor(target));
    remainder[d] = target - static_cast<long double>(out[d]);
    assigned += out[d];
  }
  // With the sum fixed, the Euclidean optimum rounds up exactly the digits
  // with the largest fractional remainders.
  std::array<int, 9> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (std::uint64_t k = 0; assigned + k < n; ++k) ++out[order[k]];
  return out;
}

ConformanceReport conformance_report(std::span<const SignedLogValue> seq,
                                     const Thresholds& thresholds) {
  const DigitHistogram hist = digit_histogram(seq);
  if (hist.nonzero() < thresholds.min_samples) {
    throw InsufficientData("conformance_report: insufficient data (" +
                           std::to_string(hist.nonzero()) + " nonzero samples, need " +
                           std::to_string(thresholds.min_samples) + ")");
  }
  ConformanceReport r;
  r.n = hist.total;
  r.ks = ks_distance(seq);
  for (int h = 1; h <= thresholds.harmonics; ++h) {
    r.weyl.push_back({h, weyl_magnitude(seq, h)});
  }
  r.chi2 = chi_square(hist);
  for (int d = 0; d < 9; ++d) {
    r.digit_freq[d] = static_cast<double>(hist.counts[d]) / static_cast<double>(hist.total);
  }
  const double scale = thresholds.scale_for(hist.nonzero());
  const bool ok = r.ks <= thresholds.ks_threshold * scale &&
                  r.max_weyl() <= thresholds.weyl_threshold * scale;
  r.verdict = ok ? Verdict::Pass : Verdict::Fail;
  return r;
}

std::int64_t percent_hundredths(std::uint64_t count, std::uint64_t total) {
  if (total == 0) throw std::invalid_argument("percent_hundredths: zero total");
  const unsigned __int128 num = static_cast<unsigned __int128>(count) * 20000u + total;
  return static_cast<std::int64_t>(num / (static_cast<unsigned __int128>(total) * 2u));
}

std::int64_t truncated_percent_hundredths(double probability) {
  return static_cast<std::int64_t>(std::floor(probability * 10000.0 + 1e-9));
}

std::string format_hundredths(std::int64_t hundredths) {
  std::ostringstream os;
  os << hundredths / 100 << '.';
  const auto frac = hundredths % 100;
  if (frac < 10) os << '0';
  os << frac;
  return os.str();
}

std::string verdict_name(Verdict v) { return v == Verdict::Pass ? "Pass" : "Fail"; }

std::string report_to_json(const ConformanceReport& report, int indent) {
  ordered_json j;
  j["n"] = report.n;
  j["ks"] = report.ks;
  ordered_json weyl = ordered_json::array();
  for (const auto& w : report.weyl) {
    ordered_json term;
    term["h"] = w.h;
    term["magnitude"] = w.magnitude;
    weyl.push_back(term);
  }
  j["weyl"] = weyl;
  j["chi2"] = report.chi2;
  j["digit_freq"] = report.digit_freq;
  j["verdict"] = verdict_name(report.verdict);
  return j.dump(indent);
}

ConformanceReport report_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ConformanceReport r;
  r.n = j.at("n").get<std::uint64_t>();
  r.ks = j.at("ks").get<double>();
  for (const auto& w : j.at("weyl")) {
    r.weyl.push_back({w.at("h").get<int>(), w.at("magnitude").get<double>()});
  }
  r.chi2 = j.at("chi2").get<double>();
  r.digit_freq = j.at("digit_freq").get<std::array<double, 9>>();
  const auto v = j.at("verdict").get<std::string>();
  if (v != "Pass" && v != "Fail") throw std::invalid_argument("unknown verdict " + v);
  r.verdict = v == "Pass" ? Verdict::Pass : Verdict::Fail;
  return r;
}

std::string report_csv_header() {
  std::string h = "n,ks";
  for (int k = 1; k <= 5; ++k) h += ",weyl_h" + std::to_string(k);
  h += ",chi2";
  for (int d = 1; d <= 9; ++d) h += ",d" + std::to_string(d);
  return h;
}

std::string report_to_csv_row(const ConformanceReport& report) {
  std::ostringstream os;
  os.precision(17);
  os << report.n << ',' << report.ks;
  for (int k = 1; k <= 5; ++k) {
    os << ',';
    for (const auto& w : report.weyl) {
      if (w.h == k) os << w.magnitude;
    }
  }
  os << ',' << report.chi2;
  for (double f : report.digit_freq) os << ',' << f;
  return os.str();
}

}  // namespace benford
