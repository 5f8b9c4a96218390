#ifndef BENFORD_CONFORMANCE_HPP_
#define BENFORD_CONFORMANCE_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "benford/significand.hpp"

namespace benford {

struct DigitHistogram {
  std::array<std::uint64_t, 9> counts{};  // digits 1..9
  std::uint64_t total = 0;
  std::uint64_t zeros_skipped = 0;

  std::uint64_t count(int digit) const { return counts.at(digit - 1); }
  std::uint64_t nonzero() const { return total - zeros_skipped; }
  void add(int digit);
};

/// log10(1 + 1/d) for d = 1..9.
std::array<double, 9> benford_digit_probabilities();

/// Finite-sample acceptance rule. At reference_n samples the verdict is
/// Pass iff ks <= ks_threshold and every Weyl magnitude for h = 1..harmonics
/// is <= weyl_threshold; for other sample counts both thresholds are
/// multiplied by sqrt(reference_n / n). reference_n = 0 disables scaling.
struct Thresholds {
  double ks_threshold = 0.03;
  double weyl_threshold = 0.05;
  int harmonics = 5;
  std::uint64_t reference_n = 10'000;
  std::uint64_t min_samples = 100;

  double scale_for(std::uint64_t n) const;
};

enum class Verdict { Pass, Fail };

struct WeylTerm {
  int h = 1;
  double magnitude = 0.0;
};

struct ConformanceReport {
  std::uint64_t n = 0;
  double ks = 0.0;
  std::vector<WeylTerm> weyl;
  double chi2 = 0.0;
  std::array<double, 9> digit_freq{};
  Verdict verdict = Verdict::Fail;

  double max_weyl() const;
  bool passed() const { return verdict == Verdict::Pass; }
};

class InsufficientData : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

DigitHistogram digit_histogram(std::span<const SignedLogValue> seq);

/// Exact one-sample KS distance between the empirical significand CDF and
/// log10 t, over the nonzero entries.
double ks_distance(std::span<const SignedLogValue> seq);

/// |(1/N) sum exp(2 pi i h log10|x_n|)| over the nonzero entries.
double weyl_magnitude(std::span<const SignedLogValue> seq, int h);

/// Pearson chi-square of the first-digit counts against Benford's law.
double chi_square(const DigitHistogram& hist);

/// Integer vector (N_1..N_9), sum N, closest in Euclidean norm to
/// N * (log 2, log 3/2, ..., log 10/9). Ties go to the smaller digit.
std::array<std::uint64_t, 9> benford_vector(std::uint64_t n);

ConformanceReport conformance_report(std::span<const SignedLogValue> seq,
                                     const Thresholds& thresholds = {});

/// Percentage count*100/total rounded half-up to two decimals, returned in
/// hundredths of a percent (3010 means 30.10%).
std::int64_t percent_hundredths(std::uint64_t count, std::uint64_t total);

/// The same percentage truncated (not rounded) to two decimals, for an
/// exact real probability.
std::int64_t truncated_percent_hundredths(double probability);

std::string format_hundredths(std::int64_t hundredths);

std::string verdict_name(Verdict v);

/// JSON object with fields n, ks, weyl, chi2, digit_freq, verdict.
std::string report_to_json(const ConformanceReport& report, int indent = 2);
ConformanceReport report_from_json(const std::string& text);

/// CSV header and row: n, ks, weyl_h1..weyl_h5, chi2, d1..d9.
std::string report_csv_header();
std::string report_to_csv_row(const ConformanceReport& report);

}  // namespace benford

#endif  // BENFORD_CONFORMANCE_HPP_
