#ifndef BENFORD_EXPERIMENT_HPP_
#define BENFORD_EXPERIMENT_HPP_

// Serializable experiment descriptions, the runner behind `benford run`, and
// the table/figure reproductions behind `benford reproduce`.

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "benford/conformance.hpp"
#include "benford/matrixdyn.hpp"
#include "benford/oracle.hpp"
#include "benford/orbits.hpp"
#include "benford/stochasticdyn.hpp"
#include "benford/twostep.hpp"

namespace benford {

/// Config validation failure; what() starts with the offending field path.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : std::invalid_argument(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct OracleSystem {
  oracle::ExactSequenceKind kind = oracle::ExactSequenceKind::power_of_two();
};

struct MapSystem {
  MapSpec spec;
  double x0 = 1.0;
};

struct NewtonSystem {
  enum class Series { Diffs, Errors };
  NewtonTarget target = NewtonTarget::ExpMinus2;
  double x0 = 1.0;
  Series series = Series::Diffs;
};

struct MatrixPowerSystem {
  Matrix a = Matrix::Identity(2, 2);
  int k = 1;
  int l = 1;
};

struct RecursionSystem {
  RecursionSpec spec{{1.0, 1.0}, {1.0, 1.0}};
};

/// Differences [P^(n+1) - P^n]_{kl}; an empty matrix means a random
/// stochastic matrix of the given dimension drawn from the config seed.
struct MarkovSystem {
  Matrix p;
  int dimension = 2;
  int k = 1;
  int l = 1;
};

struct RandomPathSystem {
  enum class Kind { Power, IidProduct };
  Kind kind = Kind::Power;
  DistSpec dist = DistSpec::uniform(0.0, 1.0);
};

/// Grid values of one geometric Brownian motion path; N is ignored.
struct GbmPathSystem {
  GBMSpec spec;
};

struct TwoStepSystem {
  TwoStepParams params;
  double x1 = 1.0;
  double x2 = 1.0;
};

using SystemSpec = std::variant<OracleSystem, MapSystem, NewtonSystem, MatrixPowerSystem,
                                RecursionSystem, MarkovSystem, RandomPathSystem, GbmPathSystem,
                                TwoStepSystem>;

struct ExperimentConfig {
  SystemSpec system;
  std::uint64_t n = 10'000;
  Thresholds thresholds;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::string format = "json";  // json or csv
};

/// Canonical JSON: fixed key order, every field present.
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunResult {
  ConformanceReport report;
  std::vector<SignedLogValue> sequence;
  std::string note;  // e.g. why an orbit stopped early
};

RunResult run_experiment(const ExperimentConfig& config);

/// CSV with columns n, sign, log_mag, first_digit.
std::string orbit_csv(std::span<const SignedLogValue> seq);

/// Writes report.json or report.csv plus orbit.csv under config.out_dir and
/// returns the report text.
std::string write_artifacts(const ExperimentConfig& config, const RunResult& result);

enum class Figure { Fig1, Fig1a, Fig2Boundary };

Figure parse_figure(const std::string& name);

struct DigitRow {
  std::string label;
  std::array<std::int64_t, 9> values{};  // hundredths of a percent, or counts
};

/// First-digit percentages of 2^n, F_n, n! at N, then the exact law
/// truncated to two decimals.
std::vector<DigitRow> fig1_table(std::size_t n = 10'000);

/// Fibonacci counts and benford_vector rows at N = 10^2, 10^3, 10^4.
std::vector<DigitRow> fig1a_table();

/// Boundary of A0 for x_n = x_{n-1}^2 + x_{n-2}^2 over 360 rays.
std::vector<BoundaryScanPoint> fig2_boundary();

std::string boundary_csv(std::span<const BoundaryScanPoint> points);

/// The figure as CSV (or JSON), ready to write to disk.
std::string reproduce(Figure figure, const std::string& format = "csv");

}  // namespace benford

#endif  // BENFORD_EXPERIMENT_HPP_
