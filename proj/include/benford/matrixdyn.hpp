#ifndef BENFORD_MATRIXDYN_HPP_
#define BENFORD_MATRIXDYN_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "benford/rng.hpp"
#include "benford/significand.hpp"

namespace benford {

using Matrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// A^n held as current * 10^log_scale with |current|_F = 1. The scale is
/// kept as an integer part plus a fraction in [0, 1).
struct MatrixSeqState {
  Matrix current;
  long double scale_int = 0;
  long double scale_frac = 0;
  std::uint64_t n = 0;

  explicit MatrixSeqState(const Matrix& a);
  void multiply(const Matrix& a);  // advances n by one
  SignedLogValue entry(int k, int l) const;  // 0-based
  long double log_scale() const { return scale_int + scale_frac; }
};

class MatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// [A^n]_{kl} for n = 1..N, with 1-based k, l.
std::vector<SignedLogValue> matrix_power_entries(const Matrix& a, int k, int l, std::size_t n);

/// Spectral norms |A^n| for n = 1..N.
std::vector<SignedLogValue> matrix_power_norms(const Matrix& a, std::size_t n);

/// Exact [A^n]_{kl} for integer A, n = 1..N; throws MatrixError on int64
/// overflow.
std::vector<std::int64_t> matrix_power_entries_exact(const IntMatrix& a, int k, int l, std::size_t n);

/// Largest eigenvalue modulus; power iteration first, then a full Schur
/// decomposition when the iteration does not settle.
long double spectral_radius(const Matrix& a);

enum class LogRationality { Rational, Irrational, Empirical };

/// Decides whether log10 rho(A) is rational for integer 1x1, diagonal, and
/// 2x2 matrices whose eigenvalues have closed forms; otherwise Empirical.
LogRationality log_spectral_radius_rationality(const IntMatrix& a);

struct RecursionSpec {
  std::vector<double> coeffs;  // a_1..a_d, x_n = a_1 x_{n-1} + ... + a_d x_{n-d}
  std::vector<double> seeds;   // x_1..x_d

  void validate() const;
};

struct LinearRecursionResult {
  std::vector<SignedLogValue> seq;  // x_1..x_N
  long double zeta = 0;             // dominant root of z^d = a_1 z^(d-1) + ... + a_d
};

LinearRecursionResult linear_recursion(const RecursionSpec& spec, std::size_t n);

/// Rows drawn independently and uniformly from the simplex via normalised
/// exponentials; each row sums to one.
Matrix random_stochastic_matrix(int d, Rng& rng);

/// Stationary limit P* = 1 pi for a primitive stochastic matrix.
Matrix stationary_limit(const Matrix& p);

/// True when some power of P is entrywise positive (irreducible and
/// aperiodic).
bool is_primitive(const Matrix& p);

struct MarkovSequences {
  std::vector<SignedLogValue> diff;  // [P^(n+1) - P^n]_{kl}, n = 1..N
  std::vector<SignedLogValue> gap;   // [P^n - P*]_{kl},      n = 1..N
  Matrix p_star;
  long double lambda2 = 0;           // second largest eigenvalue modulus
  long double fitted_slope = 0;      // slope of log10|gap_n| over the last 50 terms
  bool eventually_zero = false;
};

/// Uses P^n - P* = (P - P*)^n, carried by scale-and-accumulate, so the
/// sequences never underflow.
MarkovSequences markov_sequences(const Matrix& p, int k, int l, std::size_t n);

}  // namespace benford

#endif  // BENFORD_MATRIXDYN_HPP_
