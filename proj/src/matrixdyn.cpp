#include "benford/matrixdyn.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>

namespace benford {

namespace {

void require_square(const Matrix& a, const char* who) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(who) + ": matrix must be square and non-empty");
  }
}

void require_index(const Matrix& a, int k, int l, const char* who) {
  if (k < 1 || l < 1 || k > a.rows() || l > a.cols()) {
    throw std::invalid_argument(std::string(who) + ": index (k, l) out of range");
  }
}

SignedLogValue scaled_entry(long double v, long double scale_int, long double scale_frac) {
  if (v == 0.0L) return SignedLogValue::zero();
  return SignedLogValue::from_parts(v > 0 ? 1 : -1, scale_int,
                                    scale_frac + std::log10(std::fabs(v)));
}

// Keeps an integer/fraction split of a running log10 scale.
void add_scale(long double& scale_int, long double& scale_frac, long double lg) {
  scale_frac += lg;
  const long double f = std::floor(scale_frac);
  scale_int += f;
  scale_frac -= f;
}

bool is_power_of_ten(__int128 v) {
  if (v < 1) return false;
  while (v % 10 == 0) v /= 10;
  return v == 1;
}

bool perfect_square(__int128 v, __int128& root) {
  if (v < 0) return false;
  auto r = static_cast<__int128>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  root = r;
  return r * r == v;
}

}  // namespace

MatrixSeqState::MatrixSeqState(const Matrix& a) {
  require_square(a, "MatrixSeqState");
  const long double nrm = a.norm();
  if (nrm == 0.0L) throw MatrixError("matrix power: zero matrix");
  current = a / nrm;
  add_scale(scale_int, scale_frac, std::log10(nrm));
  n = 1;
}

void MatrixSeqState::multiply(const Matrix& a) {
  Matrix next = current * a;
  const long double nrm = next.norm();
  if (!(nrm > 1e-4000L) || !std::isfinite(nrm)) {
    throw MatrixError("matrix power: singular collapse at n = " + std::to_string(n + 1));
  }
  current = next / nrm;
  add_scale(scale_int, scale_frac, std::log10(nrm));
  ++n;
}

SignedLogValue MatrixSeqState::entry(int k, int l) const {
  return scaled_entry(current(k, l), scale_int, scale_frac);
}

std::vector<SignedLogValue> matrix_power_entries(const Matrix& a, int k, int l, std::size_t n) {
  require_square(a, "matrix_power_entries");
  require_index(a, k, l, "matrix_power_entries");
  if (n == 0) throw std::invalid_argument("matrix_power_entries: N must be >= 1");
  std::vector<SignedLogValue> out;
  out.reserve(n);
  MatrixSeqState st(a);
  out.push_back(st.entry(k - 1, l - 1));
  while (out.size() < n) {
    st.multiply(a);
    out.push_back(st.entry(k - 1, l - 1));
  }
  return out;
}

std::vector<SignedLogValue> matrix_power_norms(const Matrix& a, std::size_t n) {
  require_square(a, "matrix_power_norms");
  if (n == 0) throw std::invalid_argument("matrix_power_norms: N must be >= 1");
  std::vector<SignedLogValue> out;
  out.reserve(n);
  MatrixSeqState st(a);
  for (;;) {
    Eigen::JacobiSVD<Matrix> svd(st.current);
    out.push_back(scaled_entry(svd.singularValues()(0), st.scale_int, st.scale_frac));
    if (out.size() == n) break;
    st.multiply(a);
  }
  return out;
}

std::vector<std::int64_t> matrix_power_entries_exact(const IntMatrix& a, int k, int l, std::size_t n) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw std::invalid_argument("matrix_power_entries_exact: matrix must be square");
  }
  if (k < 1 || l < 1 || k > a.rows() || l > a.cols()) {
    throw std::invalid_argument("matrix_power_entries_exact: index (k, l) out of range");
  }
  const auto d = a.rows();
  IntMatrix p = a;
  std::vector<std::int64_t> out{p(k - 1, l - 1)};
  while (out.size() < n) {
    IntMatrix next(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        std::int64_t acc = 0;
        for (Eigen::Index m = 0; m < d; ++m) {
          std::int64_t prod = 0;
          if (__builtin_mul_overflow(p(i, m), a(m, j), &prod) ||
              __builtin_add_overflow(acc, prod, &acc)) {
            throw MatrixError("matrix_power_entries_exact: int64 overflow at n = " +
                              std::to_string(out.size() + 1));
          }
        }
        next(i, j) = acc;
      }
    }
    p = std::move(next);
    out.push_back(p(k - 1, l - 1));
  }
  return out;
}

long double spectral_radius(const Matrix& a) {
  require_square(a, "spectral_radius");
  const auto d = a.rows();
  if (d > 16) throw std::invalid_argument("spectral_radius: dimension above 16");
  if (a.norm() == 0.0L) return 0.0L;

  constexpr int kMaxIter = 20000;
  Eigen::Matrix<long double, Eigen::Dynamic, 1> v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = 1.0L + 0.1L * static_cast<long double>(i);
  v.normalize();
  long double prev = 0.0L;
  int stable = 0;
  for (int it = 0; it < kMaxIter; ++it) {
    Eigen::Matrix<long double, Eigen::Dynamic, 1> w = a * v;
    const long double rho = w.norm();
    if (rho == 0.0L) break;
    w /= rho;
    const long double residual = std::min((w - v).norm(), (w + v).norm());
    if (std::fabs(rho - prev) <= 1e-16L * rho && residual < 1e-9L) {
      if (++stable >= 5) return rho;
    } else {
      stable = 0;
    }
    prev = rho;
    v = w;
  }

  Eigen::EigenSolver<Matrix> es(a, false);
  if (es.info() != Eigen::Success) {
    throw MatrixError("spectral_radius: no convergence after " + std::to_string(kMaxIter) +
                      " power iterations and Schur fallback failed");
  }
  long double rho = 0.0L;
  for (Eigen::Index i = 0; i < d; ++i) rho = std::max(rho, std::abs(es.eigenvalues()(i)));
  return rho;
}

LogRationality log_spectral_radius_rationality(const IntMatrix& a) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw std::invalid_argument("log_spectral_radius_rationality: matrix must be square");
  }
  const auto d = a.rows();
  bool diagonal = true;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (i != j && a(i, j) != 0) diagonal = false;
    }
  }
  if (diagonal) {
    __int128 rho = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
      rho = std::max<__int128>(rho, a(i, i) < 0 ? -static_cast<__int128>(a(i, i)) : a(i, i));
    }
    if (rho == 0) return LogRationality::Empirical;
    return is_power_of_ten(rho) ? LogRationality::Rational : LogRationality::Irrational;
  }
  if (d != 2) return LogRationality::Empirical;

  const __int128 tr = static_cast<__int128>(a(0, 0)) + a(1, 1);
  const __int128 det = static_cast<__int128>(a(0, 0)) * a(1, 1) -
                       static_cast<__int128>(a(0, 1)) * a(1, 0);
  const __int128 disc = tr * tr - 4 * det;
  if (disc < 0) {
    // Complex pair with |lambda|^2 = det.
    return is_power_of_ten(det) ? LogRationality::Rational : LogRationality::Irrational;
  }
  __int128 root = 0;
  if (perfect_square(disc, root)) {
    const __int128 abs_tr = tr < 0 ? -tr : tr;
    const __int128 twice_rho = abs_tr + root;
    if (twice_rho == 0) return LogRationality::Empirical;
    if (twice_rho % 2 != 0) return LogRationality::Irrational;
    return is_power_of_ten(twice_rho / 2) ? LogRationality::Rational : LogRationality::Irrational;
  }
  // Quadratic irrational: a power of rho is rational only when the
  // conjugate is -rho, i.e. trace zero and rho = sqrt(-det).
  if (tr == 0) return is_power_of_ten(-det) ? LogRationality::Rational : LogRationality::Irrational;
  return LogRationality::Irrational;
}

void RecursionSpec::validate() const {
  if (coeffs.empty()) throw std::invalid_argument("RecursionSpec: order must be >= 1");
  if (seeds.size() != coeffs.size()) {
    throw std::invalid_argument("RecursionSpec: need exactly d seeds");
  }
  for (double c : coeffs) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw std::invalid_argument("RecursionSpec: coefficients must be positive");
    }
  }
  for (double s : seeds) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("RecursionSpec: seeds must be positive");
    }
  }
}

LinearRecursionResult linear_recursion(const RecursionSpec& spec, std::size_t n) {
  spec.validate();
  if (n == 0) throw std::invalid_argument("linear_recursion: N must be >= 1");
  const auto d = static_cast<Eigen::Index>(spec.coeffs.size());

  LinearRecursionResult res;
  // Dominant root: p(z) = z^d - sum a_i z^(d-i) has exactly one positive root.
  auto poly = [&](long double z) {
    long double acc = 1.0L;
    for (double c : spec.coeffs) acc = acc * z - c;
    return acc;
  };
  long double lo = 0.0L, hi = 1.0L;
  for (double c : spec.coeffs) hi += c;
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    (poly(mid) > 0.0L ? hi : lo) = mid;
  }
  res.zeta = 0.5L * (lo + hi);
  if (d > 1) {
    Matrix companion = Matrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) companion(0, j) = spec.coeffs[j];
    for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0L;
    Eigen::EigenSolver<Matrix> es(companion, false);
    if (es.info() != Eigen::Success) throw MatrixError("linear_recursion: eigen solver failed");
    int dominant = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (std::abs(es.eigenvalues()(i)) >= res.zeta * (1.0L - 1e-9L)) ++dominant;
    }
    if (dominant != 1) {
      throw MatrixError("linear_recursion: characteristic polynomial has no simple dominant real root");
    }
  }

  res.seq.reserve(n);
  for (Eigen::Index i = 0; i < d && res.seq.size() < n; ++i) {
    res.seq.push_back(SignedLogValue::from_real(spec.seeds[i]));
  }
  // window(0) is the most recent term; the vector is kept at unit norm.
  Eigen::Matrix<long double, Eigen::Dynamic, 1> window(d);
  for (Eigen::Index i = 0; i < d; ++i) window(i) = spec.seeds[d - 1 - i];
  long double scale_int = 0.0L, scale_frac = 0.0L;
  {
    const long double nrm = window.norm();
    window /= nrm;
    add_scale(scale_int, scale_frac, std::log10(nrm));
  }
  while (res.seq.size() < n) {
    long double next = 0.0L;
    for (Eigen::Index j = 0; j < d; ++j) next += spec.coeffs[j] * window(j);
    for (Eigen::Index j = d - 1; j > 0; --j) window(j) = window(j - 1);
    window(0) = next;
    const long double nrm = window.norm();
    window /= nrm;
    add_scale(scale_int, scale_frac, std::log10(nrm));
    res.seq.push_back(scaled_entry(window(0), scale_int, scale_frac));
  }
  return res;
}

Matrix random_stochastic_matrix(int d, Rng& rng) {
  if (d < 2) throw std::invalid_argument("random_stochastic_matrix: d must be >= 2");
  Matrix p(d, d);
  for (int i = 0; i < d; ++i) {
    long double total = 0.0L;
    for (int j = 0; j < d; ++j) {
      p(i, j) = -std::log(static_cast<long double>(rng.uniform_open()));
      total += p(i, j);
    }
    long double partial = 0.0L;
    for (int j = 0; j + 1 < d; ++j) {
      p(i, j) /= total;
      partial += p(i, j);
    }
    p(i, d - 1) = 1.0L - partial;
  }
  return p;
}

bool is_primitive(const Matrix& p) {
  require_square(p, "is_primitive");
  const auto d = p.rows();
  using Pattern = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;
  Pattern b = (p.array() > 0.0L).cast<int>();
  auto bool_mul = [&](const Pattern& x, const Pattern& y) {
    Pattern r = x * y;
    return Pattern((r.array() > 0).cast<int>());
  };
  // Wielandt: a primitive matrix has P^k > 0 for k = (d-1)^2 + 1.
  long exponent = (d - 1) * (d - 1) + 1;
  Pattern result = Pattern::Identity(d, d);
  Pattern base = b;
  while (exponent > 0) {
    if (exponent & 1) result = bool_mul(result, base);
    base = bool_mul(base, base);
    exponent >>= 1;
  }
  return (result.array() > 0).all();
}

Matrix stationary_limit(const Matrix& p) {
  require_square(p, "stationary_limit");
  const auto d = p.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    if ((p.row(i).array() < 0.0L).any() || std::fabs(p.row(i).sum() - 1.0L) > 1e-12L) {
      throw std::invalid_argument("stationary_limit: matrix is not row-stochastic");
    }
  }
  if (!is_primitive(p)) throw MatrixError("stationary_limit: matrix is reducible or periodic");
  Matrix sys = p.transpose() - Matrix::Identity(d, d);
  sys.row(d - 1).setOnes();
  Eigen::Matrix<long double, Eigen::Dynamic, 1> rhs = Eigen::Matrix<long double, Eigen::Dynamic, 1>::Zero(d);
  rhs(d - 1) = 1.0L;
  const Eigen::Matrix<long double, Eigen::Dynamic, 1> pi = sys.fullPivLu().solve(rhs);
  return Eigen::Matrix<long double, Eigen::Dynamic, 1>::Ones(d) * pi.transpose();
}

MarkovSequences markov_sequences(const Matrix& p, int k, int l, std::size_t n) {
  require_square(p, "markov_sequences");
  require_index(p, k, l, "markov_sequences");
  if (n == 0) throw std::invalid_argument("markov_sequences: N must be >= 1");
  MarkovSequences res;
  res.p_star = stationary_limit(p);
  const auto d = p.rows();
  const Matrix q = p - res.p_star;
  const Matrix q_minus_i = q - Matrix::Identity(d, d);
  const long double qn = q.norm();

  res.diff.reserve(n);
  res.gap.reserve(n);
  auto fill_zero = [&] {
    res.eventually_zero = true;
    while (res.gap.size() < n) {
      res.gap.push_back(SignedLogValue::zero());
      res.diff.push_back(SignedLogValue::zero());
    }
  };
  if (qn <= 1e-14L) {
    fill_zero();
    return res;
  }
  res.lambda2 = spectral_radius(q);

  Matrix m = q / qn;
  long double scale_int = 0.0L, scale_frac = 0.0L;
  add_scale(scale_int, scale_frac, std::log10(qn));
  for (std::size_t step = 1; step <= n; ++step) {
    res.gap.push_back(scaled_entry(m(k - 1, l - 1), scale_int, scale_frac));
    const long double dv = m.row(k - 1).dot(q_minus_i.col(l - 1));
    res.diff.push_back(scaled_entry(dv, scale_int, scale_frac));
    if (step == n) break;
    Matrix next = m * q;
    const long double nrm = next.norm();
    if (nrm < 1e-12L) {
      fill_zero();
      break;
    }
    m = next / nrm;
    add_scale(scale_int, scale_frac, std::log10(nrm));
  }

  // Least-squares slope of log10|gap_n| against n over the last 50 nonzero terms.
  std::vector<std::pair<long double, long double>> pts;
  for (std::size_t i = res.gap.size(); i-- > 0 && pts.size() < 50;) {
    if (!res.gap[i].is_zero()) pts.emplace_back(static_cast<long double>(i + 1), res.gap[i].log_mag());
  }
  if (pts.size() >= 2) {
    long double mx = 0, my = 0;
    for (const auto& [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= pts.size();
    my /= pts.size();
    long double sxy = 0, sxx = 0;
    for (const auto& [x, y] : pts) {
      sxy += (x - mx) * (y - my);
      sxx += (x - mx) * (x - mx);
    }
    res.fitted_slope = sxy / sxx;
  }
  return res;
}

}  // namespace benford
