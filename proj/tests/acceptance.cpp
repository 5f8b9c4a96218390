// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria (capped at 255).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "benford/conformance.hpp"
#include "benford/experiment.hpp"
#include "benford/matrixdyn.hpp"
#include "benford/oracle.hpp"
#include "benford/orbits.hpp"
#include "benford/stochasticdyn.hpp"
#include "benford/twostep.hpp"

using namespace benford;

namespace {

using Row = std::array<std::int64_t, 9>;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;  // 0 = no limit
  std::function<void(Outcome&)> body;
};

std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string row_text(const Row& r) {
  std::string s;
  for (auto v : r) s += (s.empty() ? "" : " ") + std::to_string(v);
  return s;
}

const DigitRow& find_row(const std::vector<DigitRow>& rows, const std::string& label) {
  for (const auto& r : rows) {
    if (r.label == label) return r;
  }
  throw std::runtime_error("missing row " + label);
}

void expect_row(Outcome& o, const std::vector<DigitRow>& rows, const std::string& label, const Row& want) {
  const Row& got = find_row(rows, label).values;
  o.check(got == want, label + " = " + row_text(got));
}

void fig1(Outcome& o) {
  const auto rows = fig1_table(10'000);
  expect_row(o, rows, "2^n", {3010, 1761, 1249, 970, 791, 670, 579, 512, 458});
  expect_row(o, rows, "F_n", {3011, 1762, 1250, 968, 792, 668, 580, 513, 456});
  expect_row(o, rows, "n!", {2956, 1789, 1276, 963, 794, 715, 571, 510, 426});
  expect_row(o, rows, "exact BL", {3010, 1760, 1249, 969, 791, 669, 579, 511, 457});
  o.detail << "three oracle rows and the exact row match";
}

void fig1a(Outcome& o) {
  const auto rows = fig1a_table();
  expect_row(o, rows, "N=100 counts", {30, 18, 13, 9, 8, 6, 5, 7, 4});
  expect_row(o, rows, "N=1000 counts", {301, 177, 125, 96, 80, 67, 56, 53, 45});
  expect_row(o, rows, "N=10000 counts", {3011, 1762, 1250, 968, 792, 668, 580, 513, 456});
  expect_row(o, rows, "N=100 benford_vector", {30, 18, 12, 10, 8, 7, 6, 5, 4});
  expect_row(o, rows, "N=1000 benford_vector", {301, 176, 125, 97, 79, 67, 58, 51, 46});
  expect_row(o, rows, "N=10000 benford_vector", {3010, 1761, 1249, 969, 792, 669, 580, 512, 458});
  o.detail << "counts and apportionments match at N = 100, 1000, 10000";
}

void log_vs_oracle(Outcome& o) {
  const std::size_t n = 10'000;
  const auto pow2 = oracle::exact_first_digits(oracle::ExactSequenceKind::power_of_two(), n);
  const auto fib = oracle::exact_first_digits(oracle::ExactSequenceKind::fibonacci(), n);
  const auto orbit = iterate_map(MapSpec::affine_plus(2.0), 1.0L, n).values;
  const auto rec = linear_recursion(RecursionSpec{{1.0, 1.0}, {1.0, 1.0}}, n).seq;
  int bad2 = 0, badf = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bad2 += first_digit(orbit.at(i)) != pow2[i];
    badf += first_digit(rec.at(i)) != fib[i];
  }
  o.check(bad2 <= 5, "2^n mismatches");
  o.check(badf <= 5, "F_n mismatches");
  o.detail << "mismatches 2^n " << bad2 << ", F_n " << badf << " of " << n;
}

void contraction(Outcome& o) {
  const auto good = conformance_report(iterate_map(MapSpec::contraction(0.1), 0.05L, 10'000).values);
  const auto bad = conformance_report(iterate_map(MapSpec::contraction(0.9), 0.05L, 10'000).values);
  o.check(good.passed() && good.ks < 0.03, "a = 0.1 should pass");
  o.check(bad.ks > 0.1, "a = 0.9 ks should exceed 0.1");
  o.detail << "a=0.1 ks " << fmt(good.ks) << " " << verdict_name(good.verdict) << "; a=0.9 ks " << fmt(bad.ks);
}

void boundary_constants(Outcome& o) {
  const auto p1 = TwoStepParams::make(1, 1, 2, 2);
  const auto p4 = TwoStepParams::make(1, 4, 2, 2);
  const auto b1 = boundary_on_ray(p1, 1, 1);
  const auto b4 = boundary_on_ray(p4, 1, 1);
  o.check(std::fabs(b1.x1 - 0.5L) < 1e-6L && std::fabs(b1.x2 - 0.5L) < 1e-6L, "(1,1,2,2) diagonal");
  o.check(std::fabs(b4.x1 - 0.2L) < 1e-6L && std::fabs(b4.x2 - 0.2L) < 1e-6L, "(1,4,2,2) diagonal");
  const auto off = boundary_on_ray(p4, 2, 1);
  const auto c = cycle2_limit(p4, off.x1, off.x2);
  const long double s5 = std::sqrt(5.0L);
  const long double ep = (5 + s5) / 30, eq = (5 - s5) / 30;
  o.check(std::fabs(c.p - ep) < 1e-8L && std::fabs(c.q - eq) < 1e-8L, "2-cycle limits");
  o.detail << "diag (" << fmt(static_cast<double>(b1.x1), 10) << ", " << fmt(static_cast<double>(b4.x1), 10)
           << "); cycle (" << fmt(static_cast<double>(c.p), 12) << ", " << fmt(static_cast<double>(c.q), 12) << ")";
}

void extended_constants(Outcome& o) {
  const auto p = TwoStepParams::make(1, 0.25, 2, 0.5, true);
  double worst = 0;
  for (const auto& [x1, x2] : {std::pair{0.3L, 0.4L}, std::pair{0.15L, 0.55L}, std::pair{0.5L, 0.2L},
                              std::pair{0.59L, 0.11L}}) {
    const auto seq = orbit_log(p, x1, x2, 3000);
    worst = std::max(worst, std::fabs(static_cast<double>(seq.back().to_real()) - 0.07268));
  }
  o.check(worst < 5e-4, "limit");
  const auto b = boundary_on_ray(p, 1, 1, {1e-9, 1e6, kDefaultBasinIterations});
  o.check(std::fabs(static_cast<double>(b.x1) - 0.7015) < 5e-4, "diagonal threshold");
  o.detail << "max |limit - 0.07268| " << fmt(worst, 3) << "; threshold " << fmt(static_cast<double>(b.x1), 8);
}

void sampling(Outcome& o) {
  const auto p = TwoStepParams::make(1, 1, 2, 2);
  const auto hi = benford_fraction(p, Region{1.5, 3, 1.5, 3}, 100, 10'000, Rng(2024));
  const auto lo = benford_fraction(p, Region{0.05, 0.3, 0.05, 0.3}, 100, 10'000, Rng(2025));
  o.check(hi.fraction() >= 0.95, "[1.5,3]^2 fraction");
  o.check(lo.fraction() >= 0.95, "[0.05,0.3]^2 fraction");
  const auto fixed = conformance_report(orbit_log(p, 0.5L, 0.5L, 10'000));
  o.check(!fixed.passed(), "boundary orbit should fail");
  o.detail << "fractions " << fmt(hi.fraction(), 4) << " (undecided " << hi.undecided << "), " << fmt(lo.fraction(), 4)
           << " (undecided " << lo.undecided << "); boundary orbit " << verdict_name(fixed.verdict);
}

void shadowing(Outcome& o) {
  std::vector<long double> y;
  for (int n = 1; n <= 40; ++n) y.push_back(std::pow(3.0L, n) * 0.7L);
  const auto s = shadow_limit(3, y);
  long double worst = 0;
  for (long double r : s.residuals) worst = std::max(worst, std::fabs(r));
  o.check(!s.residuals.empty() && worst < 1e-12L, "geometric residuals");
  o.check(std::fabs(s.y_hat - 0.7L) < 1e-15L, "geometric y_hat");

  const auto p1 = TwoStepParams::make(1, 1, 2, 2);
  const auto h1 = shadow_h_caseI(p1, std::log10(2.0L), std::log10(2.0L));
  const auto seq1 = orbit_log(p1, 2.0L, 2.0L, 20);
  const long double e1 = std::fabs(seq1[7].log_mag() - std::ldexp(h1.h, 8));  // y_10
  o.check(e1 < 1e-6L, "case I certificate");

  const auto p3 = TwoStepParams::make(1, 1, 1.2, 2);
  const auto h3 = shadow_h_caseIII(p3, std::log10(5.0L), std::log10(5.0L));
  const auto seq3 = orbit_log(p3, 5.0L, 5.0L, 20);
  const long double e3 = std::fabs(seq3[17].log_mag() - std::ldexp(h3.h, 9));  // y_20
  o.check(e3 < 1e-6L, "case III certificate");
  o.detail << "geometric max residual " << fmt(static_cast<double>(worst), 3) << "; |y10 - 2^8 h| "
           << fmt(static_cast<double>(e1), 3) << "; |y20 - 2^9 h| " << fmt(static_cast<double>(e3), 3);
}

void markov(Outcome& o) {
  double worst = 0;
  int pass = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Rng rng(seed);
    const Matrix p = random_stochastic_matrix(2, rng);
    const long double x = p(0, 1), y = p(1, 0);
    const Matrix s = stationary_limit(p);
    for (int i = 0; i < 2; ++i) {
      worst = std::max(worst, static_cast<double>(std::fabs(s(i, 0) - y / (x + y))));
      worst = std::max(worst, static_cast<double>(std::fabs(s(i, 1) - x / (x + y))));
    }
    pass += conformance_report(markov_sequences(p, 1, 1, 10'000).diff).passed();
  }
  o.check(worst < 1e-12, "P* rows");
  o.check(pass >= 90, "difference sequences");
  o.detail << "max |P* error| " << fmt(worst, 3) << "; " << pass << "/100 pass";
}

void stochastic(Outcome& o) {
  int power = 0, product = 0;
  const Rng root(99);
  for (std::uint64_t i = 0; i < 100; ++i) {
    Rng a = root.substream(2 * i), b = root.substream(2 * i + 1);
    power += conformance_report(rv_power_path(DistSpec::uniform(0, 1), a, 10'000).values).passed();
    product += conformance_report(iid_product_path(DistSpec::uniform(0, 1), b, 10'000).values).passed();
  }
  o.check(power >= 95, "power paths");
  o.check(product >= 95, "iid product paths");
  const auto e = gbm_ensemble(GBMSpec{}, 100.0, 100'000, Rng(12));
  o.check(e.ks < 0.01, "GBM ensemble");
  double cantor_min = 1.0;
  for (int k = 1; k <= 6; ++k) {
    Rng rng(100 + k);
    const auto r = distribution_ks_at_n(DistSpec::cantor10(), static_cast<std::uint64_t>(std::pow(3, k)), 100'000, rng);
    cantor_min = std::min(cantor_min, r.ks);
  }
  o.check(cantor_min > 0.05, "Cantor witness");
  o.detail << "power " << power << "/100, product " << product << "/100; GBM ks " << fmt(e.ks, 4)
           << "; Cantor min ks over 3^1..3^6 " << fmt(cantor_min, 4);
}

void properties(Outcome& o) {
  const auto fib = linear_recursion(RecursionSpec{{1.0, 1.0}, {1.0, 1.0}}, 5000).seq;
  double scale_err = 0, sign_err = 0;
  for (long double a : {7.0L, 0.013L, 3.1e40L, -2.5L}) {
    std::vector<SignedLogValue> scaled, flipped;
    for (const auto& v : fib) {
      scaled.push_back(v.scaled_by(a));
      flipped.push_back(v.negated());
    }
    for (int h = 1; h <= 5; ++h) {
      scale_err = std::max(scale_err, std::fabs(weyl_magnitude(scaled, h) - weyl_magnitude(fib, h)));
      sign_err = std::max(sign_err, std::fabs(weyl_magnitude(flipped, h) - weyl_magnitude(fib, h)));
    }
    if (a < 0) sign_err = std::max(sign_err, std::fabs(ks_distance(flipped) - ks_distance(fib)));
  }
  o.check(scale_err <= 1e-12, "Weyl scale invariance");
  o.check(sign_err <= 1e-12, "sign invariance");

  bool sums = true;
  std::vector<SignedLogValue> mixed(fib.begin(), fib.begin() + 300);
  for (int i = 0; i < 37; ++i) mixed.push_back(SignedLogValue::zero());
  const auto h = digit_histogram(mixed);
  std::uint64_t tot = 0;
  for (auto c : h.counts) tot += c;
  sums = sums && tot == h.nonzero() && h.total == mixed.size() && h.zeros_skipped == 37;
  for (std::uint64_t n = 1; n <= 2000; ++n) {
    const auto v = benford_vector(n);
    std::uint64_t s = 0;
    for (auto c : v) s += c;
    sums = sums && s == n;
  }
  o.check(sums, "sum identities");

  IntMatrix a(2, 2);
  a << 1, 1, 1, 0;
  const auto e11 = matrix_power_entries_exact(a, 1, 1, 90);
  const auto e12 = matrix_power_entries_exact(a, 1, 2, 90);
  const auto e22 = matrix_power_entries_exact(a, 2, 2, 90);
  bool fib_ok = true;
  std::int64_t f_prev = 0, f = 1;  // F_0, F_1
  for (std::size_t n = 1; n <= 90; ++n) {
    const std::int64_t f_next = f + f_prev;  // F_{n+1}
    fib_ok = fib_ok && e11[n - 1] == f_next && e12[n - 1] == f && e22[n - 1] == f_prev;
    f_prev = f;
    f = f_next;
  }
  o.check(fib_ok, "Fibonacci matrix identity");

  const auto p = TwoStepParams::make(0.1, 1, 1.2, 2);
  const auto fixed = r0_fixed_points(p);
  Rng rng(41);
  int both = 0, finite = 0, off_fixed = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x1 = SignedLogValue::from_log(1, 0.3L + 0.7L * rng.uniform_open());
    const auto x2 = SignedLogValue::from_log(1, 0.3L + 0.7L * rng.uniform_open());
    const auto d = delta_sequence(p, x1, x2, 400);
    auto settles = [&](std::size_t last) {
      const long double v = d.at(last);
      if (v > 100) return false;
      off_fixed += std::none_of(fixed.begin(), fixed.end(), [&](long double r) { return std::fabs(v - r) < 1e-6L; });
      return true;
    };
    const bool odd = settles(401), even = settles(400);
    both += odd && even;
    finite += odd || even;
  }
  o.check(both == 0 && off_fixed == 0, "case III delta dichotomy");
  o.detail << "scale " << fmt(scale_err, 3) << ", sign " << fmt(sign_err, 3) << "; dichotomy: " << finite
           << "/100 with one finite branch, " << both << " with both";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Figure 1 digit percentages", 30, fig1},
      {2, "Fibonacci counts and Benford vectors", 10, fig1a},
      {3, "log-domain vs exact oracle", 0, log_vs_oracle},
      {4, "contraction dichotomy", 5, contraction},
      {5, "boundary constants and 2-cycle", 10, boundary_constants},
      {6, "extended-mode constants", 0, extended_constants},
      {7, "two-step sampling fraction", 300, sampling},
      {8, "shadowing certificates", 0, shadowing},
      {9, "Markov stationary limit and differences", 0, markov},
      {10, "stochastic suite", 300, stochastic},
      {11, "property suite", 0, properties},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      o.ok = false;
      o.detail << " [over time limit " << c.limit_seconds << " s]";
    }
    failed += !o.ok;
    std::printf("%s %2d %s: %s (%.2f s)\n", o.ok ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return std::min(failed, 255);
}
