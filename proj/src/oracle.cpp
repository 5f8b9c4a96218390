#include "benford/oracle.hpp"

#include <gmp.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

namespace benford::oracle {

DecimalBigInt::DecimalBigInt(std::uint64_t value) {
  while (value > 0) {
    limbs_.push_back(static_cast<std::uint32_t>(value % kBase));
    value /= kBase;
  }
}

void DecimalBigInt::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

DecimalBigInt& DecimalBigInt::operator+=(const DecimalBigInt& other) {
  if (limbs_.size() < other.limbs_.size()) limbs_.resize(other.limbs_.size(), 0);
  std::uint32_t carry = 0;
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    std::uint64_t s = static_cast<std::uint64_t>(limbs_[i]) + carry;
    if (i < other.limbs_.size()) s += other.limbs_[i];
    limbs_[i] = static_cast<std::uint32_t>(s % kBase);
    carry = static_cast<std::uint32_t>(s / kBase);
  }
  if (carry) limbs_.push_back(carry);
  return *this;
}

DecimalBigInt& DecimalBigInt::mul_small(std::uint64_t factor) {
  if (factor >= (1ull << 32)) {
    throw std::invalid_argument("DecimalBigInt::mul_small: factor too large");
  }
  if (factor == 0) {
    limbs_.clear();
    return *this;
  }
  std::uint64_t carry = 0;
  for (auto& limb : limbs_) {
    const std::uint64_t p = static_cast<std::uint64_t>(limb) * factor + carry;
    limb = static_cast<std::uint32_t>(p % kBase);
    carry = p / kBase;
  }
  while (carry) {
    limbs_.push_back(static_cast<std::uint32_t>(carry % kBase));
    carry /= kBase;
  }
  return *this;
}

int DecimalBigInt::leading_digit() const {
  if (limbs_.empty()) return 0;
  std::uint32_t top = limbs_.back();
  while (top >= 10) top /= 10;
  return static_cast<int>(top);
}

std::size_t DecimalBigInt::decimal_digits() const {
  if (limbs_.empty()) return 1;
  std::size_t digits = 9 * (limbs_.size() - 1);
  for (std::uint32_t top = limbs_.back(); top > 0; top /= 10) ++digits;
  return digits;
}

std::string DecimalBigInt::leading_string(std::size_t count) const {
  if (limbs_.empty()) return "0";
  std::string out = std::to_string(limbs_.back());
  for (std::size_t i = limbs_.size() - 1; i-- > 0 && out.size() < count;) {
    std::string part = std::to_string(limbs_[i]);
    out += std::string(9 - part.size(), '0') + part;
  }
  if (out.size() > count) out.resize(count);
  return out;
}

std::string DecimalBigInt::to_string() const {
  if (limbs_.empty()) return "0";
  std::string out = std::to_string(limbs_.back());
  for (std::size_t i = limbs_.size() - 1; i-- > 0;) {
    std::string part = std::to_string(limbs_[i]);
    out += std::string(9 - part.size(), '0') + part;
  }
  return out;
}

ExactSequenceKind ExactSequenceKind::linear(std::vector<std::uint64_t> coefficients,
                                            std::vector<std::uint64_t> seeds) {
  ExactSequenceKind k;
  k.kind = SequenceKind::LinearRecursion;
  k.coefficients = std::move(coefficients);
  k.seeds = std::move(seeds);
  return k;
}

ExactSequenceKind ExactSequenceKind::two_step(std::uint64_t a1, std::uint64_t a2,
                                              unsigned b1, unsigned b2,
                                              std::uint64_t x1, std::uint64_t x2) {
  ExactSequenceKind k;
  k.kind = SequenceKind::TwoStepPoly;
  k.a1 = a1;
  k.a2 = a2;
  k.b1 = b1;
  k.b2 = b2;
  k.seeds = {x1, x2};
  return k;
}

namespace {

// Every generator below hands each exact term to a sink as its decimal
// string prefix plus total digit count.
struct Term {
  std::string lead;  // up to 19 leading decimal digits, "0" for zero
  std::size_t digits = 1;
};
using Sink = std::vector<Term>;

Term term_of(const DecimalBigInt& x) {
  Term t;
  t.lead = x.leading_string(19);
  t.digits = x.decimal_digits();
  return t;
}

void power_of_two_terms(std::size_t n, Sink& out) {
  DecimalBigInt x(1);
  for (std::size_t i = 1; i <= n; ++i) {
    x.mul_small(2);
    out.push_back(term_of(x));
  }
}

void factorial_terms(std::size_t n, Sink& out) {
  DecimalBigInt x(1);
  for (std::size_t i = 1; i <= n; ++i) {
    x.mul_small(i);
    out.push_back(term_of(x));
  }
}

void linear_terms(const std::vector<std::uint64_t>& coefficients,
                  const std::vector<std::uint64_t>& seeds, std::size_t n, Sink& out) {
  const std::size_t d = coefficients.size();
  if (d == 0 || seeds.size() != d) {
    throw std::invalid_argument(
        "linear recursion needs matching coefficient and seed counts");
  }
  // Window of the last d terms, window[0] = x_{n-1}.
  std::vector<DecimalBigInt> window;
  for (std::size_t i = 0; i < d && out.size() < n; ++i) {
    out.push_back(term_of(DecimalBigInt(seeds[i])));
  }
  for (std::size_t i = d; i-- > 0;) window.emplace_back(seeds[i]);
  while (out.size() < n) {
    DecimalBigInt next;
    for (std::size_t j = 0; j < d; ++j) {
      DecimalBigInt term = window[j];
      term.mul_small(coefficients[j]);
      next += term;
    }
    out.push_back(term_of(next));
    window.pop_back();
    window.insert(window.begin(), std::move(next));
  }
}

struct MpzDeleter {
  void operator()(__mpz_struct* p) const {
    mpz_clear(p);
    delete p;
  }
};
using Mpz = std::unique_ptr<__mpz_struct, MpzDeleter>;

Mpz make_mpz(std::uint64_t v) {
  Mpz z(new __mpz_struct);
  mpz_init(z.get());
  mpz_import(z.get(), 1, 1, sizeof(v), 0, 0, &v);
  return z;
}

Term mpz_term(const __mpz_struct* z) {
  if (mpz_sgn(z) == 0) return {"0", 1};
  std::string buf(mpz_sizeinbase(z, 10) + 2, '\0');
  mpz_get_str(buf.data(), 10, z);
  buf.resize(std::char_traits<char>::length(buf.c_str()));
  Term t;
  t.digits = buf.size();
  t.lead = buf.substr(0, 19);
  return t;
}

// Doubly exponential growth; big-by-big multiplication goes through GMP.
void two_step_terms(const ExactSequenceKind& k, std::size_t n, Sink& out) {
  if (n > kTwoStepMaxTerms) {
    throw OracleRefusal("two-step polynomial recursion limited to " +
                        std::to_string(kTwoStepMaxTerms) +
                        " terms: digit count doubles every step");
  }
  if (k.seeds.size() != 2) {
    throw std::invalid_argument("two-step recursion needs seeds x1, x2");
  }
  Mpz prev2 = make_mpz(k.seeds[0]);
  Mpz prev1 = make_mpz(k.seeds[1]);
  Mpz a1 = make_mpz(k.a1), a2 = make_mpz(k.a2);
  Mpz t1 = make_mpz(0), t2 = make_mpz(0);
  if (n >= 1) out.push_back(mpz_term(prev2.get()));
  if (n >= 2) out.push_back(mpz_term(prev1.get()));
  while (out.size() < n) {
    mpz_pow_ui(t1.get(), prev1.get(), k.b1);
    mpz_mul(t1.get(), t1.get(), a1.get());
    mpz_pow_ui(t2.get(), prev2.get(), k.b2);
    mpz_mul(t2.get(), t2.get(), a2.get());
    mpz_add(t1.get(), t1.get(), t2.get());
    out.push_back(mpz_term(t1.get()));
    std::swap(prev2, prev1);
    mpz_swap(prev1.get(), t1.get());
  }
}

Sink exact_terms(const ExactSequenceKind& kind, std::size_t n) {
  if (n == 0) throw std::invalid_argument("oracle: N must be >= 1");
  Sink out;
  out.reserve(n);
  switch (kind.kind) {
    case SequenceKind::PowerOfTwo:
      power_of_two_terms(n, out);
      break;
    case SequenceKind::Fibonacci:
      linear_terms({1, 1}, {1, 1}, n, out);
      break;
    case SequenceKind::Factorial:
      factorial_terms(n, out);
      break;
    case SequenceKind::LinearRecursion:
      linear_terms(kind.coefficients, kind.seeds, n, out);
      break;
    case SequenceKind::TwoStepPoly:
      two_step_terms(kind, n, out);
      break;
  }
  return out;
}

}  // namespace

std::vector<int> exact_first_digits(const ExactSequenceKind& kind, std::size_t n) {
  std::vector<int> out;
  out.reserve(n);
  for (const Term& t : exact_terms(kind, n)) out.push_back(t.lead[0] - '0');
  return out;
}

std::vector<SignedLogValue> exact_log_values(const ExactSequenceKind& kind, std::size_t n) {
  std::vector<SignedLogValue> out;
  out.reserve(n);
  for (const Term& t : exact_terms(kind, n)) {
    if (t.lead == "0") {
      out.push_back(SignedLogValue::zero());
      continue;
    }
    // lead holds the first k digits; k <= 19 fits a long double exactly.
    const long double head = static_cast<long double>(std::stoull(t.lead));
    const long double frac = std::log10(head) - static_cast<long double>(t.lead.size() - 1);
    out.push_back(SignedLogValue::from_parts(1, static_cast<long double>(t.digits - 1), frac));
  }
  return out;
}

DigitHistogram exact_digit_histogram(const ExactSequenceKind& kind, std::size_t n) {
  DigitHistogram h;
  for (int d : exact_first_digits(kind, n)) h.add(d);
  return h;
}

}  // namespace benford::oracle
