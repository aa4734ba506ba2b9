#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace knesermix {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// A non-negative real stored as its natural log; -inf encodes zero. Holds
// quantities like binom(2n+k, n) that overflow double far below the sizes
// this tool targets.
class LogValue {
 public:
  constexpr LogValue() = default;

  static constexpr LogValue zero() { return LogValue(); }
  static constexpr LogValue one() { return from_log(0.0); }
  static constexpr LogValue from_log(double log_magnitude) {
    LogValue v;
    v.log_ = log_magnitude;
    return v;
  }
  static LogValue from_value(double value);  // requires value >= 0

  double log() const { return log_; }
  double value() const { return std::exp(log_); }
  bool is_zero() const { return log_ == -std::numeric_limits<double>::infinity(); }

  friend LogValue operator+(LogValue a, LogValue b);  // log-sum-exp
  friend LogValue operator*(LogValue a, LogValue b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return from_log(a.log_ + b.log_);
  }
  friend LogValue operator/(LogValue a, LogValue b);  // b must be nonzero
  friend auto operator<=>(LogValue a, LogValue b) { return a.log_ <=> b.log_; }
  friend bool operator==(LogValue a, LogValue b) { return a.log_ == b.log_; }

 private:
  double log_ = -std::numeric_limits<double>::infinity();
};

// Signed log-magnitude pair, for alternating-sign eigenvalues whose
// magnitudes underflow double.
struct SignedLog {
  int sign = 0;  // -1, 0, +1
  LogValue magnitude = LogValue::zero();

  double value() const { return sign * magnitude.value(); }
  SignedLog pow(std::int64_t exponent) const;
};

// max-extraction + compensated accumulation; empty or all -inf gives -inf.
double log_sum_exp(std::span<const double> log_terms);
// log(e^a - e^b) for a >= b.
double log_diff_exp(double a, double b);

// log of binom(n, r); the zero element when r is outside [0, n]. Backed by a
// growable cache of log-factorial prefix sums (compensated long-double
// accumulation), so repeated queries are O(1).
LogValue log_binomial(std::int64_t n, std::int64_t r);

// Exact binom(n, r); 0 outside [0, n].
BigInt exact_binomial(std::int64_t n, std::int64_t r);

double to_double(const BigRational& value);

// Draw `draws` items from a `population` containing `successes` marked ones;
// the classical sampling-without-replacement law.
struct HypergeometricParams {
  std::int64_t population;  // N
  std::int64_t successes;   // m
  std::int64_t draws;       // n

  HypergeometricParams(std::int64_t population, std::int64_t successes,
                       std::int64_t draws);

  std::int64_t support_min() const {
    return std::max<std::int64_t>(0, draws + successes - population);
  }
  std::int64_t support_max() const { return std::min(draws, successes); }
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

LogValue hypergeometric_pmf(const HypergeometricParams& p, std::int64_t i);
BigRational hypergeometric_pmf_exact(const HypergeometricParams& p, std::int64_t i);

// Closed-form mean nm/N and variance nm(N-m)(N-n)/(N^2(N-1)); variance 0
// when N = 1.
Moments hypergeometric_moments(const HypergeometricParams& p);

// Dense pmf over i = 0..draws (zeros off support), built by a mode-anchored
// double-double ratio recurrence and normalized, so each entry carries full
// double precision rather than the ~1e-13 of exp(log-binomial differences).
std::vector<double> hypergeometric_pmf_table(const HypergeometricParams& p);

// Exact-twin numerators binom(m,i)*binom(N-m,n-i) for i = 0..draws, plus the
// common denominator binom(N,n).
struct ExactPmfTable {
  std::vector<BigInt> numerators;
  BigInt denominator;
};
ExactPmfTable hypergeometric_pmf_table_exact(const HypergeometricParams& p);

}  // namespace knesermix
