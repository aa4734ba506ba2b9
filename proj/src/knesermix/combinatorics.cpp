#include "knesermix/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

#include "knesermix/numeric.hpp"

namespace knesermix {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Prefix sums of log(i!), grown on demand and read-only afterwards. The
// accumulator is a compensated long double so the table stays accurate to a
// few ulp even deep into the millions.
class LogFactorialCache {
 public:
  double log_factorial(std::int64_t m) {
    {
      std::shared_lock lock(mutex_);
      if (static_cast<std::size_t>(m) < table_.size()) return table_[m];
    }
    std::unique_lock lock(mutex_);
    grow(static_cast<std::size_t>(m) + 1);
    return table_[m];
  }

 private:
  void grow(std::size_t needed) {
    if (needed <= table_.size()) return;
    std::size_t target = std::max<std::size_t>(needed, table_.size() * 2);
    target = std::max<std::size_t>(target, 1024);
    if (table_.empty()) {
      table_.push_back(0.0);  // log(0!) = 0
      acc_ = 0.0L;
      comp_ = 0.0L;
    }
    table_.reserve(target);
    for (std::size_t i = table_.size(); i < target; ++i) {
      long double term = std::log(static_cast<long double>(i)) - comp_;
      long double sum = acc_ + term;
      comp_ = (sum - acc_) - term;
      acc_ = sum;
      table_.push_back(static_cast<double>(acc_));
    }
  }

  std::shared_mutex mutex_;
  std::vector<double> table_;
  long double acc_ = 0.0L;
  long double comp_ = 0.0L;
};

LogFactorialCache& log_factorials() {
  static LogFactorialCache cache;
  return cache;
}

// Above this the cache would dominate memory; lgamma is accurate enough for
// the bounds-only sweeps that reach such sizes.
constexpr std::int64_t kLogFactorialCacheLimit = 1 << 24;

double log_factorial(std::int64_t m) {
  if (m < kLogFactorialCacheLimit) return log_factorials().log_factorial(m);
  return std::lgamma(static_cast<double>(m) + 1.0);
}

}  // namespace

LogValue LogValue::from_value(double value) {
  if (value < 0.0 || std::isnan(value)) {
    throw std::invalid_argument("LogValue::from_value: negative or NaN input");
  }
  return from_log(std::log(value));
}

LogValue operator+(LogValue a, LogValue b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  double hi = std::max(a.log_, b.log_);
  double lo = std::min(a.log_, b.log_);
  return LogValue::from_log(hi + std::log1p(std::exp(lo - hi)));
}

LogValue operator/(LogValue a, LogValue b) {
  if (b.is_zero()) throw std::domain_error("LogValue: division by zero");
  if (a.is_zero()) return LogValue::zero();
  return LogValue::from_log(a.log_ - b.log_);
}

SignedLog SignedLog::pow(std::int64_t exponent) const {
  if (exponent == 0) return {1, LogValue::one()};
  if (sign == 0) return {0, LogValue::zero()};
  int s = (sign < 0 && (exponent & 1)) ? -1 : 1;
  return {s, LogValue::from_log(magnitude.log() * static_cast<double>(exponent))};
}

double log_sum_exp(std::span<const double> log_terms) {
  double hi = kNegInf;
  for (double t : log_terms) hi = std::max(hi, t);
  if (hi == kNegInf) return kNegInf;
  CompensatedSum acc;
  for (double t : log_terms) acc.add(std::exp(t - hi));
  return hi + std::log(acc.result());
}

double log_diff_exp(double a, double b) {
  if (b == kNegInf) return a;
  if (b > a) throw std::domain_error("log_diff_exp: negative difference");
  if (b == a) return kNegInf;
  return a + std::log1p(-std::exp(b - a));
}

LogValue log_binomial(std::int64_t n, std::int64_t r) {
  if (n < 0) throw std::invalid_argument("log_binomial: n must be non-negative");
  if (r < 0 || r > n) return LogValue::zero();
  return LogValue::from_log(log_factorial(n) - log_factorial(r) -
                            log_factorial(n - r));
}

BigInt exact_binomial(std::int64_t n, std::int64_t r) {
  if (n < 0) throw std::invalid_argument("exact_binomial: n must be non-negative");
  if (r < 0 || r > n) return 0;
  std::int64_t m = std::min(r, n - r);
  BigInt result = 1;
  for (std::int64_t i = 1; i <= m; ++i) {
    result *= (n - m + i);
    result /= i;  // exact: result is binom(n - m + i, i) at this point
  }
  return result;
}

double to_double(const BigRational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  const BigInt& den = boost::multiprecision::denominator(value);
  if (num == 0) return 0.0;
  bool negative = num < 0;
  if (negative) num = -num;
  // Scale so the integer quotient carries ~96 significant bits, then round.
  long shift = 96 - (static_cast<long>(boost::multiprecision::msb(num)) -
                     static_cast<long>(boost::multiprecision::msb(den)));
  BigInt scaled = shift >= 0 ? BigInt(num << shift) : BigInt(num >> -shift);
  BigInt q = scaled / den;
  double mag = std::ldexp(q.convert_to<double>(), static_cast<int>(-shift));
  return negative ? -mag : mag;
}

HypergeometricParams::HypergeometricParams(std::int64_t population_,
                                           std::int64_t successes_,
                                           std::int64_t draws_)
    : population(population_), successes(successes_), draws(draws_) {
  if (population < 0 || successes < 0 || successes > population || draws < 0 ||
      draws > population) {
    throw std::invalid_argument(
        "HypergeometricParams: need 0 <= successes, draws <= population");
  }
}

LogValue hypergeometric_pmf(const HypergeometricParams& p, std::int64_t i) {
  if (i < p.support_min() || i > p.support_max()) return LogValue::zero();
  return log_binomial(p.successes, i) *
         log_binomial(p.population - p.successes, p.draws - i) /
         log_binomial(p.population, p.draws);
}

BigRational hypergeometric_pmf_exact(const HypergeometricParams& p, std::int64_t i) {
  if (i < p.support_min() || i > p.support_max()) return 0;
  BigInt num = exact_binomial(p.successes, i) *
               exact_binomial(p.population - p.successes, p.draws - i);
  return BigRational(num, exact_binomial(p.population, p.draws));
}

Moments hypergeometric_moments(const HypergeometricParams& p) {
  if (p.population < 1) {
    throw std::invalid_argument("hypergeometric_moments: population must be >= 1");
  }
  double N = static_cast<double>(p.population);
  double m = static_cast<double>(p.successes);
  double n = static_cast<double>(p.draws);
  Moments out;
  out.mean = n * m / N;
  if (p.population > 1) {
    out.variance = n * m * (N - m) * (N - n) / (N * N * (N - 1.0));
  }
  return out;
}

std::vector<double> hypergeometric_pmf_table(const HypergeometricParams& p) {
  std::vector<double> out(static_cast<std::size_t>(p.draws) + 1, 0.0);
  const std::int64_t lo = p.support_min();
  const std::int64_t hi = p.support_max();
  const std::int64_t width = hi - lo + 1;

  // pmf(i+1)/pmf(i) = (m-i)(n-i) / ((i+1)(N-m-n+i+1)); all factors are
  // exactly representable, so each chained entry keeps ~1e-30 relative error.
  auto ratio_up = [&](std::int64_t i) {
    double num = static_cast<double>(p.successes - i) * static_cast<double>(p.draws - i);
    double den = static_cast<double>(i + 1) *
                 static_cast<double>(p.population - p.successes - p.draws + i + 1);
    return dd_div(DoubleDouble::from(num), DoubleDouble::from(den));
  };

  std::int64_t mode = lo;
  if (p.population + 2 > 0) {
    std::int64_t guess = ((p.draws + 1) * (p.successes + 1)) / (p.population + 2);
    mode = std::clamp(guess, lo, hi);
  }

  std::vector<DoubleDouble> vals(static_cast<std::size_t>(width));
  vals[mode - lo] = DoubleDouble::from(1.0);
  for (std::int64_t i = mode + 1; i <= hi; ++i) {
    vals[i - lo] = dd_mul(vals[i - 1 - lo], ratio_up(i - 1));
  }
  for (std::int64_t i = mode - 1; i >= lo; --i) {
    vals[i - lo] = dd_div(vals[i + 1 - lo], ratio_up(i));
  }

  DoubleDouble total{};
  for (const DoubleDouble& v : vals) total = dd_add(total, v);
  for (std::int64_t i = lo; i <= hi; ++i) {
    out[i] = dd_div(vals[i - lo], total).value();
  }
  return out;
}

ExactPmfTable hypergeometric_pmf_table_exact(const HypergeometricParams& p) {
  ExactPmfTable out;
  out.numerators.assign(static_cast<std::size_t>(p.draws) + 1, BigInt(0));
  out.denominator = exact_binomial(p.population, p.draws);
  const std::int64_t lo = p.support_min();
  const std::int64_t hi = p.support_max();
  BigInt left = exact_binomial(p.successes, lo);
  BigInt right = exact_binomial(p.population - p.successes, p.draws - lo);
  for (std::int64_t i = lo; i <= hi; ++i) {
    out.numerators[i] = left * right;
    if (i < hi) {
      left *= (p.successes - i);
      left /= (i + 1);
      right *= (p.draws - i);
      right /= (p.population - p.successes - p.draws + i + 1);
    }
  }
  return out;
}

}  // namespace knesermix
