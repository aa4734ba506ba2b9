#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "knesermix/combinatorics.hpp"
#include "knesermix/numeric.hpp"
#include "knesermix/rng.hpp"

using namespace knesermix;

namespace {

// Ulp distance in the log domain, floored at the value-relative scale: a log
// difference of 2^-52 is one ulp of the represented value.
double ulps_apart(double a, double b) {
  if (a == b) return 0.0;
  double mag = std::max(std::abs(a), std::abs(b));
  double ulp = std::ldexp(1.0, -52);
  if (mag >= 1.0) ulp = std::ldexp(1.0, std::ilogb(mag) - 52);
  return std::abs(a - b) / ulp;
}

// Enumeration oracle: pmf of drawing i marked items, by walking all
// binom(N, n) draws.
BigRational pmf_by_enumeration(std::int64_t population, std::int64_t successes,
                               std::int64_t draws, std::int64_t want) {
  std::vector<std::int32_t> pick(static_cast<std::size_t>(draws));
  for (std::int64_t i = 0; i < draws; ++i) pick[i] = static_cast<std::int32_t>(i);
  BigInt hits = 0;
  BigInt total = 0;
  while (true) {
    ++total;
    std::int64_t marked = 0;
    for (std::int32_t v : pick) {
      if (v < successes) ++marked;
    }
    if (marked == want) ++hits;
    std::int64_t i = draws - 1;
    while (i >= 0 && pick[i] == population - draws + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (std::int64_t j = i + 1; j < draws; ++j) pick[j] = pick[j - 1] + 1;
  }
  return BigRational(hits, total);
}

}  // namespace

TEST_SUITE_BEGIN("combinatorics");

TEST_CASE("log-value arithmetic round-trips and handles zero") {
  CHECK(LogValue::zero().is_zero());
  CHECK(LogValue::zero().value() == 0.0);
  CHECK(LogValue::one().log() == 0.0);
  CHECK((LogValue::zero() + LogValue::from_value(2.5)).value() == doctest::Approx(2.5));
  CHECK((LogValue::from_value(3.0) * LogValue::from_value(4.0)).value() ==
        doctest::Approx(12.0));
  CHECK((LogValue::from_value(3.0) / LogValue::from_value(4.0)).value() ==
        doctest::Approx(0.75));
  CHECK((LogValue::zero() * LogValue::from_value(7.0)).is_zero());
  CHECK_THROWS_AS(LogValue::from_value(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(LogValue::one() / LogValue::zero(), std::domain_error);
}

TEST_CASE("log-value addition matches naive log(sum of exp) within 4 ulp") {
  Xoshiro256StarStar rng(20240817);
  for (int trial = 0; trial < 20000; ++trial) {
    double a = (rng.unit() * 2.0 - 1.0) * 300.0;
    double b = (rng.unit() * 2.0 - 1.0) * 300.0;
    double naive = std::log(std::exp(a) + std::exp(b));
    double got = (LogValue::from_log(a) + LogValue::from_log(b)).log();
    if (std::isfinite(naive)) {
      CHECK(ulps_apart(naive, got) <= 4.0);
    }
  }
}

TEST_CASE("log_sum_exp spans wide magnitude ranges") {
  std::vector<double> logs = {0.0, -700.0, -1400.0};
  CHECK(log_sum_exp(logs) == doctest::Approx(std::log(1.0 + 1e-304)).epsilon(1e-14));
  std::vector<double> empty;
  CHECK(log_sum_exp(empty) == -std::numeric_limits<double>::infinity());
  std::vector<double> same(1000, 1.0);
  CHECK(log_sum_exp(same) == doctest::Approx(1.0 + std::log(1000.0)));
}

TEST_CASE("exact binomial basics") {
  CHECK(exact_binomial(10, 5) == 252);
  CHECK(exact_binomial(6, 0) == 1);
  CHECK(exact_binomial(5, 7) == 0);
  CHECK(exact_binomial(5, -1) == 0);
  CHECK(exact_binomial(0, 0) == 1);
  // Cross-checked against the Pascal recurrence below; the literal is the
  // multiplicative-formula value.
  CHECK(exact_binomial(52, 26) == BigInt("495918532948104"));
}

TEST_CASE("Pascal identity holds exactly for all n <= 200") {
  std::vector<BigInt> prev = {1};
  for (std::int64_t n = 1; n <= 200; ++n) {
    std::vector<BigInt> row(static_cast<std::size_t>(n) + 1);
    row[0] = 1;
    row[n] = 1;
    for (std::int64_t r = 1; r < n; ++r) row[r] = prev[r - 1] + prev[r];
    for (std::int64_t r = 0; r <= n; ++r) {
      REQUIRE(exact_binomial(n, r) == row[r]);
    }
    prev = std::move(row);
  }
}

TEST_CASE("log_binomial: small values, out-of-range convention, big-int agreement") {
  CHECK(log_binomial(5, 2).log() == doctest::Approx(std::log(10.0)));
  CHECK(log_binomial(7, -1).is_zero());
  CHECK(log_binomial(7, 8).is_zero());
  CHECK(log_binomial(0, 0).log() == 0.0);

  double exact = to_double(BigRational(exact_binomial(1000, 500), 1));
  CHECK(std::abs(log_binomial(1000, 500).value() / exact - 1.0) <= 1e-12);
}

TEST_CASE("exp(log_binomial) matches exact_binomial to 1e-12 for n <= 300") {
  for (std::int64_t n = 0; n <= 300; ++n) {
    for (std::int64_t r = 0; r <= n; ++r) {
      double exact = to_double(BigRational(exact_binomial(n, r), 1));
      double logged = log_binomial(n, r).value();
      REQUIRE(std::abs(logged / exact - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("to_double rounds big rationals accurately") {
  CHECK(to_double(BigRational(1, 3)) == doctest::Approx(1.0 / 3.0).epsilon(1e-16));
  CHECK(to_double(BigRational(-7, 2)) == -3.5);
  CHECK(to_double(BigRational(0, 5)) == 0.0);
  BigInt big = exact_binomial(400, 200);
  CHECK(to_double(BigRational(big, big)) == 1.0);
  CHECK(to_double(BigRational(big * 3, big * 4)) == doctest::Approx(0.75).epsilon(1e-16));
}

TEST_CASE("hypergeometric pmf: enumeration oracle, off-support zeros") {
  HypergeometricParams p(5, 2, 2);
  CHECK(hypergeometric_pmf_exact(p, 1) == BigRational(6, 10));
  CHECK(hypergeometric_pmf_exact(p, 1) == pmf_by_enumeration(5, 2, 2, 1));
  CHECK(hypergeometric_pmf_exact(p, 0) == pmf_by_enumeration(5, 2, 2, 0));
  CHECK(hypergeometric_pmf_exact(p, 3) == 0);
  CHECK(hypergeometric_pmf(p, 3).is_zero());
  CHECK(hypergeometric_pmf(p, 1).value() == doctest::Approx(0.6).epsilon(1e-14));
  CHECK_THROWS_AS(HypergeometricParams(5, 6, 2), std::invalid_argument);
  CHECK_THROWS_AS(HypergeometricParams(5, 2, 6), std::invalid_argument);
}

TEST_CASE("hypergeometric pmf sums to one: exact identically, log within 1e-12") {
  Xoshiro256StarStar rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    std::int64_t population = 1 + static_cast<std::int64_t>(rng.below(400));
    std::int64_t successes = static_cast<std::int64_t>(rng.below(population + 1));
    std::int64_t draws = static_cast<std::int64_t>(rng.below(population + 1));
    HypergeometricParams p(population, successes, draws);

    BigRational exact_total = 0;
    CompensatedSum log_total;
    for (std::int64_t i = p.support_min(); i <= p.support_max(); ++i) {
      exact_total += hypergeometric_pmf_exact(p, i);
      log_total.add(hypergeometric_pmf(p, i).value());
    }
    REQUIRE(exact_total == 1);
    REQUIRE(std::abs(log_total.result() - 1.0) <= 1e-12);
  }
}

TEST_CASE("hypergeometric moments: closed form equals pmf-weighted sums") {
  SUBCASE("spec examples") {
    Moments m = hypergeometric_moments(HypergeometricParams(5, 2, 2));
    CHECK(m.mean == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(m.variance == doctest::Approx(9.0 / 25.0).epsilon(1e-15));

    Moments all = hypergeometric_moments(HypergeometricParams(4, 4, 2));
    CHECK(all.mean == 2.0);
    CHECK(all.variance == 0.0);

    CHECK(hypergeometric_moments(HypergeometricParams(1, 1, 1)).variance == 0.0);
    CHECK_THROWS_AS(hypergeometric_moments(HypergeometricParams(0, 0, 0)),
                    std::invalid_argument);
  }

  SUBCASE("property over random parameters up to N = 500") {
    Xoshiro256StarStar rng(99);
    for (int trial = 0; trial < 40; ++trial) {
      std::int64_t population = 2 + static_cast<std::int64_t>(rng.below(499));
      std::int64_t successes = static_cast<std::int64_t>(rng.below(population + 1));
      std::int64_t draws = static_cast<std::int64_t>(rng.below(population + 1));
      HypergeometricParams p(population, successes, draws);
      Moments closed = hypergeometric_moments(p);

      CompensatedSum mean_acc;
      for (std::int64_t i = p.support_min(); i <= p.support_max(); ++i) {
        mean_acc.add(hypergeometric_pmf(p, i).value() * static_cast<double>(i));
      }
      double mean = mean_acc.result();
      CompensatedSum var_acc;
      for (std::int64_t i = p.support_min(); i <= p.support_max(); ++i) {
        double dev = static_cast<double>(i) - mean;
        var_acc.add(hypergeometric_pmf(p, i).value() * dev * dev);
      }
      double variance = var_acc.result();
      REQUIRE(std::abs(closed.mean - mean) <=
              1e-12 * std::max(1.0, std::abs(mean)));
      REQUIRE(std::abs(closed.variance - variance) <=
              1e-12 * std::max(1.0, variance));
    }
  }
}

TEST_CASE("stationary statistic law has mean n^2/(2n+k)") {
  for (auto [n, k] : {std::pair<std::int64_t, std::int64_t>{2, 1}, {7, 3}, {40, 11}}) {
    HypergeometricParams p(2 * n + k, n, n);
    Moments m = hypergeometric_moments(p);
    CHECK(m.mean == doctest::Approx(static_cast<double>(n * n) /
                                    static_cast<double>(2 * n + k))
                        .epsilon(1e-14));
    double expected_var = static_cast<double>(n * n) * static_cast<double>((n + k) * (n + k)) /
                          (static_cast<double>((2 * n + k)) * static_cast<double>(2 * n + k) *
                           static_cast<double>(2 * n + k - 1));
    CHECK(m.variance == doctest::Approx(expected_var).epsilon(1e-12));
  }
}

TEST_CASE("pmf table matches the exact twin entrywise at full precision") {
  for (auto [N, m, n] : {std::tuple<std::int64_t, std::int64_t, std::int64_t>{5, 2, 2},
                         {11, 4, 7},
                         {201, 100, 100},
                         {1007, 500, 500}}) {
    HypergeometricParams p(N, m, n);
    std::vector<double> table = hypergeometric_pmf_table(p);
    ExactPmfTable exact = hypergeometric_pmf_table_exact(p);
    REQUIRE(table.size() == exact.numerators.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
      double reference = to_double(BigRational(exact.numerators[i], exact.denominator));
      if (reference == 0.0) {
        REQUIRE(table[i] == 0.0);
      } else {
        REQUIRE(std::abs(table[i] / reference - 1.0) <= 4e-16);
      }
    }
  }
}

TEST_CASE("double-double helpers agree with rational arithmetic") {
  Xoshiro256StarStar rng(1234);
  for (int trial = 0; trial < 2000; ++trial) {
    std::int64_t a = 1 + static_cast<std::int64_t>(rng.below(1 << 20));
    std::int64_t b = 1 + static_cast<std::int64_t>(rng.below(1 << 20));
    std::int64_t c = 1 + static_cast<std::int64_t>(rng.below(1 << 20));
    DoubleDouble x = dd_div(DoubleDouble::from(static_cast<double>(a)),
                            DoubleDouble::from(static_cast<double>(b)));
    DoubleDouble y = dd_mul(x, DoubleDouble::from(static_cast<double>(c)));
    DoubleDouble z = dd_add(y, DoubleDouble::from(static_cast<double>(a)));
    BigRational expected = BigRational(a, b) * c + a;
    double reference = to_double(expected);
    REQUIRE(std::abs(z.value() / reference - 1.0) <= 1e-29 * 4 + 4e-16);
  }
}

TEST_SUITE_END();
