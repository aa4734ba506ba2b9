#include <doctest.h>

#include <cmath>

#include "knesermix/model.hpp"
#include "knesermix/numeric.hpp"
#include "knesermix/oracle.hpp"

using namespace knesermix;

TEST_SUITE_BEGIN("model");

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(KneserParams(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(KneserParams(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(KneserParams(-3, 2), std::invalid_argument);
  KneserParams p(2, 1);
  CHECK(p.ground_size() == 5);
  CHECK(p.vertex_count_exact() == 10);
  CHECK(p.degree_exact() == 3);
  CHECK(p.vertex_count_log().value() == doctest::Approx(10.0));
  CHECK(p.spectral_gap() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("degenerate n = 1 gives the complete graph K_{2+k}") {
  KneserParams p(1, 3);
  CHECK(p.vertex_count_exact() == 5);
  CHECK(p.degree_exact() == 4);
  SpectrumTable table = spectrum(p);
  REQUIRE(table.size() == 2);
  CHECK(table[1].eigenvalue.value() == doctest::Approx(-0.25));
  CHECK(table[1].multiplicity_exact == 4);
}

TEST_CASE("spectrum: Petersen and triangle") {
  SUBCASE("K(5,2) = Petersen; transition spectrum from the adjacency one / 3") {
    SpectrumTable table = spectrum(KneserParams(2, 1));
    REQUIRE(table.size() == 3);
    CHECK(table[0].eigenvalue_exact == 1);
    CHECK(table[0].multiplicity_exact == 1);
    CHECK(table[1].eigenvalue_exact == BigRational(-2, 3));
    CHECK(table[1].multiplicity_exact == 4);
    CHECK(table[2].eigenvalue_exact == BigRational(1, 3));
    CHECK(table[2].multiplicity_exact == 5);
    // Adjacency eigenvalues 3, -2, 1 recovered by scaling with the degree.
    CHECK(table[0].adjacency_eigenvalue_exact == 3);
    CHECK(table[1].adjacency_eigenvalue_exact == -2);
    CHECK(table[2].adjacency_eigenvalue_exact == 1);
  }

  SUBCASE("K(3,1) = triangle") {
    SpectrumTable table = spectrum(KneserParams(1, 1));
    REQUIRE(table.size() == 2);
    CHECK(table[0].eigenvalue_exact == 1);
    CHECK(table[0].multiplicity_exact == 1);
    CHECK(table[1].eigenvalue_exact == BigRational(-1, 2));
    CHECK(table[1].multiplicity_exact == 2);
  }
}

TEST_CASE("spectrum invariants across a parameter grid") {
  for (auto [n, k] : {std::pair<std::int64_t, std::int64_t>{1, 1}, {2, 1}, {3, 2},
                      {5, 5}, {40, 3}, {17, 60}, {300, 2}}) {
    KneserParams p(n, k);
    SpectrumTable table = spectrum(p);
    REQUIRE(static_cast<std::int64_t>(table.size()) == n + 1);

    // i = 0 entry is always eigenvalue 1 with multiplicity 1.
    CHECK(table[0].eigenvalue.sign == 1);
    CHECK(table[0].eigenvalue.magnitude.log() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(table[0].multiplicity_exact == 1);

    BigInt mult_total = 0;
    double prev_mag = 2.0;
    double log_ratio = std::log(static_cast<double>(n) / static_cast<double>(n + k));
    for (const SpectrumEntry& e : table) {
      CHECK(e.eigenvalue.sign == ((e.index % 2 == 0) ? 1 : -1));
      // |lambda_i| <= (n/(n+k))^i, the geometric envelope of the proofs.
      CHECK(e.eigenvalue.magnitude.log() <=
            static_cast<double>(e.index) * log_ratio + 1e-12);
      CHECK(e.eigenvalue.magnitude.log() < prev_mag);  // strictly decreasing
      prev_mag = e.eigenvalue.magnitude.log();
      mult_total += e.multiplicity_exact;
      CHECK(std::abs(e.multiplicity.value() /
                         to_double(BigRational(e.multiplicity_exact, 1)) -
                     1.0) <= 1e-12);
    }
    // Telescoping: multiplicities sum to the vertex count, exactly.
    CHECK(mult_total == p.vertex_count_exact());
  }
}

TEST_CASE("stationary vertex mass") {
  CHECK(stationary_vertex_mass_exact(KneserParams(2, 1)) == BigRational(1, 10));
  CHECK(stationary_vertex_mass_exact(KneserParams(1, 2)) == BigRational(1, 4));
  CHECK(stationary_vertex_mass_exact(KneserParams(3, 1)) == BigRational(1, 35));
  CHECK(stationary_vertex_mass(KneserParams(3, 1)).value() ==
        doctest::Approx(1.0 / 35.0).epsilon(1e-14));
}

TEST_CASE("stationary lump: Petersen enumeration oracle and hypergeometric shape") {
  KneserParams p(2, 1);

  // Enumeration oracle: classify all 10 vertices by overlap with {1, 2}.
  FullChain chain(p);
  std::vector<std::int32_t> reference = {1, 2};
  std::vector<int> counts(3, 0);
  for (std::int64_t v = 0; v < chain.vertex_count(); ++v) {
    auto subset = chain.vertex(v);
    int overlap = 0;
    for (std::int32_t x : subset) {
      if (x == 1 || x == 2) ++overlap;
    }
    counts[overlap] += 1;
  }
  REQUIRE(counts == std::vector<int>{3, 6, 1});

  std::vector<double> lump = stationary_lump(p, LumpKind::kStartOverlap);
  REQUIRE(lump.size() == 3);
  CHECK(lump[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(lump[1] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(lump[2] == doctest::Approx(0.1).epsilon(1e-15));

  // Both lump kinds carry the same H(5, 2, 2) law.
  CHECK(stationary_lump(p, LumpKind::kReferenceOverlap) == lump);
  std::vector<BigRational> exact = stationary_lump_exact(p, LumpKind::kStartOverlap);
  CHECK(exact == std::vector<BigRational>{BigRational(3, 10), BigRational(6, 10),
                                          BigRational(1, 10)});
}

TEST_CASE("stationary lump sums to one and matches the statistic moments") {
  for (auto [n, k] : {std::pair<std::int64_t, std::int64_t>{2, 1}, {9, 4}, {80, 7}}) {
    KneserParams p(n, k);
    std::vector<double> lump = stationary_lump(p, LumpKind::kReferenceOverlap);
    CompensatedSum total;
    CompensatedSum mean;
    for (std::size_t s = 0; s < lump.size(); ++s) {
      total.add(lump[s]);
      mean.add(lump[s] * static_cast<double>(s));
    }
    CHECK(std::abs(total.result() - 1.0) <= 1e-12);
    Moments m = stationary_statistic_moments(p);
    CHECK(mean.result() == doctest::Approx(m.mean).epsilon(1e-12));
    CHECK(m.mean == doctest::Approx(static_cast<double>(n * n) /
                                    static_cast<double>(2 * n + k))
                        .epsilon(1e-14));
  }
}

TEST_CASE("cutoff time t*") {
  KneserParams p(100, 1);
  CHECK(cutoff_time(p) ==
        doctest::Approx(0.5 * std::log(201.0) / std::log(1.01)).epsilon(1e-12));
  // Half a log of the vertex-count scale for k = n.
  KneserParams q(50, 50);
  CHECK(cutoff_time(q) == doctest::Approx(0.5 * std::log2(150.0)).epsilon(1e-12));
}

TEST_SUITE_END();
