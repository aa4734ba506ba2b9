#include <doctest.h>

#include <cmath>

#include "knesermix/engine.hpp"
#include "knesermix/model.hpp"
#include "knesermix/oracle.hpp"

using namespace knesermix;

TEST_SUITE_BEGIN("oracle");

TEST_CASE("full chain construction: Petersen, K4, odd graph O4") {
  FullChain petersen((KneserParams(2, 1)));
  CHECK(petersen.vertex_count() == 10);
  CHECK(petersen.degree() == 3);

  FullChain k4((KneserParams(1, 2)));
  CHECK(k4.vertex_count() == 4);
  CHECK(k4.degree() == 3);
  // 1-subsets are disjoint iff distinct: complete graph, 1/3 off-diagonal.
  for (std::int64_t a = 0; a < 4; ++a) {
    for (std::int64_t b = 0; b < 4; ++b) {
      CHECK(k4.transition_entry(a, b) == (a == b ? BigRational(0) : BigRational(1, 3)));
    }
  }

  FullChain o4((KneserParams(3, 1)));
  CHECK(o4.vertex_count() == 35);
  CHECK(o4.degree() == 4);
}

TEST_CASE("row sums are exactly one and the matrix is symmetric") {
  for (auto [n, k] : {std::pair<std::int64_t, std::int64_t>{2, 1}, {2, 2}, {3, 2}}) {
    FullChain chain((KneserParams(n, k)));
    for (std::int64_t a = 0; a < chain.vertex_count(); ++a) {
      BigRational row_sum = 0;
      for (std::int64_t b = 0; b < chain.vertex_count(); ++b) {
        row_sum += chain.transition_entry(a, b);
        CHECK(chain.transition_entry(a, b) == chain.transition_entry(b, a));
      }
      REQUIRE(row_sum == 1);
    }
  }
}

TEST_CASE("size limit is enforced") {
  CHECK_THROWS_AS(FullChain((KneserParams(10, 1))), SizeLimitError);  // binom(21,10)
}

TEST_CASE("subset ranking and unranking invert each other in lex order") {
  FullChain chain((KneserParams(3, 2)));
  for (std::int64_t idx = 0; idx < chain.vertex_count(); ++idx) {
    auto v = chain.vertex(idx);
    CHECK(chain.rank_of(v) == idx);
    std::vector<std::int32_t> expect(v.begin(), v.end());
    CHECK(subset_lex_unrank(8, 3, idx) == expect);
  }
}

TEST_CASE("oracle TV: pinned rational values") {
  FullChain petersen((KneserParams(2, 1)));
  std::vector<TvPoint> tv = oracle_tv(petersen, 1);
  CHECK(tv[0].d == BigRational(9, 10));
  CHECK(tv[1].d == BigRational(7, 10));

  FullChain k4((KneserParams(1, 2)));
  std::vector<TvPoint> tv4 = oracle_tv(k4, 1);
  CHECK(tv4[0].d == BigRational(3, 4));
  // One-step law (0, 1/3, 1/3, 1/3) vs uniform 1/4 has TV exactly 1/4.
  CHECK(tv4[1].d == BigRational(1, 4));
}

TEST_CASE("oracle TV equals the engine profile within 1e-10") {
  for (auto [n, k] : {std::pair<std::int64_t, std::int64_t>{1, 1}, {2, 1}, {2, 2}, {3, 2}}) {
    KneserParams p(n, k);
    FullChain chain(p);
    std::vector<TvPoint> exact = oracle_tv(chain, 30);
    auto engine = exact_tv_profile(p, 30);
    for (std::size_t t = 0; t < exact.size(); ++t) {
      REQUIRE(std::abs(engine[t].second - to_double(exact[t].d)) <= 1e-10);
    }
  }
}

TEST_CASE("lump pushforward equals the exact engine law, rationally") {
  for (auto [n, k] : {std::pair<std::int64_t, std::int64_t>{2, 1}, {3, 2}}) {
    KneserParams p(n, k);
    FullChain chain(p);

    for (LumpKind kind : {LumpKind::kStartOverlap, LumpKind::kReferenceOverlap}) {
      LumpedKernel kernel(p, kind);
      std::vector<BigRational> law(static_cast<std::size_t>(p.lump_state_count()),
                                   BigRational(0));
      law[static_cast<std::size_t>(kernel.initial_state())] = 1;
      for (std::int64_t t = 0; t <= 12; ++t) {
        std::vector<BigRational> pushed = lump_pushforward(chain, kind, t);
        REQUIRE(pushed == law);
        law = evolve_exact(kernel, std::move(law), 1);
      }
    }
  }
}

TEST_CASE("trace identities certify the spectrum") {
  SUBCASE("Petersen hand values") {
    KneserParams p(2, 1);
    FullChain chain(p);
    SpectrumTable table = spectrum(p);
    SpectrumCertification cert = certify_spectrum(chain, table, 6);
    CHECK(cert.all_pass);
    REQUIRE(cert.per_power.size() == 7);
    for (const auto& [m, ok] : cert.per_power) CHECK(ok);

    // m = 0: 10 = 1 + 4 + 5; m = 1: zero diagonal; m = 2: closed walks 10*3.
    ExactPowerWalk walk(chain);
    BigInt tr0 = 0, tr1 = 0, tr2 = 0;
    for (int i = 0; i < 10; ++i) tr0 += walk.entry(i, i);
    walk.step();
    for (int i = 0; i < 10; ++i) tr1 += walk.entry(i, i);
    walk.step();
    for (int i = 0; i < 10; ++i) tr2 += walk.entry(i, i);
    CHECK(tr0 == 10);
    CHECK(tr1 == 0);
    CHECK(tr2 == 30);  // trace(A^2) = sum of degrees
  }

  SUBCASE("all tiny instances") {
    for (auto [n, k] : {std::pair<std::int64_t, std::int64_t>{1, 1}, {1, 2}, {2, 1},
                        {2, 2}, {3, 1}, {3, 2}}) {
      KneserParams p(n, k);
      FullChain chain(p);
      CHECK(certify_spectrum(chain, spectrum(p), 6).all_pass);
    }
  }

  SUBCASE("a corrupted table fails") {
    KneserParams p(2, 1);
    FullChain chain(p);
    SpectrumTable good = spectrum(p);
    std::vector<SpectrumEntry> entries(good.begin(), good.end());
    entries[1].multiplicity_exact += 1;
    SpectrumTable bad(p, std::move(entries));
    CHECK_FALSE(certify_spectrum(chain, bad, 4).all_pass);
  }
}

TEST_CASE("oracle_tv rejects long horizons") {
  FullChain chain((KneserParams(1, 1)));
  CHECK_THROWS_AS(oracle_tv(chain, 201), std::invalid_argument);
}

TEST_SUITE_END();
