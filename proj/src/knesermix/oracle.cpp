#include "knesermix/oracle.hpp"

#include <algorithm>
#include <string>

namespace knesermix {

namespace {

// All r-subsets of {1..m} in lexicographic order, flattened.
std::vector<std::int32_t> enumerate_subsets(std::int64_t m, std::int64_t r) {
  std::vector<std::int32_t> flat;
  std::vector<std::int32_t> cur(static_cast<std::size_t>(r));
  for (std::int64_t i = 0; i < r; ++i) cur[i] = static_cast<std::int32_t>(i + 1);
  while (true) {
    flat.insert(flat.end(), cur.begin(), cur.end());
    std::int64_t i = r - 1;
    while (i >= 0 && cur[i] == m - r + i + 1) --i;
    if (i < 0) break;
    ++cur[i];
    for (std::int64_t j = i + 1; j < r; ++j) cur[j] = cur[j - 1] + 1;
  }
  return flat;
}

bool disjoint(std::span<const std::int32_t> a, std::span<const std::int32_t> b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    if (a[i] < b[j]) ++i;
    else ++j;
  }
  return true;
}

std::int64_t overlap_count(std::span<const std::int32_t> a,
                           std::span<const std::int32_t> b) {
  std::int64_t count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++count;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return count;
}

}  // namespace

FullChain::FullChain(const KneserParams& params) : params_(params) {
  BigInt count = params.vertex_count_exact();
  if (count > kMaxVertices) {
    throw SizeLimitError("FullChain: binom(" + std::to_string(params.ground_size()) +
                         ", " + std::to_string(params.subset_size()) + ") = " +
                         count.str() + " exceeds the limit of " +
                         std::to_string(kMaxVertices) + " vertices");
  }
  const std::int64_t v = count.convert_to<std::int64_t>();
  const std::int64_t n = params.subset_size();
  vertex_elements_ = enumerate_subsets(params.ground_size(), n);

  neighbors_.resize(static_cast<std::size_t>(v));
  for (std::int64_t a = 0; a < v; ++a) {
    for (std::int64_t b = a + 1; b < v; ++b) {
      if (disjoint(vertex(a), vertex(b))) {
        neighbors_[a].push_back(static_cast<std::int32_t>(b));
        neighbors_[b].push_back(static_cast<std::int32_t>(a));
      }
    }
  }
  degree_ = params.degree_exact().convert_to<std::int64_t>();
  for (const auto& adj : neighbors_) {
    if (static_cast<std::int64_t>(adj.size()) != degree_) {
      throw std::logic_error("FullChain: vertex degree mismatch");
    }
  }
}

std::span<const std::int32_t> FullChain::vertex(std::int64_t index) const {
  const std::size_t n = static_cast<std::size_t>(params_.subset_size());
  return std::span<const std::int32_t>(vertex_elements_).subspan(
      static_cast<std::size_t>(index) * n, n);
}

bool FullChain::adjacent(std::int64_t a, std::int64_t b) const {
  return disjoint(vertex(a), vertex(b));
}

BigRational FullChain::transition_entry(std::int64_t a, std::int64_t b) const {
  if (!adjacent(a, b)) return 0;
  return BigRational(1, degree_);
}

std::int64_t FullChain::rank_of(std::span<const std::int32_t> subset) const {
  return subset_lex_rank(params_.ground_size(), subset);
}

std::int64_t subset_lex_rank(std::int64_t m, std::span<const std::int32_t> subset) {
  // Count the subsets that precede lexicographically: for position i with
  // value v, any choice in (prev, v) at position i keeps the prefix smaller.
  const std::int64_t r = static_cast<std::int64_t>(subset.size());
  std::int64_t rank = 0;
  std::int32_t prev = 0;
  for (std::int64_t i = 0; i < r; ++i) {
    for (std::int32_t v = prev + 1; v < subset[i]; ++v) {
      rank += exact_binomial(m - v, r - i - 1).convert_to<std::int64_t>();
    }
    prev = subset[i];
  }
  return rank;
}

std::vector<std::int32_t> subset_lex_unrank(std::int64_t m, std::int64_t r,
                                            std::int64_t rank) {
  std::vector<std::int32_t> out;
  out.reserve(static_cast<std::size_t>(r));
  std::int32_t v = 1;
  for (std::int64_t i = 0; i < r; ++i) {
    while (true) {
      std::int64_t block = exact_binomial(m - v, r - i - 1).convert_to<std::int64_t>();
      if (rank < block) break;
      rank -= block;
      ++v;
    }
    out.push_back(v);
    ++v;
  }
  return out;
}

ExactPowerWalk::ExactPowerWalk(const FullChain& chain)
    : chain_(chain), n_(static_cast<std::size_t>(chain.vertex_count())) {
  matrix_.assign(n_ * n_, BigInt(0));
  for (std::size_t i = 0; i < n_; ++i) matrix_[i * n_ + i] = 1;
  scratch_.assign(n_ * n_, BigInt(0));
}

void ExactPowerWalk::step() {
  // (M A)(i, j) = sum over neighbors l of j of M(i, l); A is 0/1 symmetric.
  for (std::size_t i = 0; i < n_; ++i) {
    const BigInt* row = &matrix_[i * n_];
    BigInt* out = &scratch_[i * n_];
    for (std::size_t j = 0; j < n_; ++j) {
      BigInt acc = 0;
      for (std::int32_t l : chain_.neighbors(static_cast<std::int64_t>(j))) {
        acc += row[static_cast<std::size_t>(l)];
      }
      out[j] = std::move(acc);
    }
  }
  matrix_.swap(scratch_);
  denom_ *= chain_.degree();
  ++t_;
}

std::vector<TvPoint> oracle_tv(const FullChain& chain, std::int64_t t_max) {
  if (t_max > 200) {
    throw std::invalid_argument("oracle_tv: t_max must be <= 200");
  }
  const std::int64_t v = chain.vertex_count();
  ExactPowerWalk walk(chain);
  std::vector<TvPoint> out;
  out.reserve(static_cast<std::size_t>(t_max) + 1);
  for (std::int64_t t = 0; t <= t_max; ++t) {
    BigInt first_sum = -1;
    for (std::int64_t row = 0; row < v; ++row) {
      BigInt sum = 0;
      for (std::int64_t col = 0; col < v; ++col) {
        BigInt diff = v * walk.entry(row, col) - walk.denominator();
        sum += diff < 0 ? BigInt(-diff) : diff;
      }
      if (row == 0) {
        first_sum = sum;
      } else if (sum != first_sum) {
        throw std::logic_error("oracle_tv: TV differs across start vertices");
      }
    }
    out.push_back({t, BigRational(first_sum, 2 * v * walk.denominator())});
    if (t < t_max) walk.step();
  }
  return out;
}

std::vector<BigRational> lump_pushforward(const FullChain& chain, LumpKind kind,
                                          std::int64_t t) {
  const KneserParams& p = chain.params();
  const std::int64_t n = p.subset_size();
  const std::int64_t v = chain.vertex_count();

  std::vector<std::int32_t> reference(static_cast<std::size_t>(n));
  std::vector<std::int32_t> start_set(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    reference[i] = static_cast<std::int32_t>(i + 1);
    start_set[i] = kind == LumpKind::kStartOverlap
                       ? static_cast<std::int32_t>(i + 1)
                       : static_cast<std::int32_t>(n + i + 1);
  }
  const std::int64_t start = chain.rank_of(start_set);

  // Evolve only the start row: nu' = nu A over the common denominator.
  std::vector<BigInt> law(static_cast<std::size_t>(v), BigInt(0));
  law[static_cast<std::size_t>(start)] = 1;
  BigInt denom = 1;
  std::vector<BigInt> next(static_cast<std::size_t>(v));
  for (std::int64_t step = 0; step < t; ++step) {
    for (std::int64_t j = 0; j < v; ++j) {
      BigInt acc = 0;
      for (std::int32_t l : chain.neighbors(j)) acc += law[static_cast<std::size_t>(l)];
      next[static_cast<std::size_t>(j)] = std::move(acc);
    }
    law.swap(next);
    denom *= chain.degree();
  }

  std::vector<BigRational> out(static_cast<std::size_t>(n) + 1, BigRational(0));
  std::vector<BigInt> class_sums(static_cast<std::size_t>(n) + 1, BigInt(0));
  for (std::int64_t b = 0; b < v; ++b) {
    std::int64_t cls = overlap_count(chain.vertex(b), reference);
    class_sums[static_cast<std::size_t>(cls)] += law[static_cast<std::size_t>(b)];
  }
  for (std::int64_t cls = 0; cls <= n; ++cls) {
    out[static_cast<std::size_t>(cls)] =
        BigRational(class_sums[static_cast<std::size_t>(cls)], denom);
  }
  return out;
}

SpectrumCertification certify_spectrum(const FullChain& chain,
                                       const SpectrumTable& table,
                                       std::int64_t m_max) {
  if (m_max > 8) {
    throw std::invalid_argument("certify_spectrum: m_max must be <= 8");
  }
  SpectrumCertification out;
  ExactPowerWalk walk(chain);
  for (std::int64_t m = 0; m <= m_max; ++m) {
    BigInt trace = 0;
    for (std::int64_t i = 0; i < chain.vertex_count(); ++i) trace += walk.entry(i, i);
    BigInt expected = 0;
    for (const SpectrumEntry& e : table) {
      BigInt power = 1;
      for (std::int64_t j = 0; j < m; ++j) power *= e.adjacency_eigenvalue_exact;
      expected += e.multiplicity_exact * power;
    }
    bool pass = trace == expected;
    out.per_power.emplace_back(m, pass);
    out.all_pass = out.all_pass && pass;
    if (m < m_max) walk.step();
  }
  return out;
}

}  // namespace knesermix
