#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "knesermix/model.hpp"

namespace knesermix {

class SizeLimitError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fully enumerated chain for tiny (n, k): every n-subset as a vertex in
// lexicographic order, adjacency by disjointness, and exact rational
// transition entries 1/binom(n+k, n). Powers are walked on the integer
// adjacency matrix (common denominator degree^t), which keeps the rational
// arithmetic to a single reduction per reported value.
class FullChain {
 public:
  static constexpr std::int64_t kMaxVertices = 5000;

  explicit FullChain(const KneserParams& params);

  const KneserParams& params() const { return params_; }
  std::int64_t vertex_count() const { return static_cast<std::int64_t>(neighbors_.size()); }
  std::int64_t degree() const { return degree_; }

  std::span<const std::int32_t> vertex(std::int64_t index) const;
  std::span<const std::int32_t> neighbors(std::int64_t index) const {
    return neighbors_[index];
  }
  bool adjacent(std::int64_t a, std::int64_t b) const;
  BigRational transition_entry(std::int64_t a, std::int64_t b) const;

  std::int64_t rank_of(std::span<const std::int32_t> subset) const;

 private:
  KneserParams params_;
  std::int64_t degree_ = 0;
  std::vector<std::int32_t> vertex_elements_;  // flattened, n per vertex
  std::vector<std::vector<std::int32_t>> neighbors_;
};

// Combinatorial number system: lexicographic rank of a sorted r-subset of
// {1..m}, and back.
std::int64_t subset_lex_rank(std::int64_t m, std::span<const std::int32_t> subset);
std::vector<std::int32_t> subset_lex_unrank(std::int64_t m, std::int64_t r,
                                            std::int64_t rank);

// Walks A^t row by row; entries over the common denominator degree^t.
class ExactPowerWalk {
 public:
  explicit ExactPowerWalk(const FullChain& chain);

  std::int64_t time() const { return t_; }
  const BigInt& denominator() const { return denom_; }  // degree^t
  const BigInt& entry(std::int64_t row, std::int64_t col) const {
    return matrix_[static_cast<std::size_t>(row) * n_ + static_cast<std::size_t>(col)];
  }
  void step();

 private:
  const FullChain& chain_;
  std::size_t n_;
  std::int64_t t_ = 0;
  BigInt denom_ = 1;
  std::vector<BigInt> matrix_;
  std::vector<BigInt> scratch_;
};

struct TvPoint {
  std::int64_t t = 0;
  BigRational d;
};

// Exact d(t) for t = 0..t_max from rational matrix powers; verifies along the
// way that every start vertex gives the same TV value (transitivity) and
// throws std::logic_error otherwise.
std::vector<TvPoint> oracle_tv(const FullChain& chain, std::int64_t t_max);

// Exact law of the overlap class at time t, by pushing the full chain's law
// through B -> |B intersect R|, where R = {1..n} and the start vertex is
// {1..n} (start-overlap) or {n+1..2n} (reference-overlap).
std::vector<BigRational> lump_pushforward(const FullChain& chain, LumpKind kind,
                                          std::int64_t t);

struct SpectrumCertification {
  std::vector<std::pair<std::int64_t, bool>> per_power;  // (m, trace identity holds)
  bool all_pass = true;
};

// Checks trace(A^m) = sum_i mult_i * (adjacency eigenvalue_i)^m exactly for
// m = 0..m_max (m_max <= 8).
SpectrumCertification certify_spectrum(const FullChain& chain,
                                       const SpectrumTable& table,
                                       std::int64_t m_max);

}  // namespace knesermix
