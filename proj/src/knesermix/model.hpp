#pragma once

#include <cstdint>
#include <vector>

#include "knesermix/combinatorics.hpp"

namespace knesermix {

// Which projection of the walk a lumped chain tracks. Both live on
// {0, ..., n} and share the same transition law; they differ in the start
// state and in which fixed n-set the overlap is measured against.
enum class LumpKind {
  kStartOverlap,      // |X_t intersect X_0|, starts at n
  kReferenceOverlap,  // |X_t intersect {1..n}| with X_0 = {n+1..2n}, starts at 0
};

// Parameters (n, k) of the Kneser graph K(2n+k, n): vertices are the
// n-subsets of a (2n+k)-set, edges join disjoint subsets. k >= 1 keeps the
// walk aperiodic (k = 0 is bipartite), so it is rejected at construction.
class KneserParams {
 public:
  KneserParams(std::int64_t n, std::int64_t k);

  std::int64_t subset_size() const { return n_; }   // n
  std::int64_t excess() const { return k_; }        // k
  std::int64_t ground_size() const { return 2 * n_ + k_; }
  std::int64_t lump_state_count() const { return n_ + 1; }

  LogValue vertex_count_log() const;  // binom(2n+k, n)
  LogValue degree_log() const;        // binom(n+k, n)
  BigInt vertex_count_exact() const;
  BigInt degree_exact() const;

  double spectral_gap() const {
    return static_cast<double>(k_) / static_cast<double>(n_ + k_);
  }

  friend bool operator==(const KneserParams& a, const KneserParams& b) = default;

 private:
  std::int64_t n_;
  std::int64_t k_;
};

// t* = (1/2) log_{1+k/n}(2n+k), the center of the mixing transition.
double cutoff_time(const KneserParams& p);

struct SpectrumEntry {
  std::int64_t index = 0;            // i = 0..n
  SignedLog eigenvalue;              // transition eigenvalue, sign (-1)^i
  LogValue multiplicity;             // binom(2n+k,i) - binom(2n+k,i-1)
  BigInt multiplicity_exact;
  BigRational eigenvalue_exact;
  BigInt adjacency_eigenvalue_exact;  // signed binom(n+k-i, n-i)
};

class SpectrumTable {
 public:
  SpectrumTable(KneserParams params, std::vector<SpectrumEntry> entries)
      : params_(params), entries_(std::move(entries)) {}

  const KneserParams& params() const { return params_; }
  std::size_t size() const { return entries_.size(); }
  const SpectrumEntry& operator[](std::size_t i) const { return entries_[i]; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  KneserParams params_;
  std::vector<SpectrumEntry> entries_;
};

// The n+1 distinct eigenvalues of the walk's transition matrix with their
// multiplicities: lambda_i = (-1)^i binom(n+k-i, n-i)/binom(n+k, n).
SpectrumTable spectrum(const KneserParams& p);

// 1/binom(2n+k, n): the uniform stationary mass of a single vertex.
LogValue stationary_vertex_mass(const KneserParams& p);
BigRational stationary_vertex_mass_exact(const KneserParams& p);

// Stationary law of either lump; both are the hypergeometric H(2n+k, n, n)
// vector over {0..n}.
std::vector<double> stationary_lump(const KneserParams& p, LumpKind kind);
std::vector<BigRational> stationary_lump_exact(const KneserParams& p, LumpKind kind);

// Mean and variance of the overlap statistic under stationarity.
Moments stationary_statistic_moments(const KneserParams& p);

}  // namespace knesermix
