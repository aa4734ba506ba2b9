#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "knesermix/model.hpp"

namespace knesermix {

class MassConservationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class MemoryLimitError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The walk projected onto an overlap count j in {0..n} is again Markov: the
// next set is a uniform n-subset of the (n+k)-element complement, which holds
// n-j of the tracked elements, so row j is the H(n+k, n-j, n) law,
//   P(j -> z) = binom(n-j, z) binom(j+k, n-z) / binom(n+k, n),
// supported on z in [max(0, n-j-k), n-j]. The reference-overlap projection
// has the identical matrix (its formula is the same expression in s, s'), so
// the two lump kinds share rows and differ only in start state.
//
// Rows are stored packed over their support (the row width is at most k+1,
// which makes small-k evolution O(nk) per step instead of O(n^2)); a
// streaming mode rebuilds rows on the fly when even that does not fit.
class LumpedKernel {
 public:
  explicit LumpedKernel(const KneserParams& params, LumpKind kind = LumpKind::kStartOverlap,
                        bool stream_rows = false);

  const KneserParams& params() const { return params_; }
  LumpKind kind() const { return kind_; }
  bool streams_rows() const { return stream_; }
  std::int64_t state_count() const { return params_.lump_state_count(); }
  std::int64_t initial_state() const {
    return kind_ == LumpKind::kStartOverlap ? params_.subset_size() : 0;
  }

  std::int64_t row_support_min(std::int64_t j) const {
    return std::max<std::int64_t>(0, params_.subset_size() - j - params_.excess());
  }
  std::int64_t row_support_max(std::int64_t j) const {
    return params_.subset_size() - j;
  }

  // Row j over its support [row_support_min(j), row_support_max(j)].
  std::span<const double> row(std::int64_t j) const;

  // Fills `out` (sized for the support) in streaming mode; in dense mode the
  // same values as row(j).
  void build_row(std::int64_t j, std::span<double> out) const;

  // Exact-rational twin of row j over the full state space 0..n.
  std::vector<BigRational> exact_row(std::int64_t j) const;

  // Packed bytes a dense kernel for `params` would need.
  static std::uint64_t dense_bytes(const KneserParams& params);
  // Dense kernels above this are refused; callers must opt into streaming.
  static constexpr std::uint64_t kDenseByteLimit = 1ull << 30;

 private:
  KneserParams params_;
  LumpKind kind_;
  bool stream_;
  std::vector<double> packed_;
  std::vector<std::size_t> offsets_;
};

// Law of the lump at a point in time: principal values plus the carried
// compensation from the error-free inner products, so mass stays exact to
// ~1e-15 over 1e4 steps without ever renormalizing.
struct LumpedDistribution {
  std::vector<double> mass;
  std::vector<double> carry;
  std::int64_t time_step = 0;
  double flushed = 0.0;  // total mass dropped by the underflow flush

  static LumpedDistribution point_mass(std::int64_t state_count, std::int64_t at);

  std::int64_t state_count() const { return static_cast<std::int64_t>(mass.size()); }
  double mass_at(std::int64_t s) const { return mass[s] + carry[s]; }
  double total() const;
};

struct MomentTrack {
  std::int64_t time = 0;
  double mean = 0.0;
  double variance = 0.0;
};

LumpedKernel build_kernel(const KneserParams& p, LumpKind kind,
                          bool stream_rows = false);

// One application of the kernel; asserts mass conservation to 1e-12 and
// flushes entries below 1e-320 into `flushed`.
void apply_kernel(const LumpedKernel& kernel, const LumpedDistribution& in,
                  LumpedDistribution& out);

LumpedDistribution evolve(const LumpedKernel& kernel, LumpedDistribution start,
                          std::int64_t steps);

// Exact-rational evolution for small instances (oracle cross-checks).
std::vector<BigRational> evolve_exact(const LumpedKernel& kernel,
                                      std::vector<BigRational> start,
                                      std::int64_t steps);

// Walks both lumped laws (start-overlap from j = n, reference-overlap from
// s = 0) in lockstep and exposes the per-time quantities every consumer
// needs: exact d(t), overlap-statistic moments, and the projected TV of the
// reference lump.
class ProfileEngine {
 public:
  explicit ProfileEngine(const KneserParams& p, bool stream_rows = false);

  const KneserParams& params() const { return params_; }
  std::int64_t time() const { return overlap_.time_step; }
  void step();
  void advance_to(std::int64_t t);

  // d(t) = (1/2) sum_j |mu_t(j) - pi(j)|; equals the vertex-level worst-case
  // TV because the stabilizer of X_0 acts transitively on each overlap class.
  double tv_to_stationary() const;
  MomentTrack statistic_moments() const;
  double statistic_tv() const;  // TV of the reference lump; <= tv_to_stationary()
  double flushed_mass() const { return overlap_.flushed + statistic_.flushed; }

  const LumpedDistribution& overlap_law() const { return overlap_; }
  const LumpedDistribution& statistic_law() const { return statistic_; }
  const std::vector<double>& stationary() const { return stationary_; }

 private:
  KneserParams params_;
  LumpedKernel kernel_;
  LumpedDistribution overlap_;
  LumpedDistribution statistic_;
  LumpedDistribution scratch_;
  std::vector<double> stationary_;
};

// d(t) for t = 0..t_max via the start-overlap lump.
std::vector<std::pair<std::int64_t, double>> exact_tv_profile(const KneserParams& p,
                                                              std::int64_t t_max);

// Exact mean/variance of the overlap statistic for t = 0..t_max.
std::vector<MomentTrack> f_moments(const KneserParams& p, std::int64_t t_max);

// Closed-form E[f_t] = n^2/(2n+k) + (-1)^{t+1} n(n+k)/(2n+k) (n/(n+k))^{t+1}.
double statistic_mean_closed_form(const KneserParams& p, std::int64_t t);

}  // namespace knesermix
