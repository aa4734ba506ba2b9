#pragma once

#include <cstdint>
#include <vector>

#include "knesermix/combinatorics.hpp"
#include "knesermix/model.hpp"
#include "knesermix/rng.hpp"

namespace knesermix {

// Worker count for parallel sections: KNESER_MIX_THREADS when set (>= 1),
// otherwise the hardware concurrency.
int worker_count();

enum class SimMode {
  kExplicit,  // walk actual n-subsets
  kLumped,    // walk the overlap statistic via hypergeometric sampling
};

struct SimConfig {
  KneserParams params;
  std::int64_t walks = 0;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  SimMode mode = SimMode::kLumped;
  int threads = 0;  // 0 = worker_count()

  SimConfig(KneserParams p, std::int64_t walks, std::int64_t horizon,
            std::uint64_t seed, SimMode mode, int threads = 0);
};

struct WalkState {
  std::vector<std::int32_t> current_set;  // sorted, explicit mode
  std::int64_t lump_value = 0;            // overlap statistic
  std::int64_t time = 0;
};

// Start state X_0 = {n+1, ..., 2n}: disjoint from the reference block {1..n}.
WalkState initial_walk_state(const KneserParams& p, SimMode mode);

// One step of the explicit walk: a uniform n-subset of the complement of the
// current set, via partial Fisher-Yates over the n+k complement elements.
void step_explicit(WalkState& state, const KneserParams& p, Xoshiro256StarStar& rng);

// Inverse-CDF sampler over a precomputed pmf table.
class HypergeometricSampler {
 public:
  explicit HypergeometricSampler(const HypergeometricParams& p);
  std::int64_t sample(Xoshiro256StarStar& rng) const;

 private:
  std::int64_t lo_ = 0;
  std::vector<double> cdf_;  // over the support
};

std::int64_t sample_hypergeometric(const HypergeometricParams& p,
                                   Xoshiro256StarStar& rng);

struct MomentEstimate {
  std::int64_t time = 0;
  double mean = 0.0;
  double variance = 0.0;
  double std_error = 0.0;  // standard error of the mean
};

// Sample mean/variance of the overlap statistic per time step across
// cfg.walks independent walks. Deterministic for a fixed config: per-walk
// substreams plus block-ordered reduction make the result independent of the
// thread count.
std::vector<MomentEstimate> estimate_f_moments(const SimConfig& cfg);

}  // namespace knesermix
