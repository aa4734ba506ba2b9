#include "knesermix/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "knesermix/numeric.hpp"

namespace knesermix {

int worker_count() {
  if (const char* env = std::getenv("KNESER_MIX_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<int>(std::min(v, 1024L));
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

SimConfig::SimConfig(KneserParams p, std::int64_t walks_, std::int64_t horizon_,
                     std::uint64_t seed_, SimMode mode_, int threads_)
    : params(p), walks(walks_), horizon(horizon_), seed(seed_), mode(mode_),
      threads(threads_) {
  if (walks < 1) throw std::invalid_argument("SimConfig: walks must be >= 1");
  if (horizon < 0) throw std::invalid_argument("SimConfig: horizon must be >= 0");
  if (threads < 0) throw std::invalid_argument("SimConfig: threads must be >= 0");
}

WalkState initial_walk_state(const KneserParams& p, SimMode mode) {
  WalkState state;
  state.lump_value = 0;
  state.time = 0;
  if (mode == SimMode::kExplicit) {
    const std::int64_t n = p.subset_size();
    state.current_set.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
      state.current_set[i] = static_cast<std::int32_t>(n + i + 1);
    }
  }
  return state;
}

void step_explicit(WalkState& state, const KneserParams& p,
                   Xoshiro256StarStar& rng) {
  const std::int64_t n = p.subset_size();
  const std::int64_t ground = p.ground_size();
  const std::size_t comp_size = static_cast<std::size_t>(ground - n);

  // Complement of the sorted current set.
  std::vector<std::int32_t> comp;
  comp.reserve(comp_size);
  std::size_t idx = 0;
  for (std::int32_t v = 1; v <= ground; ++v) {
    if (idx < state.current_set.size() && state.current_set[idx] == v) {
      ++idx;
      continue;
    }
    comp.push_back(v);
  }

  // Partial Fisher-Yates: the first n entries become the next set.
  for (std::int64_t i = 0; i < n; ++i) {
    std::uint64_t j = i + rng.below(comp_size - static_cast<std::uint64_t>(i));
    std::swap(comp[static_cast<std::size_t>(i)], comp[static_cast<std::size_t>(j)]);
  }
  comp.resize(static_cast<std::size_t>(n));
  std::sort(comp.begin(), comp.end());
  state.current_set = std::move(comp);

  state.lump_value = static_cast<std::int64_t>(
      std::count_if(state.current_set.begin(), state.current_set.end(),
                    [n](std::int32_t v) { return v <= n; }));
  ++state.time;
}

HypergeometricSampler::HypergeometricSampler(const HypergeometricParams& p)
    : lo_(p.support_min()) {
  std::vector<double> pmf = hypergeometric_pmf_table(p);
  const std::int64_t hi = p.support_max();
  cdf_.reserve(static_cast<std::size_t>(hi - lo_ + 1));
  CompensatedSum acc;
  for (std::int64_t i = lo_; i <= hi; ++i) {
    acc.add(pmf[i]);
    cdf_.push_back(acc.result());
  }
  cdf_.back() = 1.0;
}

std::int64_t HypergeometricSampler::sample(Xoshiro256StarStar& rng) const {
  double u = rng.unit();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return lo_ + static_cast<std::int64_t>(it - cdf_.begin());
}

std::int64_t sample_hypergeometric(const HypergeometricParams& p,
                                   Xoshiro256StarStar& rng) {
  return HypergeometricSampler(p).sample(rng);
}

namespace {

// Per-block partial sums of f_t and f_t^2, combined in block order so the
// reduction is identical for every thread count.
struct BlockSums {
  std::vector<double> sum;
  std::vector<double> sum_sq;
};

constexpr std::int64_t kWalksPerBlock = 1024;

}  // namespace

std::vector<MomentEstimate> estimate_f_moments(const SimConfig& cfg) {
  const KneserParams& p = cfg.params;
  const std::int64_t n = p.subset_size();
  const std::int64_t k = p.excess();
  const std::size_t rows = static_cast<std::size_t>(cfg.horizon) + 1;

  // Lumped mode samples the next overlap from H(n+k, n-s, n) per state s.
  std::vector<HypergeometricSampler> samplers;
  if (cfg.mode == SimMode::kLumped) {
    samplers.reserve(static_cast<std::size_t>(n) + 1);
    for (std::int64_t s = 0; s <= n; ++s) {
      samplers.emplace_back(HypergeometricParams(n + k, n - s, n));
    }
  }

  const std::int64_t blocks = (cfg.walks + kWalksPerBlock - 1) / kWalksPerBlock;
  std::vector<BlockSums> partials(static_cast<std::size_t>(blocks));

  auto run_block = [&](std::int64_t block) {
    BlockSums& out = partials[static_cast<std::size_t>(block)];
    out.sum.assign(rows, 0.0);
    out.sum_sq.assign(rows, 0.0);
    const std::int64_t first = block * kWalksPerBlock;
    const std::int64_t last = std::min(cfg.walks, first + kWalksPerBlock);
    for (std::int64_t w = first; w < last; ++w) {
      Xoshiro256StarStar rng = Xoshiro256StarStar::for_walk(cfg.seed, static_cast<std::uint64_t>(w));
      WalkState state = initial_walk_state(p, cfg.mode);
      for (std::int64_t t = 0; t <= cfg.horizon; ++t) {
        double f = static_cast<double>(state.lump_value);
        out.sum[static_cast<std::size_t>(t)] += f;
        out.sum_sq[static_cast<std::size_t>(t)] += f * f;
        if (t == cfg.horizon) break;
        if (cfg.mode == SimMode::kExplicit) {
          step_explicit(state, p, rng);
        } else {
          state.lump_value = samplers[static_cast<std::size_t>(state.lump_value)].sample(rng);
          ++state.time;
        }
      }
    }
  };

  int threads = cfg.threads > 0 ? cfg.threads : worker_count();
  threads = static_cast<int>(std::min<std::int64_t>(threads, blocks));
  if (threads <= 1) {
    for (std::int64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<std::int64_t> next_block{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) {
      pool.emplace_back([&] {
        while (true) {
          std::int64_t b = next_block.fetch_add(1);
          if (b >= blocks) return;
          run_block(b);
        }
      });
    }
    for (std::thread& th : pool) th.join();
  }

  std::vector<MomentEstimate> out(rows);
  const double walks = static_cast<double>(cfg.walks);
  for (std::size_t t = 0; t < rows; ++t) {
    CompensatedSum sum;
    CompensatedSum sum_sq;
    for (const BlockSums& b : partials) {
      sum.add(b.sum[t]);
      sum_sq.add(b.sum_sq[t]);
    }
    MomentEstimate& e = out[t];
    e.time = static_cast<std::int64_t>(t);
    e.mean = sum.result() / walks;
    double second_moment = sum_sq.result() / walks;
    double var = second_moment - e.mean * e.mean;
    if (cfg.walks > 1) var *= walks / (walks - 1.0);
    e.variance = std::max(0.0, var);
    e.std_error = std::sqrt(e.variance / walks);
  }
  return out;
}

}  // namespace knesermix
