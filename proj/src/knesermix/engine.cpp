#include "knesermix/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "knesermix/numeric.hpp"

namespace knesermix {

namespace {

constexpr double kFlushThreshold = 1e-320;
constexpr double kMassTolerance = 1e-12;

// Row j as the H(n+k, n-j, n) pmf over its support, with the largest entry
// adjusted so the row sums to 1 up to one final rounding. Without that
// adjustment the ~1e-16 row-sum residue compounds linearly in t and breaks
// mass conservation at 1e4 steps.
void fill_row(const KneserParams& p, std::int64_t j, std::span<double> out) {
  const std::int64_t n = p.subset_size();
  const std::int64_t k = p.excess();
  std::vector<double> pmf = hypergeometric_pmf_table(
      HypergeometricParams(n + k, n - j, n));
  const std::int64_t lo = std::max<std::int64_t>(0, n - j - k);
  const std::int64_t hi = n - j;
  std::size_t peak = 0;
  for (std::int64_t z = lo; z <= hi; ++z) {
    out[z - lo] = pmf[z];
    if (pmf[z] > out[peak]) peak = static_cast<std::size_t>(z - lo);
  }
  CompensatedSum rest;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i != peak) rest.add(out[i]);
  }
  out[peak] = 1.0 - rest.result();
}

}  // namespace

LumpedKernel::LumpedKernel(const KneserParams& params, LumpKind kind, bool stream_rows)
    : params_(params), kind_(kind), stream_(stream_rows) {
  if (stream_) return;
  if (dense_bytes(params) > kDenseByteLimit) {
    throw MemoryLimitError(
        "LumpedKernel: packed rows for n = " + std::to_string(params.subset_size()) +
        ", k = " + std::to_string(params.excess()) +
        " exceed " + std::to_string(kDenseByteLimit >> 20) +
        " MiB; use row streaming");
  }
  const std::int64_t states = state_count();
  offsets_.resize(static_cast<std::size_t>(states) + 1, 0);
  for (std::int64_t j = 0; j < states; ++j) {
    offsets_[j + 1] = offsets_[j] +
        static_cast<std::size_t>(row_support_max(j) - row_support_min(j) + 1);
  }
  packed_.resize(offsets_[states]);
  for (std::int64_t j = 0; j < states; ++j) {
    fill_row(params_, j, std::span<double>(packed_).subspan(
                             offsets_[j], offsets_[j + 1] - offsets_[j]));
  }
}

std::span<const double> LumpedKernel::row(std::int64_t j) const {
  if (stream_) {
    throw std::logic_error("LumpedKernel::row: kernel is in streaming mode");
  }
  return std::span<const double>(packed_).subspan(offsets_[j],
                                                  offsets_[j + 1] - offsets_[j]);
}

void LumpedKernel::build_row(std::int64_t j, std::span<double> out) const {
  fill_row(params_, j, out);
}

std::vector<BigRational> LumpedKernel::exact_row(std::int64_t j) const {
  const std::int64_t n = params_.subset_size();
  const std::int64_t k = params_.excess();
  ExactPmfTable table = hypergeometric_pmf_table_exact(
      HypergeometricParams(n + k, n - j, n));
  std::vector<BigRational> out;
  out.reserve(table.numerators.size());
  for (const BigInt& num : table.numerators) {
    out.emplace_back(num, table.denominator);
  }
  return out;
}

std::uint64_t LumpedKernel::dense_bytes(const KneserParams& params) {
  const std::uint64_t n = static_cast<std::uint64_t>(params.subset_size());
  const std::uint64_t k = static_cast<std::uint64_t>(params.excess());
  std::uint64_t entries = 0;
  // Row widths are min(n-j, k)+1: (n-k) full-width rows plus a triangle.
  if (n > k) entries += (n - k) * (k + 1);
  std::uint64_t tri = std::min(n, k) + 1;
  entries += tri * (tri + 1) / 2;
  return entries * sizeof(double);
}

LumpedKernel build_kernel(const KneserParams& p, LumpKind kind, bool stream_rows) {
  return LumpedKernel(p, kind, stream_rows);
}

LumpedDistribution LumpedDistribution::point_mass(std::int64_t state_count,
                                                  std::int64_t at) {
  LumpedDistribution d;
  d.mass.assign(static_cast<std::size_t>(state_count), 0.0);
  d.carry.assign(static_cast<std::size_t>(state_count), 0.0);
  d.mass[at] = 1.0;
  return d;
}

double LumpedDistribution::total() const {
  CompensatedSum acc;
  for (std::size_t i = 0; i < mass.size(); ++i) acc.add(mass[i]);
  for (std::size_t i = 0; i < carry.size(); ++i) acc.add(carry[i]);
  return acc.result();
}

void apply_kernel(const LumpedKernel& kernel, const LumpedDistribution& in,
                  LumpedDistribution& out) {
  const std::int64_t states = kernel.state_count();
  out.mass.assign(static_cast<std::size_t>(states), 0.0);
  out.carry.assign(static_cast<std::size_t>(states), 0.0);

  std::vector<double> scratch_row;
  for (std::int64_t j = 0; j < states; ++j) {
    const double vj = in.mass[j];
    const double cj = in.carry[j];
    if (vj == 0.0 && cj == 0.0) continue;
    const std::int64_t lo = kernel.row_support_min(j);
    const std::int64_t hi = kernel.row_support_max(j);
    std::span<const double> row;
    if (kernel.streams_rows()) {
      scratch_row.resize(static_cast<std::size_t>(hi - lo + 1));
      kernel.build_row(j, scratch_row);
      row = scratch_row;
    } else {
      row = kernel.row(j);
    }
    double* __restrict mass = out.mass.data() + lo;
    double* __restrict carry = out.carry.data() + lo;
    for (std::size_t z = 0; z < row.size(); ++z) {
      SplitFloat p = two_prod(vj, row[z]);
      SplitFloat s = two_sum(mass[z], p.hi);
      mass[z] = s.hi;
      carry[z] += s.lo + p.lo + cj * row[z];
    }
  }

  out.time_step = in.time_step + 1;
  out.flushed = in.flushed;
  CompensatedSum total;
  for (std::int64_t s = 0; s < states; ++s) {
    double v = out.mass[s] + out.carry[s];
    if (v != 0.0 && std::abs(v) < kFlushThreshold) {
      out.flushed += v;
      out.mass[s] = 0.0;
      out.carry[s] = 0.0;
      continue;
    }
    total.add(out.mass[s]);
    total.add(out.carry[s]);
  }
  double drift = std::abs(total.result() + out.flushed - 1.0);
  if (drift > kMassTolerance) {
    throw MassConservationError(
        "apply_kernel: mass drifted by " + std::to_string(drift) + " at step " +
        std::to_string(out.time_step));
  }
}

LumpedDistribution evolve(const LumpedKernel& kernel, LumpedDistribution start,
                          std::int64_t steps) {
  LumpedDistribution next;
  for (std::int64_t i = 0; i < steps; ++i) {
    apply_kernel(kernel, start, next);
    std::swap(start, next);
  }
  return start;
}

std::vector<BigRational> evolve_exact(const LumpedKernel& kernel,
                                      std::vector<BigRational> start,
                                      std::int64_t steps) {
  const std::int64_t states = kernel.state_count();
  std::vector<std::vector<BigRational>> rows;
  rows.reserve(static_cast<std::size_t>(states));
  for (std::int64_t j = 0; j < states; ++j) rows.push_back(kernel.exact_row(j));

  for (std::int64_t i = 0; i < steps; ++i) {
    std::vector<BigRational> next(static_cast<std::size_t>(states), BigRational(0));
    for (std::int64_t j = 0; j < states; ++j) {
      if (start[j] == 0) continue;
      for (std::int64_t z = 0; z < states; ++z) {
        if (rows[j][z] != 0) next[z] += start[j] * rows[j][z];
      }
    }
    start = std::move(next);
  }
  return start;
}

ProfileEngine::ProfileEngine(const KneserParams& p, bool stream_rows)
    : params_(p),
      kernel_(p, LumpKind::kStartOverlap, stream_rows),
      overlap_(LumpedDistribution::point_mass(p.lump_state_count(), p.subset_size())),
      statistic_(LumpedDistribution::point_mass(p.lump_state_count(), 0)),
      stationary_(stationary_lump(p, LumpKind::kStartOverlap)) {}

void ProfileEngine::step() {
  // The two lump kinds share the transition matrix, so one kernel drives both.
  apply_kernel(kernel_, overlap_, scratch_);
  std::swap(overlap_, scratch_);
  apply_kernel(kernel_, statistic_, scratch_);
  std::swap(statistic_, scratch_);
}

void ProfileEngine::advance_to(std::int64_t t) {
  while (time() < t) step();
}

double ProfileEngine::tv_to_stationary() const {
  CompensatedSum acc;
  for (std::int64_t j = 0; j < overlap_.state_count(); ++j) {
    acc.add(std::abs(overlap_.mass_at(j) - stationary_[j]));
  }
  return 0.5 * acc.result();
}

MomentTrack ProfileEngine::statistic_moments() const {
  CompensatedSum mean_acc;
  for (std::int64_t s = 0; s < statistic_.state_count(); ++s) {
    mean_acc.add(statistic_.mass_at(s) * static_cast<double>(s));
  }
  MomentTrack out;
  out.time = statistic_.time_step;
  out.mean = mean_acc.result();
  // Centered pass: the raw second moment cancels ~mean^2 and would cost six
  // digits of the variance at large n.
  CompensatedSum var_acc;
  for (std::int64_t s = 0; s < statistic_.state_count(); ++s) {
    double dev = static_cast<double>(s) - out.mean;
    var_acc.add(statistic_.mass_at(s) * dev * dev);
  }
  out.variance = std::max(0.0, var_acc.result());
  return out;
}

double ProfileEngine::statistic_tv() const {
  CompensatedSum acc;
  for (std::int64_t s = 0; s < statistic_.state_count(); ++s) {
    acc.add(std::abs(statistic_.mass_at(s) - stationary_[s]));
  }
  return 0.5 * acc.result();
}

std::vector<std::pair<std::int64_t, double>> exact_tv_profile(const KneserParams& p,
                                                              std::int64_t t_max) {
  ProfileEngine engine(p);
  std::vector<std::pair<std::int64_t, double>> out;
  out.reserve(static_cast<std::size_t>(t_max) + 1);
  for (std::int64_t t = 0; t <= t_max; ++t) {
    engine.advance_to(t);
    out.emplace_back(t, engine.tv_to_stationary());
  }
  return out;
}

std::vector<MomentTrack> f_moments(const KneserParams& p, std::int64_t t_max) {
  ProfileEngine engine(p);
  std::vector<MomentTrack> out;
  out.reserve(static_cast<std::size_t>(t_max) + 1);
  for (std::int64_t t = 0; t <= t_max; ++t) {
    engine.advance_to(t);
    out.push_back(engine.statistic_moments());
  }
  return out;
}

double statistic_mean_closed_form(const KneserParams& p, std::int64_t t) {
  const double n = static_cast<double>(p.subset_size());
  const double k = static_cast<double>(p.excess());
  const double ground = static_cast<double>(p.ground_size());
  double log_rho = std::log(n / (n + k));
  double term = n * (n + k) / ground * std::exp(static_cast<double>(t + 1) * log_rho);
  double sign = (t % 2 == 0) ? -1.0 : 1.0;  // (-1)^{t+1}
  return n * n / ground + sign * term;
}

}  // namespace knesermix
