#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "knesermix/engine.hpp"
#include "knesermix/model.hpp"

namespace knesermix {

class ConvergenceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// min{t : d(t) < eps} read from a non-increasing profile d(0), d(1), ...
// (strict inequality). Throws ConvergenceError if the profile never crosses.
std::int64_t mixing_time(std::span<const double> profile, double eps);

// Same, driving the engine directly and extending as needed (hard stop at
// 100 t*, which a correct chain never reaches).
std::int64_t mixing_time(ProfileEngine& engine, double eps);

enum class ProfileSource { kExact, kBoundsOnly };

struct MixingReport {
  explicit MixingReport(KneserParams p) : params(p) {}

  KneserParams params;
  std::vector<double> epsilons;
  std::map<double, std::int64_t> t_mix;
  double t_star = 0.0;
  double window_scale = 0.0;  // n/k
  // t_mix(eps)/t_mix(1-eps) at the smallest requested eps; 1 when both
  // crossings are at t = 0.
  double cutoff_ratio = 0.0;
  std::int64_t t_mix_complement = 0;  // t_mix(1 - smallest eps)
  // |t_mix(1/4) - t_star| / (n/k); diagnostic only.
  double window_constant = 0.0;
  ProfileSource source = ProfileSource::kExact;
};

MixingReport mixing_report(const KneserParams& p, std::vector<double> epsilons,
                           bool stream_rows = false);

struct WindowPoint {
  double c = 0.0;
  std::int64_t t = 0;  // floor(t* + c n/k), clamped at 0
  std::optional<double> d_exact;
  std::optional<double> wilson_lower;  // analytic in bounds-only mode
  double spectral_upper = 1.0;
};

struct CutoffProfile {
  explicit CutoffProfile(KneserParams p) : params(p) {}

  KneserParams params;
  double t_star = 0.0;
  double window_scale = 0.0;
  ProfileSource source = ProfileSource::kExact;
  std::vector<WindowPoint> points;
};

// d at floor(t* + c n/k) for each c: exact engine plus bound pair when
// `exact` is set, analytic bound pair alone otherwise.
CutoffProfile window_probe(const KneserParams& p, std::span<const double> c_grid,
                           bool exact = true, bool stream_rows = false);

struct CutoffRatioRow {
  explicit CutoffRatioRow(KneserParams p) : params(p) {}

  KneserParams params;
  std::int64_t t_mix_eps = 0;
  std::int64_t t_mix_complement = 0;
  double ratio = 0.0;
};

// t_mix(eps)/t_mix(1-eps) across a family; the sharper the transition, the
// closer to 1.
std::vector<CutoffRatioRow> cutoff_diagnostic(std::span<const KneserParams> family,
                                              double eps);

}  // namespace knesermix
