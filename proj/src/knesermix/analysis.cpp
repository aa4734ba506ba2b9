#include "knesermix/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "knesermix/bounds.hpp"

namespace knesermix {

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("mixing_time: eps must lie in (0, 1)");
  }
}

std::int64_t probe_time(const KneserParams& p, double t_star_value, double c) {
  double t = t_star_value + c * static_cast<double>(p.subset_size()) /
                                static_cast<double>(p.excess());
  if (t < 0.0) return 0;
  return static_cast<std::int64_t>(std::floor(t));
}

}  // namespace

std::int64_t mixing_time(std::span<const double> profile, double eps) {
  check_eps(eps);
  for (std::size_t t = 0; t < profile.size(); ++t) {
    if (profile[t] < eps) return static_cast<std::int64_t>(t);
  }
  throw ConvergenceError("mixing_time: profile never drops below eps = " +
                         std::to_string(eps));
}

std::int64_t mixing_time(ProfileEngine& engine, double eps) {
  check_eps(eps);
  const double limit = 100.0 * std::max(1.0, cutoff_time(engine.params()));
  if (engine.time() > 0 && engine.tv_to_stationary() < eps) {
    throw std::invalid_argument(
        "mixing_time: engine already past the crossing; restart from t = 0");
  }
  while (true) {
    if (engine.tv_to_stationary() < eps) return engine.time();
    if (static_cast<double>(engine.time()) > limit) {
      throw ConvergenceError("mixing_time: no crossing below eps = " +
                             std::to_string(eps) + " within 100 t*");
    }
    engine.step();
  }
}

MixingReport mixing_report(const KneserParams& p, std::vector<double> epsilons,
                           bool stream_rows) {
  if (epsilons.empty()) {
    throw std::invalid_argument("mixing_report: need at least one eps");
  }
  for (double e : epsilons) check_eps(e);

  MixingReport report(p);
  report.epsilons = epsilons;
  report.t_star = cutoff_time(p);
  report.window_scale =
      static_cast<double>(p.subset_size()) / static_cast<double>(p.excess());

  double eps_min = *std::min_element(epsilons.begin(), epsilons.end());
  // Extra thresholds for the ratio and window diagnostics.
  std::vector<double> thresholds = epsilons;
  thresholds.push_back(1.0 - eps_min);
  thresholds.push_back(0.25);
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  std::map<double, std::int64_t> crossings;
  ProfileEngine engine(p, stream_rows);
  const double limit = 100.0 * std::max(1.0, report.t_star);
  std::size_t next = 0;
  while (next < thresholds.size()) {
    double d = engine.tv_to_stationary();
    while (next < thresholds.size() && d < thresholds[next]) {
      crossings[thresholds[next]] = engine.time();
      ++next;
    }
    if (next >= thresholds.size()) break;
    if (static_cast<double>(engine.time()) > limit) {
      throw ConvergenceError("mixing_report: profile stuck above eps = " +
                             std::to_string(thresholds[next]));
    }
    engine.step();
  }

  for (double e : epsilons) report.t_mix[e] = crossings.at(e);
  report.t_mix_complement = crossings.at(1.0 - eps_min);
  std::int64_t t_lo = crossings.at(eps_min);
  if (t_lo == 0 && report.t_mix_complement == 0) {
    report.cutoff_ratio = 1.0;
  } else {
    report.cutoff_ratio = static_cast<double>(t_lo) /
                          static_cast<double>(report.t_mix_complement);
  }
  report.window_constant =
      std::abs(static_cast<double>(crossings.at(0.25)) - report.t_star) /
      report.window_scale;
  return report;
}

CutoffProfile window_probe(const KneserParams& p, std::span<const double> c_grid,
                           bool exact, bool stream_rows) {
  CutoffProfile out(p);
  out.t_star = cutoff_time(p);
  out.window_scale =
      static_cast<double>(p.subset_size()) / static_cast<double>(p.excess());
  out.source = exact ? ProfileSource::kExact : ProfileSource::kBoundsOnly;
  SpectrumTable table = spectrum(p);

  out.points.reserve(c_grid.size());
  for (double c : c_grid) {
    WindowPoint pt;
    pt.c = c;
    pt.t = probe_time(p, out.t_star, c);
    pt.spectral_upper = spectral_upper(table, static_cast<double>(pt.t));
    out.points.push_back(pt);
  }

  if (exact) {
    // Visit in time order with one engine pass.
    std::vector<std::size_t> order(out.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return out.points[a].t < out.points[b].t;
    });
    ProfileEngine engine(p, stream_rows);
    for (std::size_t idx : order) {
      engine.advance_to(out.points[idx].t);
      out.points[idx].d_exact = engine.tv_to_stationary();
      out.points[idx].wilson_lower =
          wilson_lower_exact(p, engine.statistic_moments());
    }
  } else {
    for (WindowPoint& pt : out.points) {
      pt.wilson_lower = wilson_lower_analytic(p, static_cast<double>(pt.t));
    }
  }
  return out;
}

std::vector<CutoffRatioRow> cutoff_diagnostic(std::span<const KneserParams> family,
                                              double eps) {
  if (!(eps > 0.0 && eps < 0.5)) {
    throw std::invalid_argument("cutoff_diagnostic: eps must lie in (0, 1/2)");
  }
  std::vector<CutoffRatioRow> out;
  out.reserve(family.size());
  for (const KneserParams& p : family) {
    MixingReport report = mixing_report(p, {eps});
    CutoffRatioRow row(p);
    row.t_mix_eps = report.t_mix.at(eps);
    row.t_mix_complement = report.t_mix_complement;
    row.ratio = report.cutoff_ratio;
    out.push_back(row);
  }
  return out;
}

}  // namespace knesermix
