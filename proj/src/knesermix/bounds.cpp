#include "knesermix/bounds.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace knesermix {

void BoundConfig::validate() const {
  if (!(spectral_full || g_closed_form || wilson_exact_moments || wilson_analytic)) {
    throw std::invalid_argument("BoundConfig: no bound variant enabled");
  }
}

double spectral_upper(const SpectrumTable& table, double t) {
  if (t < 0.0) throw std::invalid_argument("spectral_upper: t must be >= 0");
  std::vector<double> log_terms;
  log_terms.reserve(table.size());
  for (const SpectrumEntry& e : table) {
    if (e.index == 0 || e.eigenvalue.sign == 0) continue;
    log_terms.push_back(e.multiplicity.log() + 2.0 * t * e.eigenvalue.magnitude.log());
  }
  double lse = log_sum_exp(log_terms);
  return std::min(1.0, 0.5 * std::exp(0.5 * lse));
}

double spectral_upper(const KneserParams& p, double t) {
  return spectral_upper(spectrum(p), t);
}

double g_of_t(const KneserParams& p, double t) {
  double n = static_cast<double>(p.subset_size());
  double k = static_cast<double>(p.excess());
  return std::exp(std::log(static_cast<double>(p.ground_size())) -
                  2.0 * t * std::log1p(k / n));
}

std::optional<double> g_bound(const KneserParams& p, double t) {
  if (t < 0.0) throw std::invalid_argument("g_bound: t must be >= 0");
  double g = g_of_t(p, t);
  if (g > 0.5) return std::nullopt;
  return std::sqrt(0.5 * g);
}

double variance_domination_constant(const KneserParams& p) {
  return 1.0 + static_cast<double>(p.excess()) / static_cast<double>(p.subset_size());
}

double variance_recursion_ratio(const KneserParams& p) {
  double n = static_cast<double>(p.subset_size());
  double k = static_cast<double>(p.excess());
  double ground = static_cast<double>(p.ground_size());
  return ground * (ground - 1.0) / (4.0 * n * (n + k - 1.0));
}

WilsonInputs::WilsonInputs(double mean_gap_, double sigma_star_)
    : mean_gap(mean_gap_), sigma_star(sigma_star_) {
  if (!(sigma_star > 0.0)) {
    throw std::domain_error("WilsonInputs: sigma* must be positive");
  }
  if (mean_gap < 0.0) {
    throw std::domain_error("WilsonInputs: mean gap must be non-negative");
  }
  r = mean_gap / sigma_star;
}

double wilson_bound(const WilsonInputs& in) {
  if (in.r == 0.0) return 0.0;
  return std::max(0.0, 1.0 - 8.0 / (in.r * in.r));
}

double wilson_lower_exact(const KneserParams& p, const MomentTrack& at_t) {
  Moments stationary = stationary_statistic_moments(p);
  double sigma_sq = std::max(at_t.variance, stationary.variance);
  if (!(sigma_sq > 0.0)) {
    throw std::domain_error("wilson_lower_exact: degenerate sigma* = 0");
  }
  WilsonInputs in(std::abs(at_t.mean - stationary.mean), std::sqrt(sigma_sq));
  return wilson_bound(in);
}

double wilson_lower_analytic(const KneserParams& p, double t) {
  if (t < 0.0) throw std::invalid_argument("wilson_lower_analytic: t must be >= 0");
  double n = static_cast<double>(p.subset_size());
  double k = static_cast<double>(p.excess());
  double c_nk = variance_domination_constant(p);
  double g_tilde = std::sqrt(static_cast<double>(p.ground_size()) - 1.0) / c_nk *
                   std::exp(-(t + 1.0) * std::log1p(k / n));
  if (g_tilde == 0.0) return 0.0;
  return std::max(0.0, 1.0 - 8.0 / (g_tilde * g_tilde));
}

}  // namespace knesermix
