#pragma once

#include <cstdint>
#include <optional>

#include "knesermix/engine.hpp"
#include "knesermix/model.hpp"

namespace knesermix {

struct BoundConfig {
  KneserParams params;
  bool spectral_full = true;
  bool g_closed_form = true;
  bool wilson_exact_moments = true;
  bool wilson_analytic = true;

  void validate() const;  // at least one variant enabled
};

// min(1, (1/2) sqrt(sum_{i>=1} m_i |lambda_i|^{2t})), evaluated by
// log-sum-exp over the spectrum table. Real t is accepted: the exact d(t)
// uses floor(t), the bound curves are evaluated where they are asked.
double spectral_upper(const SpectrumTable& table, double t);
double spectral_upper(const KneserParams& p, double t);

// g(t) = (1+k/n)^{-2t} (2n+k); the closed-form bound sqrt(g(t)/2) applies
// only once g(t) <= 1/2, otherwise nullopt.
double g_of_t(const KneserParams& p, double t);
std::optional<double> g_bound(const KneserParams& p, double t);

// Finite-n constant C(n,k) with Var[f_t] <= C(n,k) Var[f] for all t. The
// variance recursion gives the ratio bound
//   (2n+k)(2n+k-1) / (4n(n+k-1)) <= 1 + k/n   (all n, k >= 1),
// so 1 + k/n is a valid constant at every size and is the one the analytic
// lower bound uses.
double variance_domination_constant(const KneserParams& p);
// The sharper ratio the recursion itself yields; exposed for diagnostics.
double variance_recursion_ratio(const KneserParams& p);

struct WilsonInputs {
  double mean_gap = 0.0;    // |E f_t - E f|
  double sigma_star = 0.0;  // shared std-dev bound, > 0
  double r = 0.0;           // mean_gap / sigma_star

  WilsonInputs(double mean_gap, double sigma_star);
};

// max(0, 1 - 8/r^2) from a distinguishing statistic with mean gap r sigma*.
double wilson_bound(const WilsonInputs& in);

// Lower bound from the exact moments of the overlap statistic at time t;
// sigma*^2 = max(Var f_t, Var f). Throws std::domain_error if both variances
// vanish (impossible for valid parameters).
double wilson_lower_exact(const KneserParams& p, const MomentTrack& at_t);

// Closed-form variant: gap/sigma* = sqrt(2n+k-1)/C(n,k) (1+k/n)^{-t-1} with
// the analytic sigma* = C(n,k) sqrt(Var f); never exceeds the exact-moment
// bound.
double wilson_lower_analytic(const KneserParams& p, double t);

}  // namespace knesermix
