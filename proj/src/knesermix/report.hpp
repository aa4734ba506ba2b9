#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "knesermix/analysis.hpp"
#include "knesermix/engine.hpp"
#include "knesermix/model.hpp"
#include "knesermix/montecarlo.hpp"
#include "knesermix/oracle.hpp"

namespace knesermix {

// One profile row per time step. Reals render with 17 significant digits so
// a round-trip through text is lossless; absent values render as empty CSV
// fields / JSON nulls.
struct ProfileRow {
  std::int64_t t = 0;
  std::optional<double> d_exact;
  double spectral_upper = 1.0;
  std::optional<double> g_bound;
  std::optional<double> wilson_lower_exact;
  double wilson_lower_analytic = 0.0;
  std::optional<double> ef_t;
  std::optional<double> varf_t;
};

struct ProfileOptions {
  std::int64_t t_max = 0;
  bool bounds_only = false;
  bool stream_rows = false;
};

struct ProfileTable {
  explicit ProfileTable(KneserParams p) : params(p) {}

  KneserParams params;
  ProfileOptions options;
  double t_star = 0.0;
  double flushed_mass = 0.0;
  std::vector<ProfileRow> rows;
};

// In exact mode every column is filled; bounds-only skips the evolution and
// leaves d_exact, wilson_lower_exact and varf_t empty (ef_t still comes from
// the closed form).
ProfileTable build_profile(const KneserParams& p, const ProfileOptions& options);

struct SimulateRow {
  std::int64_t t = 0;
  double emp_mean = 0.0;
  double emp_var = 0.0;
  double std_error = 0.0;
  double exact_mean = 0.0;
  double exact_var = 0.0;
};

std::vector<SimulateRow> build_simulate_rows(const SimConfig& cfg);

struct OracleCheckReport {
  KneserParams params;
  std::int64_t t_max = 0;
  bool lump_consistency = false;
  bool tv_equivalence = false;
  double max_tv_gap = 0.0;
  SpectrumCertification certification;
  bool pass = false;
};

// Lump-pushforward equality, engine-vs-oracle TV agreement (1e-10), and the
// trace-identity spectrum certification for m = 0..6.
OracleCheckReport run_oracle_check(const KneserParams& p, std::int64_t t_max);

// '.'-decimal, 17 significant digits.
std::string format_real(double value);

// Renderers. `config_json` is the caller's resolved invocation (may be
// empty); it is embedded verbatim in the report header so a run can be
// reproduced from its output alone.
std::string render_profile_csv(const ProfileTable& table, const std::string& config_json);
std::string render_profile_json(const ProfileTable& table, const std::string& config_json);
std::string render_mix_json(const MixingReport& report, const std::string& config_json);
std::string render_window_csv(const CutoffProfile& profile, const std::string& config_json);
std::string render_window_json(const CutoffProfile& profile, const std::string& config_json);
std::string render_simulate_csv(const SimConfig& cfg,
                                const std::vector<SimulateRow>& rows,
                                const std::string& config_json);
std::string render_simulate_json(const SimConfig& cfg,
                                 const std::vector<SimulateRow>& rows,
                                 const std::string& config_json);
std::string render_spectrum_csv(const SpectrumTable& table, const std::string& config_json);
std::string render_spectrum_json(const SpectrumTable& table, const std::string& config_json);
std::string render_oracle_check_text(const OracleCheckReport& report);
std::string render_oracle_check_json(const OracleCheckReport& report,
                                     const std::string& config_json);

}  // namespace knesermix
