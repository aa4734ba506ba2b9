#include "knesermix/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

#include "knesermix/bounds.hpp"
#include "knesermix/version.hpp"

namespace knesermix {

namespace {

using nlohmann::json;

constexpr const char* kFloorNote =
    "d(t) is evaluated at floor(t) for non-integer t; bound columns use real t";

json parse_config(const std::string& config_json) {
  if (config_json.empty()) return json(nullptr);
  return json::parse(config_json);
}

void append_header(std::string& out, const char* subcommand,
                   const std::string& config_json) {
  out += "# knesermix ";
  out += kVersion;
  out += ' ';
  out += subcommand;
  out += '\n';
  out += "# config=";
  out += config_json.empty() ? "{}" : config_json;
  out += '\n';
  out += "# note: ";
  out += kFloorNote;
  out += '\n';
}

json base_json(const char* schema, const std::string& config_json) {
  json j;
  j["schema"] = schema;
  j["version"] = kVersion;
  j["config"] = parse_config(config_json);
  j["floor_convention"] = kFloorNote;
  return j;
}

json params_json(const KneserParams& p) {
  return json{{"n", p.subset_size()},
              {"k", p.excess()},
              {"ground_size", p.ground_size()},
              {"degree_log", p.degree_log().log()},
              {"vertex_count_log", p.vertex_count_log().log()}};
}

void append_field(std::string& out, const std::optional<double>& v) {
  out += ',';
  if (v) out += format_real(*v);
}

json json_opt(const std::optional<double>& v) {
  if (!v) return json(nullptr);
  return json(*v);
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

ProfileTable build_profile(const KneserParams& p, const ProfileOptions& options) {
  if (options.t_max < 0) {
    throw std::invalid_argument("build_profile: t_max must be >= 0");
  }
  ProfileTable table(p);
  table.options = options;
  table.t_star = cutoff_time(p);
  table.rows.reserve(static_cast<std::size_t>(options.t_max) + 1);

  SpectrumTable spec_table = spectrum(p);
  std::unique_ptr<ProfileEngine> engine;
  if (!options.bounds_only) {
    engine = std::make_unique<ProfileEngine>(p, options.stream_rows);
  }

  for (std::int64_t t = 0; t <= options.t_max; ++t) {
    ProfileRow row;
    row.t = t;
    double rt = static_cast<double>(t);
    row.spectral_upper = spectral_upper(spec_table, rt);
    row.g_bound = g_bound(p, rt);
    row.wilson_lower_analytic = wilson_lower_analytic(p, rt);
    if (engine) {
      engine->advance_to(t);
      row.d_exact = engine->tv_to_stationary();
      MomentTrack moments = engine->statistic_moments();
      row.ef_t = moments.mean;
      row.varf_t = moments.variance;
      row.wilson_lower_exact = wilson_lower_exact(p, moments);
    } else {
      row.ef_t = statistic_mean_closed_form(p, t);
    }
    table.rows.push_back(row);
  }
  if (engine) table.flushed_mass = engine->flushed_mass();
  return table;
}

std::vector<SimulateRow> build_simulate_rows(const SimConfig& cfg) {
  std::vector<MomentEstimate> estimates = estimate_f_moments(cfg);
  std::vector<MomentTrack> exact = f_moments(cfg.params, cfg.horizon);
  std::vector<SimulateRow> rows;
  rows.reserve(estimates.size());
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    SimulateRow r;
    r.t = estimates[i].time;
    r.emp_mean = estimates[i].mean;
    r.emp_var = estimates[i].variance;
    r.std_error = estimates[i].std_error;
    r.exact_mean = exact[i].mean;
    r.exact_var = exact[i].variance;
    rows.push_back(r);
  }
  return rows;
}

OracleCheckReport run_oracle_check(const KneserParams& p, std::int64_t t_max) {
  OracleCheckReport report{p, t_max, false, false, 0.0, {}, false};
  FullChain chain(p);

  // Exact lump equality at every t up to t_max.
  LumpedKernel kernel(p, LumpKind::kStartOverlap);
  std::vector<BigRational> engine_law(
      static_cast<std::size_t>(p.lump_state_count()), BigRational(0));
  engine_law[static_cast<std::size_t>(p.subset_size())] = 1;
  report.lump_consistency = true;
  for (std::int64_t t = 0; t <= t_max; ++t) {
    std::vector<BigRational> pushed = lump_pushforward(chain, LumpKind::kStartOverlap, t);
    if (pushed != engine_law) {
      report.lump_consistency = false;
      break;
    }
    if (t < t_max) engine_law = evolve_exact(kernel, std::move(engine_law), 1);
  }

  // Engine TV vs exact rational TV.
  std::vector<TvPoint> exact_tv = oracle_tv(chain, t_max);
  std::vector<std::pair<std::int64_t, double>> engine_tv = exact_tv_profile(p, t_max);
  report.tv_equivalence = true;
  for (std::size_t i = 0; i < exact_tv.size(); ++i) {
    double gap = std::abs(engine_tv[i].second - to_double(exact_tv[i].d));
    report.max_tv_gap = std::max(report.max_tv_gap, gap);
  }
  report.tv_equivalence = report.max_tv_gap <= 1e-10;

  report.certification = certify_spectrum(chain, spectrum(p), 6);
  report.pass = report.lump_consistency && report.tv_equivalence &&
                report.certification.all_pass;
  return report;
}

std::string render_profile_csv(const ProfileTable& table,
                               const std::string& config_json) {
  std::string out;
  append_header(out, "profile", config_json);
  out += "t,d_exact,spectral_upper,g_bound,wilson_lower_exact,"
         "wilson_lower_analytic,ef_t,varf_t\n";
  for (const ProfileRow& r : table.rows) {
    out += std::to_string(r.t);
    append_field(out, r.d_exact);
    out += ',';
    out += format_real(r.spectral_upper);
    append_field(out, r.g_bound);
    append_field(out, r.wilson_lower_exact);
    out += ',';
    out += format_real(r.wilson_lower_analytic);
    append_field(out, r.ef_t);
    append_field(out, r.varf_t);
    out += '\n';
  }
  return out;
}

std::string render_profile_json(const ProfileTable& table,
                                const std::string& config_json) {
  json j = base_json("knesermix.profile.v1", config_json);
  j["params"] = params_json(table.params);
  j["t_star"] = table.t_star;
  j["bounds_only"] = table.options.bounds_only;
  j["flushed_mass"] = table.flushed_mass;
  json rows = json::array();
  for (const ProfileRow& r : table.rows) {
    rows.push_back(json{{"t", r.t},
                        {"d_exact", json_opt(r.d_exact)},
                        {"spectral_upper", r.spectral_upper},
                        {"g_bound", json_opt(r.g_bound)},
                        {"wilson_lower_exact", json_opt(r.wilson_lower_exact)},
                        {"wilson_lower_analytic", r.wilson_lower_analytic},
                        {"ef_t", json_opt(r.ef_t)},
                        {"varf_t", json_opt(r.varf_t)}});
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string render_mix_json(const MixingReport& report,
                            const std::string& config_json) {
  json j = base_json("knesermix.mix.v1", config_json);
  j["params"] = params_json(report.params);
  j["t_star"] = report.t_star;
  j["window_scale"] = report.window_scale;
  j["profile_source"] =
      report.source == ProfileSource::kExact ? "exact" : "bounds_only";
  json tm = json::object();
  for (const auto& [eps, t] : report.t_mix) tm[format_real(eps)] = t;
  j["t_mix"] = std::move(tm);
  j["epsilons"] = report.epsilons;
  j["cutoff_ratio"] = report.cutoff_ratio;
  j["t_mix_complement"] = report.t_mix_complement;
  j["window_constant"] = report.window_constant;
  return j.dump(2) + "\n";
}

std::string render_window_csv(const CutoffProfile& profile,
                              const std::string& config_json) {
  std::string out;
  append_header(out, "window", config_json);
  out += "c,t,d_exact,wilson_lower,spectral_upper\n";
  for (const WindowPoint& pt : profile.points) {
    out += format_real(pt.c);
    out += ',';
    out += std::to_string(pt.t);
    append_field(out, pt.d_exact);
    append_field(out, pt.wilson_lower);
    out += ',';
    out += format_real(pt.spectral_upper);
    out += '\n';
  }
  return out;
}

std::string render_window_json(const CutoffProfile& profile,
                               const std::string& config_json) {
  json j = base_json("knesermix.window.v1", config_json);
  j["params"] = params_json(profile.params);
  j["t_star"] = profile.t_star;
  j["window_scale"] = profile.window_scale;
  j["profile_source"] =
      profile.source == ProfileSource::kExact ? "exact" : "bounds_only";
  json rows = json::array();
  for (const WindowPoint& pt : profile.points) {
    rows.push_back(json{{"c", pt.c},
                        {"t", pt.t},
                        {"d_exact", json_opt(pt.d_exact)},
                        {"wilson_lower", json_opt(pt.wilson_lower)},
                        {"spectral_upper", pt.spectral_upper}});
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string render_simulate_csv(const SimConfig& cfg,
                                const std::vector<SimulateRow>& rows,
                                const std::string& config_json) {
  (void)cfg;
  std::string out;
  append_header(out, "simulate", config_json);
  out += "t,emp_mean,emp_var,stderr,exact_mean,exact_var\n";
  for (const SimulateRow& r : rows) {
    out += std::to_string(r.t);
    out += ',';
    out += format_real(r.emp_mean);
    out += ',';
    out += format_real(r.emp_var);
    out += ',';
    out += format_real(r.std_error);
    out += ',';
    out += format_real(r.exact_mean);
    out += ',';
    out += format_real(r.exact_var);
    out += '\n';
  }
  return out;
}

std::string render_simulate_json(const SimConfig& cfg,
                                 const std::vector<SimulateRow>& rows,
                                 const std::string& config_json) {
  json j = base_json("knesermix.simulate.v1", config_json);
  j["params"] = params_json(cfg.params);
  j["walks"] = cfg.walks;
  j["horizon"] = cfg.horizon;
  j["seed"] = cfg.seed;
  j["mode"] = cfg.mode == SimMode::kExplicit ? "explicit" : "lumped";
  json out_rows = json::array();
  for (const SimulateRow& r : rows) {
    out_rows.push_back(json{{"t", r.t},
                            {"emp_mean", r.emp_mean},
                            {"emp_var", r.emp_var},
                            {"stderr", r.std_error},
                            {"exact_mean", r.exact_mean},
                            {"exact_var", r.exact_var}});
  }
  j["rows"] = std::move(out_rows);
  return j.dump(2) + "\n";
}

std::string render_spectrum_csv(const SpectrumTable& table,
                                const std::string& config_json) {
  std::string out;
  append_header(out, "spectrum", config_json);
  out += "i,eigenvalue,eigenvalue_num,eigenvalue_den,multiplicity,log_multiplicity\n";
  for (const SpectrumEntry& e : table) {
    out += std::to_string(e.index);
    out += ',';
    out += format_real(e.eigenvalue.value());
    out += ',';
    out += boost::multiprecision::numerator(e.eigenvalue_exact).str();
    out += ',';
    out += boost::multiprecision::denominator(e.eigenvalue_exact).str();
    out += ',';
    out += e.multiplicity_exact.str();
    out += ',';
    out += format_real(e.multiplicity.log());
    out += '\n';
  }
  return out;
}

std::string render_spectrum_json(const SpectrumTable& table,
                                 const std::string& config_json) {
  json j = base_json("knesermix.spectrum.v1", config_json);
  j["params"] = params_json(table.params());
  json rows = json::array();
  for (const SpectrumEntry& e : table) {
    rows.push_back(json{
        {"i", e.index},
        {"eigenvalue", e.eigenvalue.value()},
        {"eigenvalue_num", boost::multiprecision::numerator(e.eigenvalue_exact).str()},
        {"eigenvalue_den", boost::multiprecision::denominator(e.eigenvalue_exact).str()},
        {"multiplicity", e.multiplicity_exact.str()},
        {"log_multiplicity", e.multiplicity.log()}});
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string render_oracle_check_text(const OracleCheckReport& report) {
  std::ostringstream out;
  auto line = [&](const char* name, bool ok, const std::string& detail) {
    out << (ok ? "[PASS] " : "[FAIL] ") << name;
    if (!detail.empty()) out << ": " << detail;
    out << '\n';
  };
  line("lump-consistency", report.lump_consistency,
       "exact pushforward equality for t <= " + std::to_string(report.t_max));
  line("tv-equivalence", report.tv_equivalence,
       "max |engine - oracle| = " + format_real(report.max_tv_gap));
  std::string powers;
  for (const auto& [m, ok] : report.certification.per_power) {
    if (!ok) powers += " m=" + std::to_string(m);
  }
  line("spectrum-certification", report.certification.all_pass,
       powers.empty() ? "trace identities m <= 6" : ("failed at" + powers));
  out << (report.pass ? "PASS" : "FAIL") << '\n';
  return out.str();
}

std::string render_oracle_check_json(const OracleCheckReport& report,
                                     const std::string& config_json) {
  json j = base_json("knesermix.oracle_check.v1", config_json);
  j["params"] = params_json(report.params);
  j["t_max"] = report.t_max;
  j["lump_consistency"] = report.lump_consistency;
  j["tv_equivalence"] = report.tv_equivalence;
  j["max_tv_gap"] = report.max_tv_gap;
  json powers = json::array();
  for (const auto& [m, ok] : report.certification.per_power) {
    powers.push_back(json{{"m", m}, {"pass", ok}});
  }
  j["spectrum_certification"] = std::move(powers);
  j["pass"] = report.pass;
  return j.dump(2) + "\n";
}

}  // namespace knesermix
