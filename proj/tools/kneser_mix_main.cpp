// kneser-mix: command-line frontend over the knesermix C API.
//
// Subcommands: profile, mix, window, simulate, oracle-check, spectrum.
// Reports go to --out (or stdout) as CSV or JSON; every report embeds the
// resolved invocation so a run can be reproduced from its output.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "knesermix.h"

namespace {

using nlohmann::json;

struct RunConfig {
  std::string subcommand;
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::int64_t t_max = 0;
  std::string c_grid = "-3:3:0.5";
  std::vector<double> eps;
  bool bounds_only = false;
  bool stream_rows = false;
  std::int64_t walks = 100000;
  std::int64_t horizon = 0;
  std::uint64_t seed = 1;
  std::string mode = "lumped";
  std::string format = "csv";
  std::string out;

  json to_json() const {
    json j;
    j["subcommand"] = subcommand;
    j["n"] = n;
    j["k"] = k;
    j["t_max"] = t_max;
    j["c_grid"] = c_grid;
    j["eps"] = eps;
    j["bounds_only"] = bounds_only;
    j["stream_rows"] = stream_rows;
    j["walks"] = walks;
    j["horizon"] = horizon;
    j["seed"] = seed;
    j["mode"] = mode;
    j["format"] = format;
    j["out"] = out;
    return j;
  }

  static RunConfig from_json(const json& j) {
    RunConfig c;
    c.subcommand = j.at("subcommand").get<std::string>();
    c.n = j.at("n").get<std::int64_t>();
    c.k = j.at("k").get<std::int64_t>();
    c.t_max = j.at("t_max").get<std::int64_t>();
    c.c_grid = j.at("c_grid").get<std::string>();
    c.eps = j.at("eps").get<std::vector<double>>();
    c.bounds_only = j.at("bounds_only").get<bool>();
    c.stream_rows = j.at("stream_rows").get<bool>();
    c.walks = j.at("walks").get<std::int64_t>();
    c.horizon = j.at("horizon").get<std::int64_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.mode = j.at("mode").get<std::string>();
    c.format = j.at("format").get<std::string>();
    c.out = j.at("out").get<std::string>();
    return c;
  }

  bool operator==(const RunConfig&) const = default;
};

std::vector<double> parse_c_grid(const std::string& spec) {
  // "a:b:step", inclusive of b up to a small tolerance.
  double a = 0.0, b = 0.0, step = 0.0;
  char colon1 = 0, colon2 = 0;
  std::istringstream in(spec);
  if (!(in >> a >> colon1 >> b >> colon2 >> step) || colon1 != ':' ||
      colon2 != ':' || step <= 0.0 || b < a) {
    throw CLI::ValidationError("--c-grid expects a:b:step with step > 0, b >= a");
  }
  std::vector<double> grid;
  for (double c = a; c <= b + 1e-9; c += step) grid.push_back(c);
  return grid;
}

int fail_with(km_status status) {
  std::cerr << "kneser-mix: error: " << km_last_error() << '\n';
  return status == KM_ERR_INVALID_ARGUMENT ? 2 : 3;
}

int write_output(const RunConfig& cfg, char* rendered) {
  std::string text(rendered);
  km_string_free(rendered);
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) {
    std::cerr << "kneser-mix: error: cannot open " << cfg.out << " for writing\n";
    return 3;
  }
  file << text;
  return 0;
}

km_format format_of(const RunConfig& cfg) {
  return cfg.format == "json" ? KM_FORMAT_JSON : KM_FORMAT_CSV;
}

int run_profile(const RunConfig& cfg) {
  km_profile* handle = nullptr;
  km_status status = km_profile_run(cfg.n, cfg.k, cfg.t_max, cfg.bounds_only ? 1 : 0,
                                    cfg.stream_rows ? 1 : 0, &handle);
  if (status != KM_OK) return fail_with(status);
  char* rendered = nullptr;
  status = km_profile_render(handle, format_of(cfg), cfg.to_json().dump().c_str(),
                             &rendered);
  km_profile_free(handle);
  if (status != KM_OK) return fail_with(status);
  return write_output(cfg, rendered);
}

int run_mix(const RunConfig& cfg) {
  km_mix* handle = nullptr;
  km_status status = km_mix_run(cfg.n, cfg.k, cfg.eps.data(), cfg.eps.size(),
                                cfg.stream_rows ? 1 : 0, &handle);
  if (status != KM_OK) return fail_with(status);
  char* rendered = nullptr;
  status = km_mix_render(handle, format_of(cfg), cfg.to_json().dump().c_str(),
                         &rendered);
  km_mix_free(handle);
  if (status != KM_OK) return fail_with(status);
  return write_output(cfg, rendered);
}

int run_window(const RunConfig& cfg) {
  std::vector<double> grid = parse_c_grid(cfg.c_grid);
  km_window* handle = nullptr;
  km_status status = km_window_run(cfg.n, cfg.k, grid.data(), grid.size(),
                                   cfg.bounds_only ? 0 : 1,
                                   cfg.stream_rows ? 1 : 0, &handle);
  if (status != KM_OK) return fail_with(status);
  char* rendered = nullptr;
  status = km_window_render(handle, format_of(cfg), cfg.to_json().dump().c_str(),
                            &rendered);
  km_window_free(handle);
  if (status != KM_OK) return fail_with(status);
  return write_output(cfg, rendered);
}

int run_spectrum(const RunConfig& cfg) {
  km_spectrum* handle = nullptr;
  km_status status = km_spectrum_run(cfg.n, cfg.k, &handle);
  if (status != KM_OK) return fail_with(status);
  char* rendered = nullptr;
  status = km_spectrum_render(handle, format_of(cfg), cfg.to_json().dump().c_str(),
                              &rendered);
  km_spectrum_free(handle);
  if (status != KM_OK) return fail_with(status);
  return write_output(cfg, rendered);
}

int run_simulate(const RunConfig& cfg) {
  km_sim* handle = nullptr;
  km_status status = km_simulate_run(
      cfg.n, cfg.k, cfg.walks, cfg.horizon, cfg.seed,
      cfg.mode == "explicit" ? KM_SIM_EXPLICIT : KM_SIM_LUMPED, 0, &handle);
  if (status != KM_OK) return fail_with(status);
  char* rendered = nullptr;
  status = km_sim_render(handle, format_of(cfg), cfg.to_json().dump().c_str(),
                         &rendered);
  km_sim_free(handle);
  if (status != KM_OK) return fail_with(status);
  return write_output(cfg, rendered);
}

int run_oracle_check(const RunConfig& cfg) {
  km_oracle_check* handle = nullptr;
  km_status status = km_oracle_check_run(cfg.n, cfg.k, cfg.t_max, &handle);
  if (status != KM_OK) return fail_with(status);
  char* rendered = nullptr;
  status = km_oracle_check_render(handle, format_of(cfg),
                                  cfg.to_json().dump().c_str(), &rendered);
  int passed = km_oracle_check_passed(handle);
  km_oracle_check_free(handle);
  if (status != KM_OK) return fail_with(status);
  int rc = write_output(cfg, rendered);
  if (rc != 0) return rc;
  return passed ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixing-time analysis of simple random walks on Kneser graphs "
               "K(2n+k, n)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(km_version()));

  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool needs_params = true) {
    if (needs_params) {
      sub->add_option("--n", cfg.n, "Subset size n (>= 1)")->required();
      sub->add_option("--k", cfg.k, "Excess k (>= 1); ground set has 2n+k elements")
          ->required();
    }
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--out", cfg.out, "Output path ('-' or empty = stdout)");
  };

  CLI::App* profile = app.add_subcommand(
      "profile", "Exact d(t) with spectral/Wilson bounds per time step");
  add_common(profile);
  profile->add_option("--t-max", cfg.t_max, "Last time step")->required();
  profile->add_flag("--bounds-only", cfg.bounds_only,
                    "Skip the exact evolution; emit bound columns only");
  profile->add_flag("--stream-rows", cfg.stream_rows,
                    "Rebuild kernel rows per step instead of storing them");

  CLI::App* mix = app.add_subcommand(
      "mix", "Mixing times, cutoff location t*, and window diagnostics");
  add_common(mix);
  mix->add_option("--eps", cfg.eps, "Threshold(s) in (0,1); repeatable")
      ->required();
  mix->add_flag("--stream-rows", cfg.stream_rows,
                "Rebuild kernel rows per step instead of storing them");

  CLI::App* window = app.add_subcommand(
      "window", "d at floor(t* + c n/k) over a grid of c values");
  add_common(window);
  window->add_option("--c-grid", cfg.c_grid, "Grid a:b:step of window offsets c")
      ->capture_default_str();
  window->add_flag("--bounds-only", cfg.bounds_only,
                   "Bound pair instead of the exact engine");
  window->add_flag("--stream-rows", cfg.stream_rows,
                   "Rebuild kernel rows per step instead of storing them");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Seeded Monte Carlo estimates of the overlap statistic");
  add_common(simulate);
  simulate->add_option("--walks", cfg.walks, "Number of independent walks")
      ->capture_default_str();
  simulate->add_option("--horizon", cfg.horizon, "Steps per walk")->required();
  simulate->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
  simulate->add_option("--mode", cfg.mode, "Walk representation")
      ->check(CLI::IsMember({"explicit", "lumped"}))
      ->capture_default_str();

  CLI::App* oracle = app.add_subcommand(
      "oracle-check", "Brute-force certification on a tiny instance");
  add_common(oracle);
  oracle->add_option("--t-max", cfg.t_max, "Horizon for the exact comparisons")
      ->default_val(50);

  CLI::App* spectrum_cmd =
      app.add_subcommand("spectrum", "Eigenvalues and multiplicities of the walk");
  add_common(spectrum_cmd);

  CLI11_PARSE(app, argc, argv);

  cfg.subcommand = app.get_subcommands().front()->get_name();
  try {
    if (profile->parsed()) return run_profile(cfg);
    if (mix->parsed()) return run_mix(cfg);
    if (window->parsed()) return run_window(cfg);
    if (simulate->parsed()) return run_simulate(cfg);
    if (oracle->parsed()) return run_oracle_check(cfg);
    if (spectrum_cmd->parsed()) return run_spectrum(cfg);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "kneser-mix: error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
