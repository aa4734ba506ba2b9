#include "knesermix.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>
#include <vector>

#include "knesermix/analysis.hpp"
#include "knesermix/engine.hpp"
#include "knesermix/model.hpp"
#include "knesermix/oracle.hpp"
#include "knesermix/report.hpp"
#include "knesermix/version.hpp"

namespace {

thread_local std::string g_last_error;

km_status fail(km_status code, const char* what) {
  g_last_error = what != nullptr ? what : "";
  return code;
}

// Runs `fn` and maps C++ failures onto status codes.
template <typename Fn>
km_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return KM_OK;
  } catch (const knesermix::SizeLimitError& e) {
    return fail(KM_ERR_SIZE_LIMIT, e.what());
  } catch (const knesermix::MemoryLimitError& e) {
    return fail(KM_ERR_MEMORY_LIMIT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(KM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(KM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc& e) {
    return fail(KM_ERR_NOMEM, e.what());
  } catch (const std::exception& e) {
    return fail(KM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(KM_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string config_or_empty(const char* config_json) {
  return config_json == nullptr ? std::string() : std::string(config_json);
}

double opt_or_nan(const std::optional<double>& v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

struct km_profile {
  knesermix::ProfileTable table;
};

struct km_mix {
  knesermix::MixingReport report;
};

struct km_window {
  knesermix::CutoffProfile profile;
};

struct km_spectrum {
  knesermix::SpectrumTable table;
};

struct km_sim {
  knesermix::SimConfig config;
  std::vector<knesermix::SimulateRow> rows;
};

struct km_oracle_check {
  knesermix::OracleCheckReport report;
};

extern "C" {

const char* km_version(void) { return knesermix::kVersion; }

const char* km_last_error(void) { return g_last_error.c_str(); }

void km_string_free(char* s) { std::free(s); }

km_status km_params_validate(int64_t n, int64_t k) {
  return guarded([&] { knesermix::KneserParams params(n, k); (void)params; });
}

km_status km_profile_run(int64_t n, int64_t k, int64_t t_max, int bounds_only,
                         int stream_rows, km_profile** out) {
  if (out == nullptr) return fail(KM_ERR_INVALID_ARGUMENT, "out must not be null");
  *out = nullptr;
  return guarded([&] {
    knesermix::KneserParams params(n, k);
    knesermix::ProfileOptions options;
    options.t_max = t_max;
    options.bounds_only = bounds_only != 0;
    options.stream_rows = stream_rows != 0;
    *out = new km_profile{knesermix::build_profile(params, options)};
  });
}

int64_t km_profile_row_count(const km_profile* p) {
  return p == nullptr ? 0 : static_cast<int64_t>(p->table.rows.size());
}

km_status km_profile_get_row(const km_profile* p, int64_t index, km_profile_row* out) {
  if (p == nullptr || out == nullptr) {
    return fail(KM_ERR_INVALID_ARGUMENT, "null handle or out pointer");
  }
  if (index < 0 || index >= km_profile_row_count(p)) {
    return fail(KM_ERR_INVALID_ARGUMENT, "row index out of range");
  }
  const knesermix::ProfileRow& r = p->table.rows[static_cast<std::size_t>(index)];
  out->t = r.t;
  out->d_exact = opt_or_nan(r.d_exact);
  out->spectral_upper = r.spectral_upper;
  out->g_bound = opt_or_nan(r.g_bound);
  out->wilson_lower_exact = opt_or_nan(r.wilson_lower_exact);
  out->wilson_lower_analytic = r.wilson_lower_analytic;
  out->ef_t = opt_or_nan(r.ef_t);
  out->varf_t = opt_or_nan(r.varf_t);
  return KM_OK;
}

km_status km_profile_render(const km_profile* p, km_format format,
                            const char* config_json, char** out) {
  if (p == nullptr || out == nullptr) {
    return fail(KM_ERR_INVALID_ARGUMENT, "null handle or out pointer");
  }
  return guarded([&] {
    std::string text = format == KM_FORMAT_JSON
                           ? knesermix::render_profile_json(p->table,
                                                            config_or_empty(config_json))
                           : knesermix::render_profile_csv(p->table,
                                                           config_or_empty(config_json));
    *out = dup_string(text);
  });
}

void km_profile_free(km_profile* p) { delete p; }

km_status km_mix_run(int64_t n, int64_t k, const double* eps, size_t eps_count,
                     int stream_rows, km_mix** out) {
  if (out == nullptr) return fail(KM_ERR_INVALID_ARGUMENT, "out must not be null");
  if (eps == nullptr || eps_count == 0) {
    return fail(KM_ERR_INVALID_ARGUMENT, "need at least one eps");
  }
  *out = nullptr;
  return guarded([&] {
    knesermix::KneserParams params(n, k);
    std::vector<double> eps_list(eps, eps + eps_count);
    *out = new km_mix{
        knesermix::mixing_report(params, std::move(eps_list), stream_rows != 0)};
  });
}

double km_mix_t_star(const km_mix* m) {
  return m == nullptr ? std::numeric_limits<double>::quiet_NaN() : m->report.t_star;
}

double km_mix_window_scale(const km_mix* m) {
  return m == nullptr ? std::numeric_limits<double>::quiet_NaN()
                      : m->report.window_scale;
}

double km_mix_cutoff_ratio(const km_mix* m) {
  return m == nullptr ? std::numeric_limits<double>::quiet_NaN()
                      : m->report.cutoff_ratio;
}

km_status km_mix_time(const km_mix* m, double eps, int64_t* out) {
  if (m == nullptr || out == nullptr) {
    return fail(KM_ERR_INVALID_ARGUMENT, "null handle or out pointer");
  }
  auto it = m->report.t_mix.find(eps);
  if (it == m->report.t_mix.end()) {
    return fail(KM_ERR_INVALID_ARGUMENT, "eps was not part of the run");
  }
  *out = it->second;
  return KM_OK;
}

km_status km_mix_render(const km_mix* m, km_format format, const char* config_json,
                        char** out) {
  if (m == nullptr || out == nullptr) {
    return fail(KM_ERR_INVALID_ARGUMENT, "null handle or out pointer");
  }
  if (format != KM_FORMAT_JSON && format != KM_FORMAT_CSV) {
    return fail(KM_ERR_INVALID_ARGUMENT, "unknown format");
  }
  return guarded([&] {
    // The mixing report is a structured document; both formats emit JSON.
    *out = dup_string(
        knesermix::render_mix_json(m->report, config_or_empty(config_json)));
  });
}

void km_mix_free(km_mix* m) { delete m; }

km_status km_window_run(int64_t n, int64_t k, const double* c_grid, size_t count,
                        int exact_mode, int stream_rows, km_window** out) {
  if (out == nullptr) return fail(KM_ERR_INVALID_ARGUMENT, "out must not be null");
  if (c_grid == nullptr || count == 0) {
    return fail(KM_ERR_INVALID_ARGUMENT, "need a non-empty c grid");
  }
  *out = nullptr;
  return guarded([&] {
    knesermix::KneserParams params(n, k);
    std::vector<double> grid(c_grid, c_grid + count);
    *out = new km_window{knesermix::window_probe(params, grid, exact_mode != 0,
                                                 stream_rows != 0)};
  });
}

km_status km_window_render(const km_window* w, km_format format,
                           const char* config_json, char** out) {
  if (w == nullptr || out == nullptr) {
    return fail(KM_ERR_INVALID_ARGUMENT, "null handle or out pointer");
  }
  return guarded([&] {
    std::string text = format == KM_FORMAT_JSON
                           ? knesermix::render_window_json(w->profile,
                                                           config_or_empty(config_json))
                           : knesermix::render_window_csv(w->profile,
                                                          config_or_empty(config_json));
    *out = dup_string(text);
  });
}

void km_window_free(km_window* w) { delete w; }

km_status km_spectrum_run(int64_t n, int64_t k, km_spectrum** out) {
  if (out == nullptr) return fail(KM_ERR_INVALID_ARGUMENT, "out must not be null");
  *out = nullptr;
  return guarded([&] {
    knesermix::KneserParams params(n, k);
    *out = new km_spectrum{knesermix::spectrum(params)};
  });
}

int64_t km_spectrum_entry_count(const km_spectrum* s) {
  return s == nullptr ? 0 : static_cast<int64_t>(s->table.size());
}

km_status km_spectrum_get(const km_spectrum* s, int64_t index, double* eigenvalue,
                          double* log_multiplicity) {
  if (s == nullptr) return fail(KM_ERR_INVALID_ARGUMENT, "null handle");
  if (index < 0 || index >= km_spectrum_entry_count(s)) {
    return fail(KM_ERR_INVALID_ARGUMENT, "spectrum index out of range");
  }
  const knesermix::SpectrumEntry& e = s->table[static_cast<std::size_t>(index)];
  if (eigenvalue != nullptr) *eigenvalue = e.eigenvalue.value();
  if (log_multiplicity != nullptr) *log_multiplicity = e.multiplicity.log();
  return KM_OK;
}

km_status km_spectrum_render(const km_spectrum* s, km_format format,
                             const char* config_json, char** out) {
  if (s == nullptr || out == nullptr) {
    return fail(KM_ERR_INVALID_ARGUMENT, "null handle or out pointer");
  }
  return guarded([&] {
    std::string text = format == KM_FORMAT_JSON
                           ? knesermix::render_spectrum_json(s->table,
                                                             config_or_empty(config_json))
                           : knesermix::render_spectrum_csv(s->table,
                                                            config_or_empty(config_json));
    *out = dup_string(text);
  });
}

void km_spectrum_free(km_spectrum* s) { delete s; }

km_status km_simulate_run(int64_t n, int64_t k, int64_t walks, int64_t horizon,
                          uint64_t seed, km_sim_mode mode, int threads,
                          km_sim** out) {
  if (out == nullptr) return fail(KM_ERR_INVALID_ARGUMENT, "out must not be null");
  *out = nullptr;
  return guarded([&] {
    knesermix::KneserParams params(n, k);
    knesermix::SimConfig config(params, walks, horizon, seed,
                                mode == KM_SIM_EXPLICIT
                                    ? knesermix::SimMode::kExplicit
                                    : knesermix::SimMode::kLumped,
                                threads);
    std::vector<knesermix::SimulateRow> rows = knesermix::build_simulate_rows(config);
    *out = new km_sim{config, std::move(rows)};
  });
}

km_status km_sim_render(const km_sim* s, km_format format, const char* config_json,
                        char** out) {
  if (s == nullptr || out == nullptr) {
    return fail(KM_ERR_INVALID_ARGUMENT, "null handle or out pointer");
  }
  return guarded([&] {
    std::string text = format == KM_FORMAT_JSON
                           ? knesermix::render_simulate_json(
                                 s->config, s->rows, config_or_empty(config_json))
                           : knesermix::render_simulate_csv(
                                 s->config, s->rows, config_or_empty(config_json));
    *out = dup_string(text);
  });
}

void km_sim_free(km_sim* s) { delete s; }

km_status km_oracle_check_run(int64_t n, int64_t k, int64_t t_max,
                              km_oracle_check** out) {
  if (out == nullptr) return fail(KM_ERR_INVALID_ARGUMENT, "out must not be null");
  *out = nullptr;
  return guarded([&] {
    knesermix::KneserParams params(n, k);
    *out = new km_oracle_check{knesermix::run_oracle_check(params, t_max)};
  });
}

int km_oracle_check_passed(const km_oracle_check* c) {
  return (c != nullptr && c->report.pass) ? 1 : 0;
}

km_status km_oracle_check_render(const km_oracle_check* c, km_format format,
                                 const char* config_json, char** out) {
  if (c == nullptr || out == nullptr) {
    return fail(KM_ERR_INVALID_ARGUMENT, "null handle or out pointer");
  }
  return guarded([&] {
    // CSV has no natural shape here; the non-JSON format is plain text.
    std::string text = format == KM_FORMAT_JSON
                           ? knesermix::render_oracle_check_json(
                                 c->report, config_or_empty(config_json))
                           : knesermix::render_oracle_check_text(c->report);
    *out = dup_string(text);
  });
}

void km_oracle_check_free(km_oracle_check* c) { delete c; }

}  // extern "C"
