#include "totmom/totmom.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include <json.hpp>

#include "commands.hpp"
#include "error.hpp"
#include "numeric.hpp"
#include "spectrum.hpp"
#include "table_io.hpp"
#include "twofluid.hpp"

struct totmom_geometry {
  totmom::BoxGeometry geom;
};
struct totmom_table {
  totmom::SpectralTable table;
};
struct totmom_distribution {
  totmom::MomentumDistribution dist;
};

namespace {

thread_local std::string last_error;

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

template <class F>
int guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return TOTMOM_OK;
  } catch (const totmom::Error& e) {
    last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return TOTMOM_E_CONFIG;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TOTMOM_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TOTMOM_E_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return TOTMOM_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) totmom::fail(totmom::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

totmom::Statistics stats_from_int(int s) {
  switch (s) {
    case TOTMOM_STATS_BOLTZMANN: return totmom::Statistics::Boltzmann;
    case TOTMOM_STATS_BOSE: return totmom::Statistics::Bose;
    case TOTMOM_STATS_FERMI: return totmom::Statistics::Fermi;
    default: totmom::fail(totmom::ErrorCode::InvalidArgument, "unknown statistics code " + std::to_string(s));
  }
}

}  // namespace

extern "C" {

const char* totmom_version(void) { return "1.0.0"; }

const char* totmom_error_name(int code) { return totmom::error_code_name(static_cast<totmom::ErrorCode>(code)); }

const char* totmom_last_error(void) { return last_error.c_str(); }

void totmom_string_free(char* s) { std::free(s); }

int totmom_set_threads(unsigned n) {
  return guarded([&] {
    if (n < 1 || n > 256) totmom::fail(totmom::ErrorCode::InvalidArgument, "thread count must lie in [1, 256]");
    totmom::set_worker_threads(n);
  });
}

int totmom_geometry_new(int dim, double side, int64_t particles, totmom_geometry** out) {
  return guarded([&] {
    need(out, "out");
    *out = new totmom_geometry{totmom::BoxGeometry(dim, side, particles)};
  });
}

void totmom_geometry_free(totmom_geometry* g) { delete g; }

int totmom_gauss_sum(const totmom_geometry* g, const int64_t* q, double beta, double* value) {
  return guarded([&] {
    need(g, "geometry");
    need(q, "q");
    need(value, "value");
    const auto v = totmom::DualVector::from_span(q, g->geom.dim());
    *value = totmom::gauss_sum(v, g->geom, totmom::ThermalParams(beta)).value;
  });
}

int totmom_ratio_bounds(const totmom_geometry* g, double beta, double* lower, double* upper) {
  return guarded([&] {
    need(g, "geometry");
    need(lower, "lower");
    need(upper, "upper");
    const auto rb = totmom::ratio_bounds(g->geom, totmom::ThermalParams(beta));
    *lower = rb.lower;
    *upper = rb.upper;
  });
}

int totmom_table_enumerate(const totmom_geometry* g, int stats, double e_max, double beta, totmom_table** out) {
  return guarded([&] {
    need(g, "geometry");
    need(out, "out");
    auto t = totmom::enumerate_spectrum(g->geom, stats_from_int(stats), e_max, totmom::ThermalParams(beta));
    *out = new totmom_table{std::move(t)};
  });
}

int totmom_table_to_json(const totmom_table* t, char** json) {
  return guarded([&] {
    need(t, "table");
    need(json, "json");
    *json = dup_string(totmom::spectral_table_to_json(t->table));
  });
}

int totmom_table_from_json(const char* json, totmom_table** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = new totmom_table{totmom::spectral_table_from_json(json)};
  });
}

int totmom_table_level_count(const totmom_table* t, size_t* count) {
  return guarded([&] {
    need(t, "table");
    need(count, "count");
    *count = t->table.level_count();
  });
}

void totmom_table_free(totmom_table* t) { delete t; }

int totmom_partition(const totmom_table* t, double beta, double* Z, double* Z_irred) {
  return guarded([&] {
    need(t, "table");
    const auto pf = totmom::partition_functions(t->table, totmom::ThermalParams(beta, t->table.units()));
    if (Z) *Z = pf.Z;
    if (Z_irred) *Z_irred = pf.Z_irred;
  });
}

int totmom_nu(const totmom_table* t, double beta, totmom_distribution** out) {
  return guarded([&] {
    need(t, "table");
    need(out, "out");
    *out = new totmom_distribution{totmom::nu_distribution(t->table, totmom::ThermalParams(beta, t->table.units()))};
  });
}

int totmom_distribution_size(const totmom_distribution* d, size_t* size) {
  return guarded([&] {
    need(d, "distribution");
    need(size, "size");
    *size = d->dist.size();
  });
}

int totmom_distribution_entry(const totmom_distribution* d, size_t i, int64_t* coords, double* weight) {
  return guarded([&] {
    need(d, "distribution");
    if (i >= d->dist.size()) totmom::fail(totmom::ErrorCode::InvalidArgument, "index out of range");
    if (coords)
      for (int k = 0; k < d->dist.dim; ++k) coords[k] = d->dist.support[i][k];
    if (weight) *weight = d->dist.weights[i];
  });
}

int totmom_distribution_deficit(const totmom_distribution* d, double* deficit) {
  return guarded([&] {
    need(d, "distribution");
    need(deficit, "deficit");
    *deficit = d->dist.deficit;
  });
}

int totmom_gamma_cdf(const totmom_distribution* d, double kappa, double* value) {
  return guarded([&] {
    need(d, "distribution");
    need(value, "value");
    *value = totmom::gamma_cdf(d->dist, kappa);
  });
}

void totmom_distribution_free(totmom_distribution* d) { delete d; }

int totmom_critical_velocity(double T, double T_s, double eta, double mass, double kB, double* v_cr) {
  return guarded([&] {
    need(v_cr, "v_cr");
    totmom::FlowParams fp;
    fp.T = T;
    fp.T_s = T_s;
    fp.eta = eta;
    fp.mass = mass;
    fp.kB = kB;
    *v_cr = totmom::critical_velocity(fp);
  });
}

int totmom_run_command(const char* command, const char* config_json, const char* overrides_json, char** output,
                       char** out_path) {
  return guarded([&] {
    need(command, "command");
    need(config_json, "config");
    need(output, "output");
    const auto ov = totmom::app::parse_overrides(overrides_json ? overrides_json : "");
    const auto res = totmom::app::run_command(command, config_json, ov);
    *output = dup_string(res.text);
    if (out_path) *out_path = res.out_path.empty() ? nullptr : dup_string(res.out_path);
  });
}

}  // extern "C"
