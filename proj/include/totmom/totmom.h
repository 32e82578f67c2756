#ifndef TOTMOM_TOTMOM_H
#define TOTMOM_TOTMOM_H

#include <stddef.h>
#include <stdint.h>

#if defined(TOTMOM_BUILDING)
#define TOTMOM_API __attribute__((visibility("default")))
#else
#define TOTMOM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Error codes. Every function returning int reports one of these. */
#define TOTMOM_OK 0
#define TOTMOM_E_INVALID_ARGUMENT 1
#define TOTMOM_E_INVALID_DOMAIN 2
#define TOTMOM_E_NO_CONVERGENCE 3
#define TOTMOM_E_CUTOFF_TOO_SMALL 4
#define TOTMOM_E_ENUMERATION_GUARD 5
#define TOTMOM_E_MISSING_ZERO 6
#define TOTMOM_E_INCOMPLETE_SUPPORT 7
#define TOTMOM_E_NOT_POSITIVE_DEFINITE 8
#define TOTMOM_E_OFF_LATTICE_VELOCITY 9
#define TOTMOM_E_NEGATIVE_KERNEL 10
#define TOTMOM_E_PHASE_WRAP 11
#define TOTMOM_E_ZERO_AMPLITUDE 12
#define TOTMOM_E_INVALID_PARAMS 13
#define TOTMOM_E_SCHEDULE_NOT_MONOTONE 14
#define TOTMOM_E_WINDOW_NOT_CLOSED 15
#define TOTMOM_E_CONFIG 16
#define TOTMOM_E_IO 17
#define TOTMOM_E_INTERNAL 99

#define TOTMOM_STATS_BOLTZMANN 0
#define TOTMOM_STATS_BOSE 1
#define TOTMOM_STATS_FERMI 2

typedef struct totmom_geometry totmom_geometry;
typedef struct totmom_table totmom_table;
typedef struct totmom_distribution totmom_distribution;

TOTMOM_API const char* totmom_version(void);
TOTMOM_API const char* totmom_error_name(int code);
/* Message of the last failure on the calling thread; empty after success. */
TOTMOM_API const char* totmom_last_error(void);
TOTMOM_API void totmom_string_free(char* s);
TOTMOM_API int totmom_set_threads(unsigned n);

/* Natural units (hbar = m = k_B = 1) unless a table carries its own. */
TOTMOM_API int totmom_geometry_new(int dim, double side, int64_t particles, totmom_geometry** out);
TOTMOM_API void totmom_geometry_free(totmom_geometry* g);

/* q has dim integer coordinates. */
TOTMOM_API int totmom_gauss_sum(const totmom_geometry* g, const int64_t* q, double beta, double* value);
TOTMOM_API int totmom_ratio_bounds(const totmom_geometry* g, double beta, double* lower, double* upper);

TOTMOM_API int totmom_table_enumerate(const totmom_geometry* g, int stats, double e_max, double beta, totmom_table** out);
TOTMOM_API int totmom_table_to_json(const totmom_table* t, char** json);
TOTMOM_API int totmom_table_from_json(const char* json, totmom_table** out);
TOTMOM_API int totmom_table_level_count(const totmom_table* t, size_t* count);
TOTMOM_API void totmom_table_free(totmom_table* t);

TOTMOM_API int totmom_partition(const totmom_table* t, double beta, double* Z, double* Z_irred);
TOTMOM_API int totmom_nu(const totmom_table* t, double beta, totmom_distribution** out);

TOTMOM_API int totmom_distribution_size(const totmom_distribution* d, size_t* size);
/* coords receives dim integers. */
TOTMOM_API int totmom_distribution_entry(const totmom_distribution* d, size_t i, int64_t* coords, double* weight);
TOTMOM_API int totmom_distribution_deficit(const totmom_distribution* d, double* deficit);
TOTMOM_API int totmom_gamma_cdf(const totmom_distribution* d, double kappa, double* value);
TOTMOM_API void totmom_distribution_free(totmom_distribution* d);

TOTMOM_API int totmom_critical_velocity(double T, double T_s, double eta, double mass, double kB, double* v_cr);

/* Runs a CLI subcommand on a JSON config. overrides_json may be NULL.
   On success *output holds the report; free it with totmom_string_free. */
TOTMOM_API int totmom_run_command(const char* command, const char* config_json, const char* overrides_json, char** output,
                                  char** out_path);

#ifdef __cplusplus
}
#endif

#endif
