/* polsim C API: moving-medium slow-light simulator.
 *
 * Every call returns a polsim_status. On failure the message of the most
 * recent error on the calling thread is available from polsim_last_error().
 * Handles are opaque and owned by the caller; release them with the
 * matching *_free function (NULL is accepted). */
#ifndef POLSIM_POLSIM_H
#define POLSIM_POLSIM_H

#include <stddef.h>

#if defined(POLSIM_BUILDING_LIBRARY)
#define POLSIM_API __attribute__((visibility("default")))
#else
#define POLSIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum polsim_status {
  POLSIM_OK = 0,
  POLSIM_ERR_INVALID_ARGUMENT = 1,
  POLSIM_ERR_OUT_OF_BOUNDS = 2,
  POLSIM_ERR_CONFIG = 3,
  POLSIM_ERR_IO = 4,
  POLSIM_ERR_FORMAT = 5,
  POLSIM_ERR_CFL = 6,
  POLSIM_ERR_NUMERIC = 7,
  POLSIM_ERR_NOT_STORED = 8,
  POLSIM_ERR_UNSUPPORTED = 9,
  POLSIM_ERR_SNAPSHOT_VERSION = 10,
  POLSIM_ERR_SNAPSHOT_TRUNCATED = 11,
  POLSIM_ERR_SNAPSHOT_COUNT = 12,
  POLSIM_ERR_INTERNAL = 99
} polsim_status;

typedef struct polsim_config polsim_config;
typedef struct polsim_report polsim_report;
typedef struct polsim_snapshot polsim_snapshot;

/* Called after every snapshot with the simulated time and step count. */
typedef void (*polsim_progress_fn)(double t, unsigned long long steps, void* user);

POLSIM_API const char* polsim_version(void);
POLSIM_API const char* polsim_last_error(void);
POLSIM_API const char* polsim_status_name(polsim_status status);

/* Configuration */
POLSIM_API polsim_status polsim_config_load(const char* path, polsim_config** out);
POLSIM_API polsim_status polsim_config_parse(const char* text, polsim_config** out);
POLSIM_API void polsim_config_free(polsim_config* config);
/* Canonical text; the string lives until the next call on this handle. */
POLSIM_API polsim_status polsim_config_serialize(polsim_config* config, const char** text);
/* Soft warnings from validation, joined by newlines (possibly empty). */
POLSIM_API polsim_status polsim_config_warnings(polsim_config* config, const char** text);
/* output.directory of the configuration. */
POLSIM_API polsim_status polsim_config_output_dir(const polsim_config* config, const char** dir);
POLSIM_API polsim_status polsim_config_set_threads(polsim_config* config, int threads);
POLSIM_API polsim_status polsim_config_set_grid(polsim_config* config, size_t nx, size_t nz);

/* Workflows writing run directories */
POLSIM_API polsim_status polsim_run(const polsim_config* config, const char* out_dir,
                                    polsim_progress_fn progress, void* user);
/* xi0 may be NULL when count is 0; trajectory_dx <= 0 selects the grid dx. */
POLSIM_API polsim_status polsim_characteristics(const polsim_config* config, const char* out_dir,
                                                const double* xi0, size_t count,
                                                double trajectory_dx);

/* Reports (compare, widths) */
POLSIM_API polsim_status polsim_compare(const char* dir_a, const char* dir_b,
                                        polsim_report** out);
/* dz_atom <= 0 selects the medium depth z_max - z1 of the run. */
POLSIM_API polsim_status polsim_widths(const char* run_dir, double dz_atom, polsim_report** out);
POLSIM_API const char* polsim_report_text(const polsim_report* report);
POLSIM_API const char* polsim_report_key_values(const polsim_report* report);
/* Looks up a key of the key=value block; returns POLSIM_ERR_INVALID_ARGUMENT
 * when absent or not numeric. */
POLSIM_API polsim_status polsim_report_value(const polsim_report* report, const char* key,
                                             double* value);
POLSIM_API void polsim_report_free(polsim_report* report);

/* Single-field snapshot files (format v1) */
POLSIM_API polsim_status polsim_snapshot_read(const char* path, polsim_snapshot** out);
POLSIM_API polsim_status polsim_snapshot_write(const polsim_snapshot* snapshot, const char* path);
POLSIM_API double polsim_snapshot_time(const polsim_snapshot* snapshot);
POLSIM_API const char* polsim_snapshot_field(const polsim_snapshot* snapshot);
POLSIM_API size_t polsim_snapshot_nx(const polsim_snapshot* snapshot);
POLSIM_API size_t polsim_snapshot_nz(const polsim_snapshot* snapshot);
/* Node (i, j) value; out of range indices give POLSIM_ERR_OUT_OF_BOUNDS. */
POLSIM_API polsim_status polsim_snapshot_value(const polsim_snapshot* snapshot, size_t i,
                                               size_t j, double* re, double* im);
POLSIM_API void polsim_snapshot_free(polsim_snapshot* snapshot);

#ifdef __cplusplus
}
#endif

#endif /* POLSIM_POLSIM_H */
