/* Exercises the C API end to end on a small preset.
 * usage: polsim_capi_test <work dir> <config> */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <sys/stat.h>

#include "polsim/polsim.h"

static int failures = 0;

#define EXPECT(cond)                                                     \
  do {                                                                   \
    if (!(cond)) {                                                       \
      fprintf(stderr, "%s:%d: expected %s (last error: %s)\n", __FILE__, \
              __LINE__, #cond, polsim_last_error());                     \
      ++failures;                                                        \
    }                                                                    \
  } while (0)

#define EXPECT_OK(call) EXPECT((call) == POLSIM_OK)

static void on_progress(double t, unsigned long long steps, void* user) {
  (void)t;
  (void)steps;
  ++*(int*)user;
}

static void join(char* out, size_t size, const char* dir, const char* name) {
  snprintf(out, size, "%s/%s", dir, name);
}

static void remove_tree(const char* dir) {
  char cmd[4096];
  snprintf(cmd, sizeof cmd, "rm -rf '%s'", dir);
  if (system(cmd) != 0) fprintf(stderr, "could not clear %s\n", dir);
}

int main(int argc, char** argv) {
  if (argc != 3) {
    fprintf(stderr, "usage: %s <work dir> <config>\n", argv[0]);
    return 2;
  }
  const char* work = argv[1];
  const char* cfg_path = argv[2];
  remove_tree(work);
  mkdir(work, 0755);

  EXPECT(strlen(polsim_version()) > 0);
  EXPECT(strcmp(polsim_status_name(POLSIM_ERR_SNAPSHOT_COUNT), "snapshot payload count") == 0);

  /* Configuration */
  polsim_config* cfg = NULL;
  EXPECT_OK(polsim_config_load(cfg_path, &cfg));
  if (!cfg) return 1;
  const char* text = NULL;
  EXPECT_OK(polsim_config_serialize(cfg, &text));
  EXPECT(text && strstr(text, "[grid]") != NULL);

  polsim_config* again = NULL;
  EXPECT_OK(polsim_config_parse(text, &again));
  const char* text2 = NULL;
  char* copy = strdup(text);
  EXPECT_OK(polsim_config_serialize(again, &text2));
  EXPECT(strcmp(copy, text2) == 0);
  free(copy);
  polsim_config_free(again);

  const char* warnings = NULL;
  EXPECT_OK(polsim_config_warnings(cfg, &warnings));
  const char* out_dir = NULL;
  EXPECT_OK(polsim_config_output_dir(cfg, &out_dir));
  EXPECT(out_dir && strlen(out_dir) > 0);

  EXPECT(polsim_config_set_threads(cfg, 0) == POLSIM_ERR_INVALID_ARGUMENT);
  EXPECT(polsim_config_set_grid(cfg, 1, 10) == POLSIM_ERR_CONFIG);
  EXPECT(strlen(polsim_last_error()) > 0);

  polsim_config* bad = NULL;
  EXPECT(polsim_config_parse("[grid]\nnx = 400\n", &bad) == POLSIM_ERR_CONFIG);
  EXPECT(bad == NULL);
  EXPECT(strstr(polsim_last_error(), "missing") != NULL);
  EXPECT(polsim_config_load("/nonexistent/polsim.cfg", &bad) == POLSIM_ERR_IO);
  EXPECT(polsim_config_load(NULL, &bad) == POLSIM_ERR_INVALID_ARGUMENT);

  /* Runs with one and two workers produce identical snapshots */
  char run1[2048], run2[2048], chars[2048];
  join(run1, sizeof run1, work, "run1");
  join(run2, sizeof run2, work, "run2");
  join(chars, sizeof chars, work, "characteristics");
  int calls = 0;
  EXPECT_OK(polsim_run(cfg, run1, on_progress, &calls));
  EXPECT(calls > 0);
  EXPECT(polsim_run(cfg, run1, NULL, NULL) != POLSIM_OK); /* refuses to overwrite */
  EXPECT_OK(polsim_config_set_threads(cfg, 2));
  EXPECT_OK(polsim_run(cfg, run2, NULL, NULL));

  polsim_report* rep = NULL;
  EXPECT_OK(polsim_compare(run1, run2, &rep));
  double v = -1.0;
  EXPECT_OK(polsim_report_value(rep, "all.E_tilde.rel_l2", &v));
  EXPECT(v == 0.0);
  EXPECT_OK(polsim_report_value(rep, "all.E.linf", &v));
  EXPECT(v == 0.0);
  EXPECT(polsim_report_value(rep, "no.such.key", &v) == POLSIM_ERR_INVALID_ARGUMENT);
  EXPECT(strlen(polsim_report_text(rep)) > 0);
  polsim_report_free(rep);

  /* Closed-form evaluation and the geometry report */
  const double levels[] = {-0.25, 0.0, 0.25};
  EXPECT_OK(polsim_characteristics(cfg, chars, levels, 3, 0.0));
  char traj[2048];
  join(traj, sizeof traj, chars, "trajectories.txt");
  FILE* f = fopen(traj, "r");
  EXPECT(f != NULL);
  if (f) {
    char line[256];
    EXPECT(fgets(line, sizeof line, f) && strncmp(line, "# xi0=-0.25", 11) == 0);
    fclose(f);
  }

  rep = NULL;
  EXPECT_OK(polsim_widths(run1, 0.0, &rep));
  EXPECT_OK(polsim_report_value(rep, "storage.margin", &v));
  EXPECT(v > 1.0);
  EXPECT(strstr(polsim_report_key_values(rep), "storage.verdict=stored") != NULL);
  polsim_report_free(rep);

  rep = NULL;
  EXPECT_OK(polsim_compare(run1, chars, &rep));
  EXPECT_OK(polsim_report_value(rep, "all.E.rel_l2", &v));
  EXPECT(v > 0.0 && v < 1.0);
  polsim_report_free(rep);

  EXPECT(polsim_compare(run1, "/nonexistent", &rep) != POLSIM_OK);
  EXPECT(rep == NULL);

  /* Snapshot files */
  char snap[2048], copy_path[2048];
  join(snap, sizeof snap, run1, "snapshots/snap_0001_E_tilde.txt");
  join(copy_path, sizeof copy_path, work, "copy.txt");
  polsim_snapshot* s = NULL;
  EXPECT_OK(polsim_snapshot_read(snap, &s));
  if (s) {
    EXPECT(polsim_snapshot_time(s) == 5.0);
    EXPECT(strcmp(polsim_snapshot_field(s), "E_tilde") == 0);
    EXPECT(polsim_snapshot_nx(s) == 61 && polsim_snapshot_nz(s) == 61);
    double re = 0.0, im = 0.0, peak = 0.0;
    for (size_t i = 0; i < polsim_snapshot_nx(s); ++i)
      for (size_t j = 0; j < polsim_snapshot_nz(s); ++j) {
        EXPECT_OK(polsim_snapshot_value(s, i, j, &re, &im));
        peak = fmax(peak, hypot(re, im));
      }
    EXPECT(peak > 0.0);
    EXPECT(polsim_snapshot_value(s, 61, 0, &re, &im) == POLSIM_ERR_OUT_OF_BOUNDS);
    EXPECT_OK(polsim_snapshot_write(s, copy_path));
    polsim_snapshot_free(s);
  }
  polsim_snapshot* t = NULL;
  EXPECT_OK(polsim_snapshot_read(copy_path, &t));
  polsim_snapshot_free(t);

  f = fopen(copy_path, "w");
  if (f) {
    fputs("# polsim-snapshot v9\n", f);
    fclose(f);
  }
  EXPECT(polsim_snapshot_read(copy_path, &t) == POLSIM_ERR_SNAPSHOT_VERSION);
  EXPECT(t == NULL);

  polsim_snapshot_free(NULL);
  polsim_report_free(NULL);
  polsim_config_free(cfg);

  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  printf("C API checks passed\n");
  return 0;
}
