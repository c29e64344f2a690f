#include "polsim/polsim.h"

#include <charconv>
#include <cmath>
#include <exception>
#include <map>
#include <new>
#include <string>

#include "polsim/config.hpp"
#include "polsim/error.hpp"
#include "polsim/snapshot.hpp"
#include "polsim/workflow.hpp"

struct polsim_config {
  polsim::RunConfig config;
  std::string scratch;
};

struct polsim_report {
  std::string text;
  std::string key_values;
  std::map<std::string, std::string, std::less<>> values;
};

struct polsim_snapshot {
  polsim::FieldSnapshot snap;
};

namespace {

thread_local std::string last_error;

polsim_status fail(polsim_status status, const char* what) {
  last_error = what;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
polsim_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return POLSIM_OK;
  } catch (const polsim::Error& e) {
    return fail(static_cast<polsim_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(POLSIM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(POLSIM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(POLSIM_ERR_INTERNAL, "unknown failure");
  }
}

polsim_status null_arg(const char* name) {
  last_error = std::string("null argument: ") + name;
  return POLSIM_ERR_INVALID_ARGUMENT;
}

polsim_report* make_report(std::string text, std::string kv) {
  auto* r = new polsim_report{std::move(text), std::move(kv), {}};
  std::size_t pos = 0;
  while (pos < r->key_values.size()) {
    auto nl = r->key_values.find('\n', pos);
    if (nl == std::string::npos) nl = r->key_values.size();
    const std::string line = r->key_values.substr(pos, nl - pos);
    const auto eq = line.find('=');
    if (eq != std::string::npos) r->values[line.substr(0, eq)] = line.substr(eq + 1);
    pos = nl + 1;
  }
  return r;
}

}  // namespace

extern "C" {

const char* polsim_version(void) { return polsim::library_version(); }

const char* polsim_last_error(void) { return last_error.c_str(); }

const char* polsim_status_name(polsim_status status) {
  switch (status) {
    case POLSIM_OK:
      return "ok";
    case POLSIM_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case POLSIM_ERR_OUT_OF_BOUNDS:
      return "out of bounds";
    case POLSIM_ERR_CONFIG:
      return "configuration error";
    case POLSIM_ERR_IO:
      return "i/o error";
    case POLSIM_ERR_FORMAT:
      return "format error";
    case POLSIM_ERR_CFL:
      return "stability bound violated";
    case POLSIM_ERR_NUMERIC:
      return "numerical failure";
    case POLSIM_ERR_NOT_STORED:
      return "pulse not stored";
    case POLSIM_ERR_UNSUPPORTED:
      return "unsupported";
    case POLSIM_ERR_SNAPSHOT_VERSION:
      return "snapshot version mismatch";
    case POLSIM_ERR_SNAPSHOT_TRUNCATED:
      return "snapshot truncated";
    case POLSIM_ERR_SNAPSHOT_COUNT:
      return "snapshot payload count";
    case POLSIM_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

polsim_status polsim_config_load(const char* path, polsim_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new polsim_config{polsim::load_config(path), {}}; });
}

polsim_status polsim_config_parse(const char* text, polsim_config** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new polsim_config{polsim::parse_config(text), {}}; });
}

void polsim_config_free(polsim_config* config) { delete config; }

polsim_status polsim_config_serialize(polsim_config* config, const char** text) {
  if (!config) return null_arg("config");
  if (!text) return null_arg("text");
  return guarded([&] {
    config->scratch = polsim::serialize_config(config->config);
    *text = config->scratch.c_str();
  });
}

polsim_status polsim_config_warnings(polsim_config* config, const char** text) {
  if (!config) return null_arg("config");
  if (!text) return null_arg("text");
  return guarded([&] {
    config->scratch.clear();
    for (const std::string& w : config->config.validate()) {
      config->scratch += w;
      config->scratch += '\n';
    }
    *text = config->scratch.c_str();
  });
}

polsim_status polsim_config_output_dir(const polsim_config* config, const char** dir) {
  if (!config) return null_arg("config");
  if (!dir) return null_arg("dir");
  *dir = config->config.output.directory.c_str();
  last_error.clear();
  return POLSIM_OK;
}

polsim_status polsim_config_set_threads(polsim_config* config, int threads) {
  if (!config) return null_arg("config");
  if (threads < 1) return fail(POLSIM_ERR_INVALID_ARGUMENT, "threads must be >= 1");
  config->config.solver.threads = threads;
  last_error.clear();
  return POLSIM_OK;
}

polsim_status polsim_config_set_grid(polsim_config* config, size_t nx, size_t nz) {
  if (!config) return null_arg("config");
  return guarded([&] {
    polsim::RunConfig next = config->config;
    next.grid.nx = nx;
    next.grid.nz = nz;
    next.validate();
    config->config = next;
  });
}

polsim_status polsim_run(const polsim_config* config, const char* out_dir,
                         polsim_progress_fn progress, void* user) {
  if (!config) return null_arg("config");
  if (!out_dir) return null_arg("out_dir");
  return guarded([&] {
    polsim::RunProgress cb;
    if (progress) cb = [progress, user](double t, std::uint64_t n) { progress(t, n, user); };
    polsim::run_to_directory(config->config, out_dir, cb);
  });
}

polsim_status polsim_characteristics(const polsim_config* config, const char* out_dir,
                                     const double* xi0, size_t count, double trajectory_dx) {
  if (!config) return null_arg("config");
  if (!out_dir) return null_arg("out_dir");
  if (!xi0 && count > 0) return null_arg("xi0");
  return guarded([&] {
    const std::vector<double> levels(xi0, xi0 + count);
    const double dx =
        trajectory_dx > 0.0 ? trajectory_dx : config->config.grid.x_axis().step;
    polsim::characteristics_to_directory(config->config, out_dir, levels, dx);
  });
}

polsim_status polsim_compare(const char* dir_a, const char* dir_b, polsim_report** out) {
  if (!dir_a) return null_arg("dir_a");
  if (!dir_b) return null_arg("dir_b");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const polsim::CompareReport r = polsim::compare_directories(dir_a, dir_b);
    *out = make_report(r.text(), r.key_values());
  });
}

polsim_status polsim_widths(const char* run_dir, double dz_atom, polsim_report** out) {
  if (!run_dir) return null_arg("run_dir");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    const polsim::GeometryReport r = polsim::widths_from_directory(
        run_dir, dz_atom > 0.0 ? std::optional<double>(dz_atom) : std::nullopt);
    *out = make_report(r.text(), r.key_values());
  });
}

const char* polsim_report_text(const polsim_report* report) {
  return report ? report->text.c_str() : "";
}

const char* polsim_report_key_values(const polsim_report* report) {
  return report ? report->key_values.c_str() : "";
}

polsim_status polsim_report_value(const polsim_report* report, const char* key, double* value) {
  if (!report) return null_arg("report");
  if (!key) return null_arg("key");
  if (!value) return null_arg("value");
  const auto it = report->values.find(std::string_view(key));
  if (it == report->values.end()) {
    return fail(POLSIM_ERR_INVALID_ARGUMENT, (std::string("no report key ") + key).c_str());
  }
  const std::string& s = it->second;
  if (s == "inf" || s == "nan") {
    *value = s == "inf" ? HUGE_VAL : NAN;
    last_error.clear();
    return POLSIM_OK;
  }
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    return fail(POLSIM_ERR_INVALID_ARGUMENT, (std::string("report key is not numeric: ") + key).c_str());
  }
  last_error.clear();
  return POLSIM_OK;
}

void polsim_report_free(polsim_report* report) { delete report; }

polsim_status polsim_snapshot_read(const char* path, polsim_snapshot** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] { *out = new polsim_snapshot{polsim::read_field_snapshot(path)}; });
}

polsim_status polsim_snapshot_write(const polsim_snapshot* snapshot, const char* path) {
  if (!snapshot) return null_arg("snapshot");
  if (!path) return null_arg("path");
  return guarded([&] {
    polsim::write_field_snapshot(path, snapshot->snap.grid, snapshot->snap.t,
                                 snapshot->snap.field);
  });
}

double polsim_snapshot_time(const polsim_snapshot* snapshot) {
  return snapshot ? snapshot->snap.t : NAN;
}

const char* polsim_snapshot_field(const polsim_snapshot* snapshot) {
  return snapshot ? polsim::to_string(snapshot->snap.field) : "";
}

size_t polsim_snapshot_nx(const polsim_snapshot* snapshot) {
  return snapshot ? snapshot->snap.grid.nx() : 0;
}

size_t polsim_snapshot_nz(const polsim_snapshot* snapshot) {
  return snapshot ? snapshot->snap.grid.nz() : 0;
}

polsim_status polsim_snapshot_value(const polsim_snapshot* snapshot, size_t i, size_t j,
                                    double* re, double* im) {
  if (!snapshot) return null_arg("snapshot");
  if (!re || !im) return null_arg("re/im");
  const polsim::FieldGrid& g = snapshot->snap.grid;
  if (i >= g.nx() || j >= g.nz()) {
    return fail(POLSIM_ERR_OUT_OF_BOUNDS, "snapshot node index out of range");
  }
  *re = g.at(i, j).real();
  *im = g.at(i, j).imag();
  last_error.clear();
  return POLSIM_OK;
}

void polsim_snapshot_free(polsim_snapshot* snapshot) { delete snapshot; }

}  // extern "C"
