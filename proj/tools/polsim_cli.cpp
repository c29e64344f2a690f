// polsim command-line front end. Talks to the library only through polsim.h.
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polsim/polsim.h"

namespace {

int report_failure(polsim_status status) {
  std::fprintf(stderr, "polsim: %s: %s\n", polsim_status_name(status), polsim_last_error());
  return 1;
}

void print_progress(double t, unsigned long long steps, void*) {
  std::fprintf(stderr, "  t=%-8g steps=%llu\n", t, steps);
}

struct ConfigHandle {
  polsim_config* ptr = nullptr;
  ~ConfigHandle() { polsim_config_free(ptr); }
};

struct ReportHandle {
  polsim_report* ptr = nullptr;
  ~ReportHandle() { polsim_report_free(ptr); }
};

polsim_status load(const std::string& path, ConfigHandle& h, int threads) {
  polsim_status s = polsim_config_load(path.c_str(), &h.ptr);
  if (s != POLSIM_OK) return s;
  if (threads > 0) s = polsim_config_set_threads(h.ptr, threads);
  if (s != POLSIM_OK) return s;
  const char* warnings = nullptr;
  s = polsim_config_warnings(h.ptr, &warnings);
  if (s == POLSIM_OK && warnings && *warnings) std::fprintf(stderr, "warning: %s", warnings);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate slow light in a moving EIT medium"};
  app.set_version_flag("--version", std::string(polsim_version()));
  app.require_subcommand(1);

  std::string config_path, out_dir, dir_a, dir_b;
  int threads = 0;
  bool quiet = false, key_values = false;
  std::vector<double> xi0{-0.5, -0.25, 0.0, 0.25, 0.5};
  double traj_dx = 0.0, dz_atom = 0.0;

  auto* run = app.add_subcommand("run", "Integrate the configured run and write snapshots");
  run->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Run directory (default: output.directory)");
  run->add_option("--threads", threads, "Worker threads (overrides solver.threads)")
      ->check(CLI::PositiveNumber);
  run->add_flag("--quiet", quiet, "No progress on stderr");

  auto* chars = app.add_subcommand("characteristics",
                                   "Evaluate the closed-form polariton on the run lattice");
  chars->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  chars->add_option("--out", out_dir, "Output directory (default: output.directory)");
  chars->add_option("--xi0", xi0, "Trajectory levels xi = xi0")->expected(0, -1);
  chars->add_option("--traj-dx", traj_dx, "Trajectory marching step (default: grid dx)");

  auto* compare = app.add_subcommand("compare", "Per-time L2 / Linf differences, B is reference");
  compare->add_option("dir_a", dir_a, "Run directory A")->required()->check(CLI::ExistingDirectory);
  compare->add_option("dir_b", dir_b, "Run directory B")->required()->check(CLI::ExistingDirectory);
  compare->add_flag("--kv", key_values, "Print the key=value block instead of the table");

  auto* widths = app.add_subcommand("widths", "Storage and retrieval geometry report");
  widths->add_option("dir", dir_a, "Run directory")->required()->check(CLI::ExistingDirectory);
  widths->add_option("--dz-atom", dz_atom, "Atomic beam half width (default: z_max - z1)");
  widths->add_flag("--kv", key_values, "Print the key=value block instead of the text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run || *chars) {
    ConfigHandle cfg;
    polsim_status s = load(config_path, cfg, threads);
    if (s != POLSIM_OK) return report_failure(s);
    if (out_dir.empty()) {
      const char* d = nullptr;
      s = polsim_config_output_dir(cfg.ptr, &d);
      if (s != POLSIM_OK) return report_failure(s);
      out_dir = d;
    }
    if (*run) {
      s = polsim_run(cfg.ptr, out_dir.c_str(), quiet ? nullptr : print_progress, nullptr);
    } else {
      s = polsim_characteristics(cfg.ptr, out_dir.c_str(), xi0.data(), xi0.size(), traj_dx);
    }
    if (s != POLSIM_OK) return report_failure(s);
    std::printf("wrote %s\n", out_dir.c_str());
    return 0;
  }

  ReportHandle report;
  const polsim_status s = *compare ? polsim_compare(dir_a.c_str(), dir_b.c_str(), &report.ptr)
                                   : polsim_widths(dir_a.c_str(), dz_atom, &report.ptr);
  if (s != POLSIM_OK) return report_failure(s);
  std::fputs(key_values ? polsim_report_key_values(report.ptr) : polsim_report_text(report.ptr),
             stdout);
  return 0;
}
