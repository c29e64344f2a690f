#include "polsim/config.hpp"

#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "polsim/error.hpp"

namespace polsim {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::config, line ? fmt::format("line {}: {}", line, what) : what);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view v, const std::string& key) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (v.empty() || ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::config, fmt::format("{}: '{}' is not a number", key, v));
  }
  if (!std::isfinite(out)) {
    throw Error(ErrorCode::config, fmt::format("{}: value must be finite", key));
  }
  return out;
}

std::size_t to_size(std::string_view v, const std::string& key) {
  std::size_t out = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (v.empty() || ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::config, fmt::format("{}: '{}' is not a nonnegative integer", key, v));
  }
  return out;
}

bool to_bool(std::string_view v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::config, fmt::format("{}: '{}' is not a boolean", key, v));
}

std::vector<double> to_list(std::string_view v, const std::string& key) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < v.size()) {
    const auto b = v.find_first_not_of(" \t", pos);
    if (b == std::string_view::npos) break;
    auto e = v.find_first_of(" \t", b);
    if (e == std::string_view::npos) e = v.size();
    out.push_back(to_double(v.substr(b, e - b), key));
    pos = e;
  }
  return out;
}

std::string num(double v) { return fmt::format("{}", v); }

std::string list(const std::vector<double>& v) {
  std::string out;
  for (double d : v) {
    if (!out.empty()) out += ' ';
    out += num(d);
  }
  return out;
}

Direction to_direction(std::string_view v, const std::string& key) {
  if (v == "+z" || v == "plus_z") return Direction::plus_z;
  if (v == "-z" || v == "minus_z") return Direction::minus_z;
  throw Error(ErrorCode::config, fmt::format("{}: '{}' is not +z or -z", key, v));
}

// One key: how to read it into a RunConfig and how to print it back.
struct Field {
  std::function<void(RunConfig&, std::string_view, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

using Section = std::vector<std::pair<std::string, Field>>;


template <class Get>
Field real_field(Get ref) {
  return {[ref](RunConfig& c, std::string_view v, const std::string& k) { ref(c) = to_double(v, k); },
          [ref](const RunConfig& c) { return num(ref(const_cast<RunConfig&>(c))); }};
}

Section control_section(bool second) {
  auto beam = [second](RunConfig& c) -> ControlLaser& {
    return second ? *c.medium.control2 : c.medium.control1;
  };
  return {
      {"center", real_field([beam](RunConfig& c) -> double& { return beam(c).center; })},
      {"width", real_field([beam](RunConfig& c) -> double& { return beam(c).width; })},
      {"amplitude", real_field([beam](RunConfig& c) -> double& { return beam(c).amplitude; })},
      {"direction",
       {[beam](RunConfig& c, std::string_view v, const std::string& k) {
          beam(c).direction = to_direction(v, k);
        },
        [beam](const RunConfig& c) {
          return std::string(beam(const_cast<RunConfig&>(c)).direction == Direction::plus_z
                                 ? "+z"
                                 : "-z");
        }}},
  };
}

const std::vector<std::pair<std::string, Section>>& schema() {
  static const std::vector<std::pair<std::string, Section>> s = [] {
    std::vector<std::pair<std::string, Section>> out;
    auto size_field = [](std::size_t GridConfig::*m) {
      return Field{[m](RunConfig& c, std::string_view v, const std::string& k) {
                     c.grid.*m = to_size(v, k);
                   },
                   [m](const RunConfig& c) { return fmt::format("{}", c.grid.*m); }};
    };
    out.push_back(
        {"grid",
         {{"x_min", real_field([](RunConfig& c) -> double& { return c.grid.x_min; })},
          {"x_max", real_field([](RunConfig& c) -> double& { return c.grid.x_max; })},
          {"z_min", real_field([](RunConfig& c) -> double& { return c.grid.z_min; })},
          {"z_max", real_field([](RunConfig& c) -> double& { return c.grid.z_max; })},
          {"nx", size_field(&GridConfig::nx)},
          {"nz", size_field(&GridConfig::nz)}}});
    auto samples = [](std::vector<double> VgProfile::*m) {
      return Field{[m](RunConfig& c, std::string_view v, const std::string& k) {
                     c.medium.vg.*m = to_list(v, k);
                   },
                   [m](const RunConfig& c) { return list(c.medium.vg.*m); }};
    };
    out.push_back(
        {"medium",
         {{"vg_base", real_field([](RunConfig& c) -> double& { return c.medium.vg.base; })},
          {"vg_dip_depth",
           real_field([](RunConfig& c) -> double& { return c.medium.vg.dip_depth; })},
          {"vg_dip_center",
           real_field([](RunConfig& c) -> double& { return c.medium.vg.dip_center; })},
          {"vg_dip_width",
           real_field([](RunConfig& c) -> double& { return c.medium.vg.dip_width; })},
          {"vg_samples_z", samples(&VgProfile::samples_z)},
          {"vg_samples_v", samples(&VgProfile::samples_v)},
          {"v0", real_field([](RunConfig& c) -> double& { return c.medium.constants.v0; })},
          {"g", real_field([](RunConfig& c) -> double& { return c.medium.constants.g; })},
          {"c", real_field([](RunConfig& c) -> double& { return c.medium.constants.c; })},
          {"z1", real_field([](RunConfig& c) -> double& { return c.medium.z1; })}}});
    out.push_back({"control1", control_section(false)});
    out.push_back({"control2", control_section(true)});
    out.push_back(
        {"probe",
         {{"x_center", real_field([](RunConfig& c) -> double& { return c.probe.x_center; })},
          {"x_hwhm", real_field([](RunConfig& c) -> double& { return c.probe.x_hwhm; })},
          {"t_center", real_field([](RunConfig& c) -> double& { return c.probe.t_center; })},
          {"t_hwhm", real_field([](RunConfig& c) -> double& { return c.probe.t_hwhm; })},
          {"amplitude", real_field([](RunConfig& c) -> double& { return c.probe.amplitude; })}}});
    out.push_back(
        {"physics",
         {{"delta", real_field([](RunConfig& c) -> double& { return c.medium.constants.delta; })},
          {"Delta", real_field([](RunConfig& c) -> double& { return c.medium.constants.Delta; })},
          {"gamma", real_field([](RunConfig& c) -> double& { return c.medium.constants.gamma; })},
          {"v_r", real_field([](RunConfig& c) -> double& { return c.medium.constants.v_r; })},
          {"v_r_enabled",
           {[](RunConfig& c, std::string_view v, const std::string& k) {
              c.solver.v_r_enabled = to_bool(v, k);
            },
            [](const RunConfig& c) {
              return std::string(c.solver.v_r_enabled ? "true" : "false");
            }}}}});
    out.push_back(
        {"solver",
         {{"mode",
           {[](RunConfig& c, std::string_view v, const std::string& k) {
              if (v == "advection") {
                c.solver.mode = SolverMode::advection;
              } else if (v == "full") {
                c.solver.mode = SolverMode::full;
              } else {
                throw Error(ErrorCode::config,
                            fmt::format("{}: '{}' is not advection or full", k, v));
              }
            },
            [](const RunConfig& c) { return std::string(to_string(c.solver.mode)); }}},
          {"dt", real_field([](RunConfig& c) -> double& { return c.solver.dt; })},
          {"cfl_safety", real_field([](RunConfig& c) -> double& { return c.solver.cfl_safety; })},
          {"t_end", real_field([](RunConfig& c) -> double& { return c.solver.t_end; })},
          {"snapshot_every",
           real_field([](RunConfig& c) -> double& { return c.solver.snapshot_every; })},
          {"x_transport",
           {[](RunConfig& c, std::string_view v, const std::string& k) {
              if (v == "lattice") {
                c.solver.x_transport = XTransport::lattice;
              } else if (v == "upwind") {
                c.solver.x_transport = XTransport::upwind;
              } else {
                throw Error(ErrorCode::config,
                            fmt::format("{}: '{}' is not lattice or upwind", k, v));
              }
            },
            [](const RunConfig& c) {
              return std::string(c.solver.x_transport == XTransport::lattice ? "lattice"
                                                                             : "upwind");
            }}},
          {"initial",
           {[](RunConfig& c, std::string_view v, const std::string& k) {
              if (v == "zero") {
                c.initial = InitialState::zero;
              } else if (v == "characteristic") {
                c.initial = InitialState::characteristic;
              } else {
                throw Error(ErrorCode::config,
                            fmt::format("{}: '{}' is not zero or characteristic", k, v));
              }
            },
            [](const RunConfig& c) { return std::string(to_string(c.initial)); }}},
          {"threads",
           {[](RunConfig& c, std::string_view v, const std::string& k) {
              const std::size_t n = to_size(v, k);
              if (n < 1 || n > 4096) {
                throw Error(ErrorCode::config, fmt::format("{}: must be in [1, 4096]", k));
              }
              c.solver.threads = static_cast<int>(n);
            },
            [](const RunConfig& c) { return fmt::format("{}", c.solver.threads); }}}}});
    out.push_back(
        {"output",
         {{"directory",
           {[](RunConfig& c, std::string_view v, const std::string&) {
              c.output.directory = std::string(v);
            },
            [](const RunConfig& c) { return c.output.directory; }}},
          {"format_version",
           {[](RunConfig& c, std::string_view v, const std::string& k) {
              c.output.format_version = static_cast<int>(to_size(v, k));
            },
            [](const RunConfig& c) { return fmt::format("{}", c.output.format_version); }}}}});
    return out;
  }();
  return s;
}

const Section* find_section(std::string_view name) {
  for (const auto& [n, s] : schema()) {
    if (n == name) return &s;
  }
  return nullptr;
}

}  // namespace

const char* to_string(InitialState s) {
  return s == InitialState::zero ? "zero" : "characteristic";
}

std::vector<std::string> RunConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& why) {
    throw Error(ErrorCode::config, fmt::format("{}: {}", key, why));
  };
  if (!(grid.x_max > grid.x_min)) fail("grid.x_max", "must be > grid.x_min");
  if (!(grid.z_max > grid.z_min)) fail("grid.z_max", "must be > grid.z_min");
  if (grid.nx < 2) fail("grid.nx", "must be >= 2");
  if (grid.nz < 2) fail("grid.nz", "must be >= 2");
  if (medium.z1 != grid.z_min) fail("medium.z1", "must equal grid.z_min (entry plane)");
  std::vector<std::string> warnings = medium.validate(grid.z_min, grid.z_max);
  for (std::string& w : probe.validate(medium)) warnings.push_back(std::move(w));
  if (!(solver.cfl_safety > 0.0 && solver.cfl_safety < 1.0)) {
    fail("solver.cfl_safety", "must be in (0, 1)");
  }
  if (!(solver.dt >= 0.0)) fail("solver.dt", "must be >= 0 (0 selects the CFL step)");
  if (!(solver.t_end >= 0.0)) fail("solver.t_end", "must be >= 0");
  if (!(solver.snapshot_every > 0.0)) fail("solver.snapshot_every", "must be > 0");
  if (output.format_version != 1) fail("output.format_version", "only version 1 is supported");
  if (output.directory.empty()) fail("output.directory", "must not be empty");
  if (solver.mode == SolverMode::full && medium.control2 &&
      medium.control2->direction == Direction::minus_z) {
    fail("control2.direction", "full mode supports co-propagating beams only");
  }
  if (initial == InitialState::characteristic && !(medium.constants.v0 > 0.0)) {
    fail("solver.initial", "characteristic start needs medium.v0 > 0");
  }
  return warnings;
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::set<std::string> sections;
  std::map<std::string, std::size_t> key_lines;
  const Section* current = nullptr;
  std::string current_name;
  bool z1_given = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;

    const auto comment = line.find_first_of("#;");
    if (comment != std::string_view::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, fmt::format("malformed section header '{}'", line));
      current_name = std::string(trim(line.substr(1, line.size() - 2)));
      current = find_section(current_name);
      if (!current) fail(line_no, fmt::format("unknown section [{}]", current_name));
      if (!sections.insert(current_name).second) {
        fail(line_no, fmt::format("duplicate section [{}]", current_name));
      }
      if (current_name == "control2") config.medium.control2 = ControlLaser{};
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, fmt::format("expected key = value, got '{}'", line));
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!current) fail(line_no, fmt::format("key '{}' outside any section", key));
    const std::string full = current_name + "." + key;
    const Field* field = nullptr;
    for (const auto& [name, f] : *current) {
      if (name == key) field = &f;
    }
    if (!field) fail(line_no, fmt::format("{}: unknown key", full));
    if (!key_lines.emplace(full, line_no).second) fail(line_no, fmt::format("{}: duplicate key", full));
    try {
      field->set(config, value, full);
    } catch (const Error& e) {
      fail(line_no, e.what());
    }
    if (full == "medium.z1") z1_given = true;
  }

  for (const auto& [name, section] : schema()) {
    if (name != "control2" && !sections.count(name)) {
      fail(0, fmt::format("missing section [{}]", name));
    }
  }
  if (!z1_given) config.medium.z1 = config.grid.z_min;

  try {
    config.validate();
  } catch (const Error& e) {
    // Point at the offending line when the key was spelled out.
    const std::string what = e.what();
    const auto colon = what.find(':');
    const auto it = key_lines.find(what.substr(0, colon));
    fail(it == key_lines.end() ? 0 : it->second, what);
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, fmt::format("cannot open config '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path, e.what()));
  }
}

std::string serialize_config(const RunConfig& config) {
  std::string out;
  for (const auto& [name, section] : schema()) {
    if (name == "control2" && !config.medium.control2) continue;
    if (!out.empty()) out += '\n';
    out += fmt::format("[{}]\n", name);
    for (const auto& [key, field] : section) {
      out += fmt::format("{} = {}\n", key, field.get(config));
    }
  }
  return out;
}

}  // namespace polsim
