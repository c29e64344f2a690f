#include "polsim/snapshot.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "polsim/error.hpp"

namespace polsim {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kMagic = "# polsim-snapshot v";
constexpr std::string_view kVersion = "1";

double canonical(double v) { return v == 0.0 ? 0.0 : v; }

[[noreturn]] void bad(ErrorCode code, const std::string& what) {
  throw Error(code, fmt::format("snapshot: {}", what));
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    bad(ErrorCode::format, fmt::format("bad {} '{}'", what, s));
  }
  return v;
}

std::size_t parse_size(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    bad(ErrorCode::format, fmt::format("bad {} '{}'", what, s));
  }
  return v;
}

// Splits "# a=1 b=2" into values in the given key order.
std::vector<std::string_view> header_values(std::string_view line,
                                            std::initializer_list<std::string_view> keys) {
  if (line.substr(0, 2) != "# ") bad(ErrorCode::format, fmt::format("bad header '{}'", line));
  line.remove_prefix(2);
  std::vector<std::string_view> out;
  for (std::string_view key : keys) {
    if (line.substr(0, key.size()) != key || line.size() <= key.size() ||
        line[key.size()] != '=') {
      bad(ErrorCode::format, fmt::format("header is missing '{}='", key));
    }
    line.remove_prefix(key.size() + 1);
    const auto sp = line.find(' ');
    out.push_back(line.substr(0, sp));
    line = sp == std::string_view::npos ? std::string_view{} : line.substr(sp + 1);
  }
  if (!line.empty()) bad(ErrorCode::format, fmt::format("trailing header text '{}'", line));
  return out;
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}
  bool done() const { return pos_ >= text_.size(); }
  // Returns false when the line is not newline-terminated.
  bool next(std::string_view& line) {
    const auto nl = text_.find('\n', pos_);
    if (nl == std::string_view::npos) {
      line = text_.substr(pos_);
      pos_ = text_.size();
      return false;
    }
    line = text_.substr(pos_, nl - pos_);
    pos_ = nl + 1;
    return true;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, fmt::format("cannot open '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

const char* to_string(FieldName f) {
  switch (f) {
    case FieldName::E:
      return "E";
    case FieldName::psi_e:
      return "psi_e";
    case FieldName::psi_q:
      return "psi_q";
    case FieldName::E_tilde:
      return "E_tilde";
  }
  return "E";
}

FieldName field_from_string(std::string_view s) {
  for (FieldName f : kAllFields) {
    if (s == to_string(f)) return f;
  }
  bad(ErrorCode::format, fmt::format("unknown field '{}'", s));
}

std::string format_snapshot(const FieldGrid& grid, double t, FieldName field) {
  fmt::memory_buffer buf;
  auto out = std::back_inserter(buf);
  fmt::format_to(out, "{}{}\n# t={}\n# field={}\n", kMagic, kVersion, canonical(t),
                 to_string(field));
  fmt::format_to(out, "# nx={} dx={} x0={}\n", grid.nx(), canonical(grid.x().step),
                 canonical(grid.x().origin));
  fmt::format_to(out, "# nz={} dz={} z0={}\n", grid.nz(), canonical(grid.z().step),
                 canonical(grid.z().origin));
  for (const cplx& v : grid.values()) {
    fmt::format_to(out, "{} {}\n", canonical(v.real()), canonical(v.imag()));
  }
  return fmt::to_string(buf);
}

FieldSnapshot parse_snapshot(std::string_view text) {
  LineReader reader(text);
  std::string_view line;
  auto header_line = [&]() {
    if (reader.done() || !reader.next(line)) bad(ErrorCode::snapshot_truncated, "truncated header");
    return line;
  };

  const std::string_view magic = header_line();
  if (magic.substr(0, kMagic.size()) != kMagic) {
    bad(ErrorCode::format, "not a polsim snapshot (missing magic line)");
  }
  if (magic.substr(kMagic.size()) != kVersion) {
    bad(ErrorCode::snapshot_version,
        fmt::format("version mismatch: file is v{}, reader supports v{}",
                    magic.substr(kMagic.size()), kVersion));
  }
  FieldSnapshot out;
  out.t = parse_double(header_values(header_line(), {"t"})[0], "t");
  out.field = field_from_string(header_values(header_line(), {"field"})[0]);
  const auto xh = header_values(header_line(), {"nx", "dx", "x0"});
  const auto zh = header_values(header_line(), {"nz", "dz", "z0"});
  const Axis x{parse_double(xh[2], "x0"), parse_double(xh[1], "dx"), parse_size(xh[0], "nx")};
  const Axis z{parse_double(zh[2], "z0"), parse_double(zh[1], "dz"), parse_size(zh[0], "nz")};
  try {
    out.grid = FieldGrid(x, z);
  } catch (const Error& e) {
    bad(ErrorCode::format, e.what());
  }

  const std::size_t expected = out.grid.size();
  std::size_t count = 0;
  auto values = out.grid.values();
  while (!reader.done()) {
    const bool terminated = reader.next(line);
    const auto sp = line.find(' ');
    if (!terminated || sp == std::string_view::npos) {
      bad(ErrorCode::snapshot_truncated,
          fmt::format("truncated payload at data line {} of {}", count + 1, expected));
    }
    if (count >= expected) {
      // Count the rest so the message reports the real length.
      std::size_t extra = 1;
      while (!reader.done()) {
        reader.next(line);
        ++extra;
      }
      bad(ErrorCode::snapshot_count,
          fmt::format("payload count {} disagrees with header nx*nz = {}", expected + extra,
                      expected));
    }
    values[count++] = cplx{parse_double(line.substr(0, sp), "real part"),
                           parse_double(line.substr(sp + 1), "imaginary part")};
  }
  if (count != expected) {
    bad(ErrorCode::snapshot_count,
        fmt::format("payload count {} disagrees with header nx*nz = {}", count, expected));
  }
  return out;
}

void write_field_snapshot(const std::string& path, const FieldGrid& grid, double t,
                          FieldName field) {
  const std::string text = format_snapshot(grid, t, field);
  // Write then rename so a reader never sees a half-written file.
  const std::string tmp = path + ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, fmt::format("cannot write '{}'", tmp));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorCode::io, fmt::format("write failed for '{}'", tmp));
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::io, fmt::format("cannot rename '{}': {}", tmp, ec.message()));
}

FieldSnapshot read_field_snapshot(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return parse_snapshot(text);
  } catch (const Error& e) {
    throw Error(e.code(), fmt::format("{}: {}", path, e.what()));
  }
}

std::string snapshot_path(const std::string& dir, std::size_t index, FieldName field) {
  return (fs::path(dir) / fmt::format("snap_{:04}_{}.txt", index, to_string(field))).string();
}

void write_snapshot(const SolverState& state, const std::string& dir, std::size_t index) {
  const FieldGrid* grids[] = {&state.E, &state.psi_e, &state.psi_q, &state.E_tilde};
  for (std::size_t k = 0; k < 4; ++k) {
    write_field_snapshot(snapshot_path(dir, index, kAllFields[k]), *grids[k], state.t,
                         kAllFields[k]);
  }
}

SolverState read_snapshot(const std::string& dir, std::size_t index, SolverMode mode) {
  SolverState state;
  state.mode = mode;
  FieldGrid* grids[] = {&state.E, &state.psi_e, &state.psi_q, &state.E_tilde};
  for (std::size_t k = 0; k < 4; ++k) {
    const std::string path = snapshot_path(dir, index, kAllFields[k]);
    FieldSnapshot snap = read_field_snapshot(path);
    if (snap.field != kAllFields[k]) {
      throw Error(ErrorCode::format, fmt::format("{}: holds field {}, expected {}", path,
                                                 to_string(snap.field), to_string(kAllFields[k])));
    }
    if (k == 0) {
      state.t = snap.t;
    } else if (snap.t != state.t || !snap.grid.same_geometry(state.E)) {
      throw Error(ErrorCode::format,
                  fmt::format("{}: time or lattice differs from the E file", path));
    }
    *grids[k] = std::move(snap.grid);
  }
  return state;
}

std::vector<std::size_t> list_snapshots(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::io, fmt::format("'{}' is not a directory", dir));
  }
  static const std::regex name(R"(snap_(\d+)_(E|psi_e|psi_q|E_tilde)\.txt)");
  std::map<std::size_t, int> seen;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::smatch m;
    const std::string file = entry.path().filename().string();
    if (std::regex_match(file, m, name)) ++seen[std::stoul(m[1].str())];
  }
  std::vector<std::size_t> out;
  for (const auto& [index, n] : seen) {
    if (n == 4) out.push_back(index);
  }
  return out;
}

}  // namespace polsim
