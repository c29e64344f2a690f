#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "polsim/config.hpp"
#include "polsim/error.hpp"
#include "support.hpp"

using namespace polsim;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

// Error message of parsing `text`, or "" when it parses.
std::string parse_error(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config);
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("shipped presets round-trip") {
  for (const char* name : {"fig2.cfg", "fig3.cfg", "storage.cfg", "extent.cfg",
                           "retrieval_co.cfg", "retrieval_counter.cfg", "retrieval_weak.cfg",
                           "full_mb.cfg", "smoke.cfg"}) {
    CAPTURE(name);
    const RunConfig a = load_config(test::preset(name));
    const std::string text = serialize_config(a);
    const RunConfig b = parse_config(text);
    CHECK(serialize_config(b) == text);
  }
}

TEST_CASE("figure presets carry the reference parameters") {
  const RunConfig f2 = load_config(test::preset("fig2.cfg"));
  CHECK(f2.medium.constants.v0 == 0.1);
  CHECK(f2.medium.control1.center == 0.0);
  REQUIRE(f2.medium.control2.has_value());
  CHECK(f2.medium.control2->center == 5.0);
  CHECK(f2.medium.control2->direction == Direction::plus_z);
  CHECK(f2.medium.control1.width == 1.0);
  CHECK(f2.medium.control2->amplitude == f2.medium.control1.amplitude);
  CHECK(vg_tilde(2.0, f2.medium) == doctest::Approx(0.05));
  CHECK(f2.solver.t_end == 50.0);
  CHECK(f2.solver.snapshot_every == 5.0);

  const RunConfig f3 = load_config(test::preset("fig3.cfg"));
  CHECK(f3.medium.control2->direction == Direction::minus_z);
}

TEST_CASE("negative width is rejected by name") {
  const std::string text = slurp(test::preset("fig2.cfg"));
  const std::string bad = replace(text, "[control1]\ncenter = 0\nwidth = 1",
                                  "[control1]\ncenter = 0\nwidth = -1");
  const std::string msg = parse_error(bad);
  CHECK(msg.find("control1.width") != std::string::npos);
  CHECK(msg.find("line ") != std::string::npos);
}

TEST_CASE("second control beam is optional") {
  RunConfig cfg = load_config(test::preset("storage.cfg"));
  CHECK_FALSE(cfg.medium.control2.has_value());
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("parse errors") {
  const std::string text = slurp(test::preset("fig2.cfg"));
  CHECK(parse_error(replace(text, "v0 = 0.1", "v0 = 0.1\nspeed = 3")).find("medium.speed") !=
        std::string::npos);
  CHECK(parse_error(replace(text, "[probe]", "[probes]")).find("probes") != std::string::npos);
  CHECK(parse_error(replace(text, "v0 = 0.1", "v0 = nan")).find("medium.v0") !=
        std::string::npos);
  CHECK(parse_error(replace(text, "v0 = 0.1", "v0 = 0.1x")).find("medium.v0") !=
        std::string::npos);
  CHECK(parse_error(replace(text, "v0 = 0.1", "v0 = 0.1\nv0 = 0.2")).find("duplicate") !=
        std::string::npos);
  const auto p = text.find("[physics]");
  const auto q = text.find("[solver]");
  CHECK(parse_error(text.substr(0, p) + text.substr(q)).find("physics") != std::string::npos);
  CHECK(parse_error(replace(text, "direction = +z", "direction = up")).find("control1.direction") !=
        std::string::npos);
  CHECK(parse_error(replace(text, "format_version = 1", "format_version = 2"))
            .find("output.format_version") != std::string::npos);
  CHECK(parse_error(replace(text, "cfl_safety = 0.9", "cfl_safety = 1.5"))
            .find("solver.cfl_safety") != std::string::npos);
}

TEST_CASE("defaults and comments") {
  const std::string text =
      "[grid]\n[medium]\n; comment\n[control1]\n[probe]\n[physics]\n"
      "[solver]\nt_end = 1 # trailing comment\n[output]\n";
  const RunConfig cfg = parse_config(text);
  CHECK(cfg.grid.nx == 400);
  CHECK(cfg.solver.t_end == 1.0);
  CHECK(cfg.medium.z1 == cfg.grid.z_min);
  CHECK(cfg.initial == InitialState::zero);
  CHECK(cfg.solver.x_transport == XTransport::lattice);
}

TEST_CASE("counter-propagating beam in full mode is unsupported") {
  const std::string text = slurp(test::preset("fig3.cfg"));
  CHECK(parse_error(replace(text, "mode = advection", "mode = full")).find("control2") !=
        std::string::npos);
}
