// Copyright 2026 The winlayer Authors
// SPDX-License-Identifier: Apache-2.0

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "report.hpp"
#include "run_config.hpp"

using namespace winlayer;
using namespace winlayer::cli;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(WINLAYER_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("winlayer_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("numbers accept pi forms") {
  CHECK(parse_config("[layers]\nd = pi\n").d == kPi);
  CHECK(parse_config("[layers]\nd = pi/2\n").d == kPi / 2);
  CHECK(parse_config("[layers]\nd = 0.5*pi\n").d == 0.5 * kPi);
  CHECK(parse_config("[layers]\nd = 1.25\n").d == 1.25);
}

TEST_CASE("unknown keys, sections and bad values are config errors") {
  CHECK_THROWS_AS(parse_config("[layers]\nwidth = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nonsense]\nd = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("d = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[layers]\nd = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nh = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("", {"grid.h"}), ConfigError);
  CHECK_THROWS_AS(parse_config("", {"critical.t_lo=5", "critical.t_hi=2"}), ConfigError);
  CHECK_THROWS_AS(parse_config("", {"gap_law.eps=0.05,0.1"}), ConfigError);
  CHECK_THROWS_AS(parse_config("", {"layers.d=pi/2", "solve.half_domain=true"}), ConfigError);
  CHECK_THROWS_AS(parse_config("[window]\nshape = profile\n"), ConfigError);
}

TEST_CASE("single-level or unordered ladders are rejected") {
  CHECK_THROWS_AS(parse_config("", {"convergence.ladder=0.1"}), ConfigError);
  CHECK_THROWS_AS(parse_config("", {"convergence.ladder=0.05,0.1,0.025"}), ConfigError);
  CHECK_THROWS_AS(parse_config("", {"solve.refine_ladder=0.1"}), ConfigError);
  CHECK_NOTHROW(parse_config("", {"solve.refine_ladder=0.2,0.1,0.05"}));
}

TEST_CASE("overrides apply on top of the file") {
  const RunConfig c = parse_config("[window]\nradius = 2\n[grid]\nh = 0.2\n", {"window.radius=3.5"});
  CHECK(c.window.radius == 3.5);
  CHECK(c.numerics.grid.h_rho == 0.2);
  CHECK(c.numerics.grid.h_z == 0.2);
  CHECK(c.disk_radius("bounds") == 3.5);
}

TEST_CASE("config hash is stable and tracks every effective value") {
  const RunConfig a = parse_config("");
  const RunConfig b = parse_config("[layers]\nd = pi\n");
  CHECK(a.hash() == b.hash());
  CHECK(a.hash().size() == 16);
  CHECK(parse_config("", {"window.radius=1.0000000001"}).hash() != a.hash());
  CHECK(parse_config("", {"sweep.tolerance=1e-9"}).hash() != a.hash());
  // FNV-1a 64 reference values.
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("echo round-trips through the parser") {
  const RunConfig c = parse_config("", {"layers.d=pi/3", "gap_law.eps=0.2,0.1", "window.radius=2.7"});
  std::ostringstream ini;
  for (const auto& [section, keys] : c.echo()) {
    ini << '[' << section << "]\n";
    for (const auto& [k, v] : keys) ini << k << " = " << v << '\n';
  }
  const RunConfig back = parse_config(ini.str());
  CHECK(back.hash() == c.hash());
  CHECK(back.d == c.d);
}

TEST_CASE("fmt gives shortest round-trip text") {
  CHECK(fmt(0.25) == "0.25");
  CHECK(fmt(1.0) == "1");
  CHECK(std::stod(fmt(kPi)) == kPi);
  CHECK(std::stod(fmt(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("table rendering and csv") {
  Table t({"a", "bb"});
  t.add({"1", "2"});
  t.add({"333", "4"});
  CHECK(t.csv() == "a,bb\n1,2\n333,4\n");
  CHECK(t.render().find("333  4") != std::string::npos);
}

TEST_CASE("bounds command: values and deterministic JSON") {
  const RunConfig c = parse_config("", {"window.radius=5"});
  Artifacts a("bounds");
  run_command("bounds", c, a);
  const nlohmann::json doc = nlohmann::json::parse(a.json_text(c));
  CHECK(doc["command"] == "bounds");
  CHECK(doc["config_hash"] == c.hash());
  const auto& r = doc["result"];
  CHECK(r["layers"]["threshold_shift"].get<double>() == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(r["layers"]["gamma"] == 2);
  const double j01 = oracle::bessel_zero_in(0, false, 2.0, 3.0);
  CHECK(r["brackets"][0]["lower"].get<double>() == doctest::Approx(0.25));
  CHECK(r["brackets"][0]["upper"].get<double>() == doctest::Approx(0.25 + j01 * j01 / 25.0).epsilon(1e-12));
  CHECK(r["count_bounds"]["min_count"] == 3);
  CHECK(r["count_bounds"]["max_count"] == 8);

  Artifacts b("bounds");
  run_command("bounds", c, b);
  CHECK(a.json_text(c) == b.json_text(c));
  CHECK(a.json_text(c).find("wall") == std::string::npos);
}

TEST_CASE("artifacts are written with provenance lines") {
  const RunConfig c = parse_config("", {"window.radius=2"});
  Artifacts a("bounds");
  run_command("bounds", c, a);
  const fs::path dir = scratch_dir("write");
  a.write(c, dir.string(), 0.5);
  REQUIRE(fs::exists(dir / "bounds.json"));
  REQUIRE(fs::exists(dir / "bounds.txt"));
  std::ifstream csv(dir / "brackets.csv");
  std::string first;
  std::string header;
  std::getline(csv, first);
  std::getline(csv, header);
  CHECK(first == "# winlayer " + std::string(kToolVersion) + " command=bounds config_hash=" + c.hash());
  CHECK(header == "index,lower,upper,mu_neumann,mu_dirichlet");
  fs::remove_all(dir);
}

TEST_CASE("solve ladder and base rings") {
  const RunConfig c = parse_config("", {"grid.h=0.1", "grid.grading_rings=12", "grid.grading_ratio=0.5"});
  const auto ladder = solve_ladder(c);
  REQUIRE(ladder.size() == 3);
  CHECK(ladder[0] == doctest::Approx(0.2));
  CHECK(ladder[1] == doctest::Approx(0.1));
  CHECK(ladder[2] == doctest::Approx(0.05));
  // With ratio 1/2 the ring count grows by one per halving; the middle level
  // (h = 0.1) keeps the configured 12 rings.
  CHECK(ladder_base_rings(c.numerics.grid, ladder, 0.1) == 11);
}

TEST_CASE("unknown commands are rejected") {
  Artifacts a("nope");
  CHECK_THROWS(run_command("nope", parse_config(""), a));
  CHECK(command_names().size() == 8);
}

TEST_CASE("binary: malformed config exits 2 and writes nothing") {
  const fs::path dir = scratch_dir("bad");
  const fs::path ini = fs::temp_directory_path() / "winlayer_test_cli_bad.ini";
  {
    std::ofstream f(ini);
    f << "[window]\nradius = 2\nbogus = 1\n";
  }
  CHECK(run_cli("bounds -c " + ini.string() + " -o " + dir.string()) == 2);
  CHECK_FALSE(fs::exists(dir));
  CHECK(run_cli("bounds -s layers.d=7 -o " + dir.string()) == 2);
  CHECK_FALSE(fs::exists(dir));
  CHECK(run_cli("frobnicate") == 2);
  fs::remove(ini);
}

TEST_CASE("binary: bounds run succeeds and writes the artifacts") {
  const fs::path dir = scratch_dir("ok");
  CHECK(run_cli("bounds -q -s window.radius=3 -o " + dir.string()) == 0);
  CHECK(fs::exists(dir / "bounds.json"));
  CHECK(fs::exists(dir / "brackets.csv"));
  fs::remove_all(dir);
}
