// Copyright 2025 The dusc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "dusc/cli.hpp"
#include "nlohmann/json.hpp"

namespace dusc {
namespace test_cli {

namespace fs = std::filesystem;

static fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("dusc_test_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

static fs::path write_cfg(const std::string &name, const std::string &body) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << body;
  return p;
}

static int run(const std::string &args) {
  const std::string cmd = std::string(DUSC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

static std::string slurp_without_timestamp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("# timestamp", 0) != 0) out << line << "\n";
  return out.str();
}

SCENARIO("Config parsing") {
  const RunConfig c = parse_config_string(
      "# comment\nL = 8\nJ_values = 0.3, 0.5 1.0\nd_values = -1, 0, +1\n"
      "geometry = macro\nquantity = opmi  # trailing\nseed = 0x10\n");
  CHECK(c.L == 8);
  CHECK(c.j_grid() == std::vector<double>{0.3, 0.5, 1.0});
  REQUIRE(c.d_values.size() == 3);
  CHECK(c.d_values[0].twice == -2);
  CHECK(c.d_values[2].twice == 2);
  CHECK(c.geometry == Geometry::Macro);
  CHECK(c.master_seed == 16);
  CHECK(c.echo.size() == 6);
  CHECK_NOTHROW(validate(c, "scan"));

  CHECK(parse_d("-1/2").twice == -1);
  CHECK_THROWS_AS(parse_d("x"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("bogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("L 8\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("L = eight\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_string("geometry = disc\n"), ConfigError);
  CHECK_THROWS_AS(validate(parse_config_string("L = 7\n"), "scan"), ConfigError);
  CHECK_THROWS_AS(validate(parse_config_string("L = 8\nd_values = -1/2\n"), "scan"), ConfigError);
  CHECK_THROWS_AS(validate(parse_config_string("L = 8\nquantity = opmi\n"), "scan"), ConfigError);
  CHECK_THROWS_AS(
      validate(parse_config_string("L = 8\ngeometry = macro\nquantity = otoc\n"), "scan"),
      ConfigError);
  CHECK_THROWS_AS(load_config((scratch() / "missing.cfg").string()), ConfigError);
}

SCENARIO("Placements") {
  RunConfig c = parse_config_string("L = 12\n");
  const Placement loc = place(c, DValue{-2}, 2);
  CHECK(loc.X == std::vector<int>{2});
  CHECK(loc.Y == std::vector<int>{4});
  c.geometry = Geometry::Macro;
  for (int twice : {-2, 0, 2})
    for (int t = 1; t <= 2; ++t) {
      const Placement p = place(c, DValue{twice}, t);
      if (!p.fits) continue;
      CHECK(p.X.back() == 2);
      CHECK(p.Y.front() == ring_site(2 + 2 * t + twice, 12));
      // X and Y sit on different layers but never share a site except at d < 0
      const std::size_t total = p.X.size() + p.Y.size();
      CHECK(int(total) == 12 - (2 * t + twice - 1) - 2 * t);
    }
  CHECK(in_window(c, DValue{0}, 5));
  CHECK_FALSE(in_window(c, DValue{-2}, 5));
  CHECK(cone_clear(c, DValue{2}, 2));
  CHECK_FALSE(cone_clear(c, DValue{2}, 3));
}

SCENARIO("Command-line exit codes") {
  GIVEN("an odd ring") {
    const auto cfg = write_cfg("odd.cfg", "L = 7\n");
    CHECK(run("verify --config " + cfg.string()) == kConfig);
    CHECK(run("scan --config " + cfg.string()) == kConfig);
  }
  GIVEN("an unknown key or missing file") {
    CHECK(run("scan --config " + write_cfg("bad.cfg", "L = 8\ncolour = red\n").string()) == kConfig);
    CHECK(run("scan --config " + (scratch() / "none.cfg").string()) == kConfig);
    CHECK(run("scan") == kConfig);
  }
  GIVEN("a small verify run") {
    const auto cfg = write_cfg("v.cfg", "L = 4\nJ = 0.5\nn_samples = 2\nt_max = 2\nmaster_seed = 3\n");
    CHECK(run("verify --config " + cfg.string()) == kOk);
    WHEN("a gate is corrupted") {
      const auto bad = write_cfg("vc.cfg", "L = 4\nn_samples = 1\nt_max = 1\ncorrupt_gate = true\n");
      CHECK(run("verify --config " + bad.string()) == kAssertion);
    }
  }
  GIVEN("a request over budget") {
    CHECK(run("spectrum --config " + write_cfg("sb.cfg", "kind = T3\nd_values = -2\n").string()) ==
          kBudget);
    CHECK(run("verify --config " + write_cfg("vb.cfg", "L = 12\nn_samples = 1\n").string()) ==
          kBudget);
  }
}

SCENARIO("Reproducible output") {
  const auto cfg = write_cfg("s.cfg",
                             "L = 10\nJ = 0.5\nn_samples = 6\nt_min = 1\nt_max = 2\n"
                             "d_values = -1, 1\nmaster_seed = 77\n");
  const auto o1 = scratch() / "o1.csv", o2 = scratch() / "o2.csv", o3 = scratch() / "o3.csv";
  REQUIRE(run("scan --config " + cfg.string() + " --output " + o1.string()) == kOk);
  REQUIRE(run("scan --config " + cfg.string() + " --output " + o2.string() + " --threads 3") == kOk);
  CHECK(slurp_without_timestamp(o1) == slurp_without_timestamp(o2));
  // off-cone cells are exact, so a new seed changes the provenance and the last digits only
  REQUIRE(run("scan --config " + cfg.string() + " --output " + o3.string() + " --seed 78") == kOk);
  CHECK(slurp_without_timestamp(o1) != slurp_without_timestamp(o3));

  const auto oj = scratch() / "o.json";
  REQUIRE(run("scan --config " + cfg.string() + " --format json --output " + oj.string()) == kOk);
  std::ifstream in(oj);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["provenance"]["master_seed"] == "77");
  CHECK(j["rows"].size() == 4);
  for (const auto &row : j["rows"]) CHECK(row["pass"] == true);
}

}  // namespace test_cli
}  // namespace dusc
