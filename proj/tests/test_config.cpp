#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "swmac/config.hpp"
#include "swmac/error.hpp"

using namespace swmac;

namespace {

RunConfig parse(const std::string& text, const std::filesystem::path& base = ".") {
  std::istringstream in(text);
  return parse_config(in, "test.toml", base);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "no error";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("TOML subset") {
  std::istringstream in(R"(# comment
a = 1
b = -2.5e-1   # trailing comment
s = "x # not a comment"
flag = true
arr = [1, [2, 3], "q"]

[sec]
k = false
)");
  const TomlTable t = parse_toml(in);
  CHECK(std::get<double>(t.at("a").value) == 1);
  CHECK(t.at("a").integer);
  CHECK_FALSE(t.at("b").integer);
  CHECK(std::get<double>(t.at("b").value) == -0.25);
  CHECK(std::get<std::string>(t.at("s").value) == "x # not a comment");
  CHECK(std::get<bool>(t.at("flag").value));
  const auto& arr = std::get<TomlValue::Array>(t.at("arr").value);
  REQUIRE(arr.size() == 3);
  CHECK(std::get<TomlValue::Array>(arr[1].value).size() == 2);
  CHECK_FALSE(std::get<bool>(t.at("sec.k").value));
  CHECK(t.at("sec.k").line == 9);
}

TEST_CASE("TOML errors name the line") {
  std::istringstream dup("a = 1\na = 2\n");
  CHECK_THROWS_WITH_AS(parse_toml(dup, "f"), doctest::Contains("f:2"), ConfigError);
  std::istringstream bad("a = 1\n\nb = [1, 2\n");
  CHECK_THROWS_WITH_AS(parse_toml(bad, "f"), doctest::Contains("f:3"), ConfigError);
  std::istringstream noval("x =\n");
  CHECK_THROWS_AS(parse_toml(noval), ConfigError);
}

TEST_CASE("minimal config gets defaults") {
  const RunConfig c = parse("case = \"paraboloid\"\ngrid = 100\n");
  CHECK(c.case_name == "paraboloid");
  CHECK(c.nx == 100);
  CHECK(c.ny == 100);
  CHECK(c.g == 9.81);
  CHECK_FALSE(c.dt);
  CHECK_FALSE(c.cfl);
  CHECK(c.output.dir == "out");
  CHECK(c.output.stride == 0);
  CHECK(c.output.vtk);
  CHECK(c.revolutions == 1.0);

  const CaseDefinition d = make_case(c);
  CHECK(std::get<FixedStep>(d.time_step).dt == doctest::Approx(0.005));
}

TEST_CASE("config errors") {
  CHECK(contains(error_of("case = \"paraboloid\"\n"), "grid"));
  const std::string conflict = error_of("case = \"dambreak\"\ngrid = 20\n[time]\ndt = 0.1\ncfl = 0.5\n");
  CHECK(contains(conflict, "time.dt"));
  CHECK(contains(conflict, "time.cfl"));
  const std::string unknown = error_of("case = \"dambreak\"\ngrid = 20\n\nspeed = 3\n");
  CHECK(contains(unknown, "test.toml:4"));
  CHECK(contains(unknown, "speed"));
  CHECK(contains(error_of("case = \"wave\"\ngrid = 20\n"), "case"));
  CHECK(contains(error_of("case = \"dambreak\"\ngrid = [20, 30]\n"), "grid"));
  CHECK(contains(error_of("case = \"dambreak\"\ngrid = 5\n"), "grid"));
  CHECK(contains(error_of("case = \"dambreak\"\ngrid = \"big\"\n"), "test.toml:2"));
  CHECK(contains(error_of("case = \"dambreak\"\ngrid = 20\n[time]\ncfl = 2\n"), "time.cfl"));
  CHECK(contains(error_of("case = \"paraboloid\"\ngrid = 20\n[domain]\nbox = [0, 1, 0, 1]\n"), "custom"));
}

TEST_CASE("convergence grids stand in for grid") {
  const RunConfig c = parse("case = \"paraboloid\"\n[convergence]\ngrids = [100, 200]\n");
  CHECK(c.grids == std::vector<int>{100, 200});
  CHECK(c.nx == 100);
}

TEST_CASE("case knobs") {
  const RunConfig c = parse(R"(case = "dambreak"
grid = 40
[time]
cfl = 0.4
t_end = 2
[dambreak]
breach = [90, 160]
)");
  const CaseDefinition d = make_case(c);
  CHECK(std::get<CflStep>(d.time_step).factor == 0.4);
  CHECK(d.t_end == 2.0);
  CHECK(c.breach[0] == 90);
}

TEST_CASE("overrides win over the file") {
  RunConfig c = parse("case = \"paraboloid\"\ngrid = 20\n[time]\ndt = 0.01\n");
  Overrides o;
  o.grid = 40;
  o.cfl = 0.5;
  o.out = "elsewhere";
  apply_overrides(c, o);
  validate(c);
  CHECK(c.nx == 40);
  CHECK_FALSE(c.dt);
  CHECK(*c.cfl == 0.5);
  CHECK(c.output.dir == "elsewhere");
  Overrides both;
  both.dt = 0.1;
  both.cfl = 0.5;
  CHECK_THROWS_AS(apply_overrides(c, both), ConfigError);
}

TEST_CASE("custom case with a bed table") {
  const auto dir = std::filesystem::temp_directory_path() / "swmac_test_config";
  std::filesystem::create_directories(dir);
  {
    std::ofstream t(dir / "bed.txt");
    t << "0 0.5\n1 1.5\n";
  }
  const RunConfig c = parse(R"(case = "custom"
grid = [4, 2]
[time]
dt = 0.01
t_end = 0.05
[domain]
box = [0, 2, 0, 1]
z_file = "bed.txt"
free_surface = 2
)",
                            dir);
  CHECK(c.custom.z_table.size() == 2);
  const CaseDefinition d = make_case(c);
  CHECK(d.topography(0.25, 0.25) == 0);
  CHECK(d.topography(1.75, 0.75) == 1.5);
  CHECK(*d.free_surface == 2);
  CHECK(d.nx == 4);
  CHECK(d.ny == 2);

  CHECK(contains(error_of(R"(case = "custom"
grid = 4
[time]
dt = 0.01
t_end = 1
[domain]
box = [0, 1, 0, 1]
h0 = "1"
z_file = "missing.txt"
)"),
                 "domain.z_file"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("custom case with expressions") {
  const RunConfig c = parse(R"toml(case = "custom"
grid = 10
[time]
cfl = 0.5
t_end = 0.1
[domain]
box = [0, 1, 0, 1]
obstacles = [[0.4, 0.6, 0, 0.5]]
h0 = "if(x < 0.5, 2, 1)"
u1 = "0.1"
)toml");
  const CaseDefinition d = make_case(c);
  CHECK(d.h0(0.2, 0.5) == 2);
  CHECK(d.u0(0.2, 0.5)[0] == 0.1);
  CHECK(d.u0(0.2, 0.5)[1] == 0);
  CHECK(d.domain.obstacles.size() == 1);
  CHECK(contains(error_of("case = \"custom\"\ngrid = 4\n[domain]\nbox = [0, 1, 0, 1]\nh0 = \"1\"\n"), "time"));
}
