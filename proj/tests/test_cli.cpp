#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "swmac_test_cli";

std::string cli() {
  const char* p = std::getenv("SWMAC_CLI");
  REQUIRE_MESSAGE(p != nullptr, "SWMAC_CLI must point at the swmac executable");
  return p;
}

/// Runs the CLI with stdout/stderr captured to `log`; returns the exit code.
int swmac(const std::string& args, const std::string& env = "", std::string* output = nullptr) {
  fs::create_directories(kRoot);
  const fs::path log = kRoot / "log.txt";
  const std::string cmd = env + " '" + cli() + "' " + args + " > '" + log.string() + "' 2>&1";
  const int status = std::system(cmd.c_str());
  if (output) {
    std::ifstream in(log);
    std::ostringstream s;
    s << in.rdbuf();
    *output = s.str();
  }
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
  fs::create_directories(kRoot);
  const fs::path p = kRoot / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  std::string out;
  CHECK(swmac("frobnicate", "", &out) == 2);
  CHECK(swmac("run --grid", "", &out) == 2);
  CHECK(swmac("run '" + (kRoot / "nope.toml").string() + "'", "", &out) == 2);
  CHECK(out.find("nope.toml") != std::string::npos);
}

TEST_CASE("config errors exit with 2 and name the key") {
  const fs::path p = write_config("nogrid.toml", "case = \"dambreak\"\n");
  std::string out;
  CHECK(swmac("run '" + p.string() + "'", "", &out) == 2);
  CHECK(out.find("grid") != std::string::npos);
  CHECK(swmac("run --case dambreak --grid 20 --dt 0.1 --cfl 0.5", "", &out) == 2);
}

TEST_CASE("solver failure exits with 1") {
  // a time step far above the positivity bound
  const fs::path dir = kRoot / "blowup";
  std::string out;
  CHECK(swmac("run --case dambreak --grid 10 --dt 50 --tend 200 --out '" + dir.string() + "'", "", &out) == 1);
  CHECK(out.find("cell") != std::string::npos);
}

TEST_CASE("run writes snapshots, diagnostics and a summary") {
  const fs::path dir = kRoot / "run";
  fs::remove_all(dir);
  const fs::path p = write_config("dam.toml", R"(case = "dambreak"
grid = 20
[time]
t_end = 1
[output]
stride = 5
)");
  CHECK(swmac("run '" + p.string() + "' --out '" + dir.string() + "'") == 0);
  CHECK(fs::exists(dir / "snapshot_000000.csv"));
  CHECK(fs::exists(dir / "snapshot_000002.vtk"));
  CHECK(fs::exists(dir / "summary.json"));
  const std::string diag = slurp(dir / "diagnostics.csv");
  CHECK(diag.rfind("t,mass,", 0) == 0);
  // dt = 10/25 = 0.4: steps at 0.4 and 0.8
  CHECK(std::count(diag.begin(), diag.end(), '\n') == 3);
  const std::string summary = slurp(dir / "summary.json");
  CHECK(summary.find("\"steps\": 2") != std::string::npos);

  SUBCASE("identical runs give identical diagnostics") {
    const fs::path dir2 = kRoot / "run2";
    fs::remove_all(dir2);
    CHECK(swmac("run '" + p.string() + "' --out '" + dir2.string() + "'") == 0);
    CHECK(slurp(dir2 / "diagnostics.csv") == diag);
    CHECK(slurp(dir2 / "snapshot_000002.csv") == slurp(dir / "snapshot_000002.csv"));
  }
}

TEST_CASE("output directory precedence: flag > environment > file") {
  const fs::path file_dir = kRoot / "from_file", env_dir = kRoot / "from_env", flag_dir = kRoot / "from_flag";
  for (const auto& d : {file_dir, env_dir, flag_dir}) fs::remove_all(d);
  const fs::path p = write_config("lake.toml", "case = \"lake_at_rest\"\ngrid = 10\n[lake]\nsteps = 3\n[output]\ndir = \"" +
                                                   file_dir.string() + "\"\n");
  CHECK(swmac("run '" + p.string() + "'") == 0);
  CHECK(fs::exists(file_dir / "summary.json"));
  CHECK(swmac("run '" + p.string() + "'", "SWMAC_OUTPUT_DIR='" + env_dir.string() + "'") == 0);
  CHECK(fs::exists(env_dir / "summary.json"));
  CHECK(swmac("run '" + p.string() + "' --out '" + flag_dir.string() + "'",
              "SWMAC_OUTPUT_DIR='" + env_dir.string() + "'") == 0);
  CHECK(fs::exists(flag_dir / "summary.json"));
}

TEST_CASE("convergence prints one row per grid") {
  const fs::path dir = kRoot / "conv";
  fs::remove_all(dir);
  std::string out;
  CHECK(swmac("convergence --case paraboloid --grids 10,20 --tend 0.5 --out '" + dir.string() + "'", "", &out) == 0);
  const std::string csv = slurp(dir / "convergence.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(out.find("20") != std::string::npos);
}

TEST_CASE("exact writes the paraboloid solution") {
  std::string out;
  CHECK(swmac("exact paraboloid 0 --grid 10", "", &out) == 0);
  CHECK(out.rfind("i,j,x_K,y_K,h,", 0) == 0);
  CHECK(swmac("exact dambreak 0 --grid 10", "", &out) == 2);
}

TEST_CASE("verify passes") {
  std::string out;
  CHECK(swmac("verify", "", &out) == 0);
  CHECK(out.find("FAIL") == std::string::npos);
}
