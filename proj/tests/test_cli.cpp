#include "support.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

int llbfilm(const std::string& args, const fs::path& dir) {
  const std::string cmd = std::string("\"") + LLBFILM_EXE + "\" " + args + " > \"" +
                          (dir / "stdout.txt").string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write(const fs::path& dir, const std::string& name, const std::string& text) {
  std::ofstream(dir / name) << text;
  return dir / name;
}

std::size_t count_files(const fs::path& dir) {
  if (!fs::exists(dir)) return 0;
  return std::size_t(std::distance(fs::directory_iterator(dir), fs::directory_iterator()));
}

const char* small =
    "grid.nx = 8\ngrid.ny = 8\ngrid.nz = 2\ngrid.h = 0.2\n"
    "params.gamma = 1\nparams.L = 0.5\nparams.A = 0.05\nsim.dt = 0.001\n";

}  // namespace

TEST_CASE("simulate with t_end = 0 writes one snapshot") {
  const fs::path dir = test::scratch_dir("cli_sim");
  const fs::path cfg = write(dir, "run.cfg", std::string(small) + "sim.t_end = 0\n");
  CHECK(llbfilm("simulate --config " + cfg.string() + " --out " + (dir / "out").string(), dir) == 0);
  CHECK(count_files(dir / "out" / "snapshots") == 1);
  CHECK(fs::exists(dir / "out" / "manifest.txt"));
  CHECK(fs::exists(dir / "out" / "diagnostics.csv"));
}

TEST_CASE("configuration and usage errors exit with 2") {
  const fs::path dir = test::scratch_dir("cli_errors");
  const fs::path bad = write(dir, "bad.cfg", "grid.nx = 0\nwhat = 1\n");
  CHECK(llbfilm("simulate --config " + bad.string(), dir) == 2);
  std::stringstream out;
  out << std::ifstream(dir / "stdout.txt").rdbuf();
  CHECK(out.str().find("line 1") != std::string::npos);
  CHECK(out.str().find("line 2") != std::string::npos);

  CHECK(llbfilm("frobnicate", dir) == 2);
  const fs::path explicit_params = write(dir, "explicit.cfg", small);
  CHECK(llbfilm("sweep --config " + explicit_params.string() + " --out " + (dir / "sw").string(), dir) == 2);
}

TEST_CASE("check-inequalities and stray-oracle succeed") {
  const fs::path dir = test::scratch_dir("cli_checks");
  const fs::path cfg = write(dir, "run.cfg", small);
  CHECK(llbfilm("check-inequalities --count 10 --config " + cfg.string(), dir) == 0);
  CHECK(llbfilm("stray-oracle --field slab --config " + cfg.string(), dir) == 0);
}

TEST_CASE("emit-plot-data on an empty sweep writes nothing") {
  const fs::path dir = test::scratch_dir("cli_plot");
  fs::create_directories(dir / "in");
  write(dir / "in", "sweep.csv", "# rule,h,quantity,name,value\n");
  CHECK(llbfilm("emit-plot-data --input " + (dir / "in").string() + " --out " + (dir / "plot").string(), dir) == 0);
  CHECK(count_files(dir / "plot") == 0);
}

TEST_CASE("limit-residual needs three snapshots") {
  const fs::path dir = test::scratch_dir("cli_limit");
  const fs::path cfg = write(dir, "run.cfg", std::string(small) + "sim.t_end = 0\n");
  REQUIRE(llbfilm("simulate --config " + cfg.string() + " --out " + (dir / "out").string(), dir) == 0);
  CHECK(llbfilm("limit-residual --input " + (dir / "out").string(), dir) == 2);
}
