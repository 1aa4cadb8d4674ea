#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

const std::string bin = BLOWUP_LAB_BIN;

struct RunResult {
  int exit_code = -1;
  std::string out;  // captured stdout
};

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() /
               ("blowup_cli_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  REQUIRE(out.good());
}

// Runs `prefix bin args`, captures stdout into a file, discards stderr.
RunResult run(const std::string& args, const fs::path& dir,
              const std::string& env_prefix = "") {
  fs::path cap = dir / "stdout.txt";
  std::string cmd = env_prefix + "\"" + bin + "\" " + args + " > \"" +
                    cap.string() + "\" 2> \"" + (dir / "stderr.txt").string() +
                    "\"";
  int rc = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  res.out = slurp(cap);
  return res;
}

}  // namespace

TEST_CASE("params: stdout carries only the manifest path") {
  fs::path dir = fresh_dir("params");
  fs::path out = dir / "run";
  RunResult res =
      run("params --preset B --out \"" + out.string() + "\"", dir);
  CHECK(res.exit_code == 0);

  std::string expected = (out / "manifest.json").string() + "\n";
  CHECK(res.out == expected);
  REQUIRE(fs::exists(out / "manifest.json"));

  auto man = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(man["exponents"]["alpha0"].get<double>() == doctest::Approx(3));
  CHECK(man["exponents"]["beta0"].get<double>() == doctest::Approx(4));
  CHECK(man["constants"]["lambda"].get<double>() ==
        doctest::Approx(60).epsilon(1e-9));
  fs::remove_all(dir);
}

TEST_CASE("missing config and preset is a usage error") {
  fs::path dir = fresh_dir("usage");
  RunResult res = run("params --out \"" + dir.string() + "\"", dir);
  CHECK(res.exit_code == 2);
  CHECK(res.out.empty());
  fs::remove_all(dir);
}

TEST_CASE("degenerate coupling exits with the domain code") {
  fs::path dir = fresh_dir("degen");
  fs::path cfg = dir / "degen.cfg";
  spit(cfg, "p = 2\nN = 3\nm = 1\nq = 1\nalpha = 0\nbeta = 0\n");
  RunResult res = run("params --config \"" + cfg.string() + "\" --out \"" +
                          (dir / "o").string() + "\"",
                      dir);
  CHECK(res.exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("missing required key exits with the domain code") {
  fs::path dir = fresh_dir("missing");
  fs::path cfg = dir / "m.cfg";
  spit(cfg, "p = 2\nN = 3\nm = 1\nalpha = 0\nbeta = 0\n");
  RunResult res = run("params --config \"" + cfg.string() + "\" --out \"" +
                          (dir / "o").string() + "\"",
                      dir);
  CHECK(res.exit_code == 2);
  std::string err = slurp(dir / "stderr.txt");
  CHECK(err.find("missing required key 'q'") != std::string::npos);
  CHECK(err.find("m.cfg:6") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("bounded regime solve exits with the budget code") {
  fs::path dir = fresh_dir("budget");
  fs::path cfg = dir / "g.cfg";
  spit(cfg, "p = 2\nN = 3\nm = 0.5\nq = 1\nalpha = 0\nbeta = 0\n"
            "max_steps = 30000\n");
  RunResult res = run("solve --config \"" + cfg.string() + "\" --out \"" +
                          (dir / "o").string() + "\"",
                      dir);
  CHECK(res.exit_code == 3);
  fs::remove_all(dir);
}

TEST_CASE("solve writes solution, profile and manifest") {
  fs::path dir = fresh_dir("solve");
  fs::path out = dir / "run";
  RunResult res = run("solve --preset B --v0 2 --out \"" + out.string() + "\"",
                      dir);
  REQUIRE(res.exit_code == 0);
  CHECK(fs::exists(out / "solution.csv"));
  CHECK(fs::exists(out / "profile.csv"));

  auto man = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(man["config"]["v0"].get<double>() == 2.0);
  CHECK(man["solution"]["R_hat"].get<double>() > 0);
  CHECK(man["verification"]["converged"].get<bool>());

  std::string head = slurp(out / "solution.csv").substr(0, 13);
  CHECK(head == "r,W,U,v,V,S\n1");
  fs::remove_all(dir);
}

TEST_CASE("figures rejects an unknown preset name") {
  fs::path dir = fresh_dir("figbad");
  RunResult res =
      run("figures --preset nope --out \"" + dir.string() + "\"", dir);
  CHECK(res.exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("figures renders one chart per preset") {
  fs::path dir = fresh_dir("figs");
  fs::path out = dir / "run";
  RunResult res =
      run("figures --preset A --out \"" + out.string() + "\"", dir);
  REQUIRE(res.exit_code == 0);
  CHECK(fs::exists(out / "figure_A.svg"));
  CHECK(fs::exists(out / "profile_A.csv"));
  CHECK(slurp(out / "figure_A.svg").find("<svg") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("seed env var overrides the config seed") {
  fs::path dir = fresh_dir("seed");
  fs::path out = dir / "run";
  RunResult res = run("flow --preset B --out \"" + out.string() + "\"", dir,
                      "BLOWUP_LAB_SEED=123 ");
  REQUIRE(res.exit_code == 0);
  auto man = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(man["config"]["seed"].get<std::uint64_t>() == 123);
  CHECK(man["equilibria"]["points"].size() == 2);
  fs::remove_all(dir);
}

TEST_CASE("a subcommand is required") {
  fs::path dir = fresh_dir("nosub");
  RunResult res = run("", dir);
  CHECK(res.exit_code != 0);
  fs::remove_all(dir);
}
