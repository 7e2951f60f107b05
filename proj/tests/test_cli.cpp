#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "wolfflab/runconfig.hpp"

using wolff::run_config_command;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* tag) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("wolfflab_cli_" + std::string(tag) + "_" +
                        std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunResult {
  int code = 0;
  std::string out, err;
};

RunResult run(const std::string& sub, const std::string& config,
              const fs::path& dir, bool quiet = false) {
  std::ostringstream out, err;
  RunResult r;
  r.code = run_config_command(sub, config, dir.string(), quiet, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

const char* kBallConfig = R"({
  "nfunction": {"p": 2.0, "q": 2.0, "n": 3},
  "measure": {"densities": [{"kind": "constant", "level": 1.0, "support_radius": 1.0}]},
  "wolff": {"A": 1.0, "R": "inf", "rel_tol": 1e-8},
  "grid": {"r_min": 1e-4, "r_max": 1e4, "points": 12}
})";

const char* kSolveConfig = R"({
  "command": "solve",
  "nfunction": {"p": 2.0, "q": 3.0, "n": 3},
  "gamma": 0.25,
  "measure": {"densities": [{"kind": "constant", "level": 1.0, "support_radius": 1.0, "scale": 0.01}]},
  "wolff": {"A": 1.0, "R": "inf", "rel_tol": 1e-6},
  "grid": {"r_min": 0.05, "r_max": 20.0, "points": 12},
  "iteration": {"epsilon": "auto", "max_iters": 200, "tol": 1e-5}
})";

const char* kCheckConfig = R"({
  "command": "check",
  "nfunction": {"p": 2.0, "q": 2.5, "n": 3},
  "gamma": 0.25,
  "measure": {"densities": [{"kind": "constant", "level": 1.0, "support_radius": 1.0, "scale": 0.01}]},
  "wolff": {"A": 1.0, "R": "inf", "rel_tol": 1e-8}
})";

const char* kCheckAtomConfig = R"({
  "command": "check",
  "nfunction": {"p": 2.0, "q": 2.5, "n": 3},
  "gamma": 0.25,
  "measure": {"atoms": [{"position": [0.0, 0.0, 0.0], "mass": 1.0}]},
  "wolff": {"A": 1.0, "R": "inf", "rel_tol": 1e-8}
})";

const char* kConstantsConfig = R"({
  "command": "constants",
  "nfunction": {"p": 2.0, "q": 3.0, "n": 3},
  "gamma": 0.25
})";

}  // namespace

TEST_CASE("potential run writes a profile and a metadata echo") {
  const fs::path dir = fresh_dir("wolff");
  const RunResult r = run("wolff", kBallConfig, dir);
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  REQUIRE(fs::exists(dir / "profile.csv"));
  REQUIRE(fs::exists(dir / "meta.json"));
  const std::string csv = slurp(dir / "profile.csv");
  CHECK(csv.rfind("r,value", 0) == 0);
  // First grid radius is deep inside the ball where the value is near pi.
  std::istringstream rows(csv);
  std::string header, first;
  std::getline(rows, header);
  std::getline(rows, first);
  const double v = std::stod(first.substr(first.find(',') + 1));
  CHECK(std::fabs(v - M_PI) <= 1e-4 * M_PI);
}

TEST_CASE("reruns are byte identical") {
  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  for (const char* cfg : {kBallConfig, kCheckConfig, kConstantsConfig}) {
    const std::string sub = cfg == kBallConfig
                                ? "wolff"
                                : (cfg == kCheckConfig ? "check" : "constants");
    const RunResult ra = run(sub, cfg, a);
    const RunResult rb = run(sub, cfg, b);
    CHECK(ra.code == rb.code);
    CHECK(ra.out == rb.out);
    for (const auto& entry : fs::directory_iterator(a)) {
      const fs::path other = b / entry.path().filename();
      REQUIRE(fs::exists(other));
      CHECK(slurp(entry.path()) == slurp(other));
    }
    fs::remove_all(a);
    fs::remove_all(b);
    fs::create_directories(a);
    fs::create_directories(b);
  }
}

TEST_CASE("fixed point run converges and reports through files") {
  const fs::path dir = fresh_dir("solve");
  const RunResult r = run("solve", kSolveConfig, dir);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "profile.csv"));
  CHECK(fs::exists(dir / "iterations.jsonl"));
  const std::string meta = slurp(dir / "meta.json");
  CHECK(meta.find("\"converged\": true") != std::string::npos);
  CHECK(r.out.find("converged") != std::string::npos);
}

TEST_CASE("iteration cap surfaces as the non-convergence exit code") {
  std::string cfg = kSolveConfig;
  const auto pos = cfg.find("\"max_iters\": 200");
  REQUIRE(pos != std::string::npos);
  cfg.replace(pos, 16, "\"max_iters\": 1");
  cfg.replace(cfg.find("\"tol\": 1e-5"), 11, "\"tol\": 1e-14");
  const fs::path dir = fresh_dir("noconv");
  const RunResult r = run("solve", cfg, dir);
  CHECK(r.code == 4);
  CHECK(fs::exists(dir / "profile.csv"));  // partial outputs still land
}

TEST_CASE("membership check separates finite and divergent sources") {
  const fs::path dir = fresh_dir("check");
  const RunResult ok = run("check", kCheckConfig, dir);
  CHECK(ok.code == 0);
  CHECK(fs::exists(dir / "verdicts.json"));
  const std::string doc = slurp(dir / "verdicts.json");
  CHECK(doc.find("finite") != std::string::npos);
  const fs::path dir2 = fresh_dir("check_atom");
  const RunResult bad = run("check", kCheckAtomConfig, dir2);
  CHECK(bad.code == 3);
  CHECK(fs::exists(dir2 / "verdicts.json"));
}

TEST_CASE("verification suites run end to end from a config") {
  const fs::path dir = fresh_dir("verify");
  const std::string cfg = R"({
    "command": "verify",
    "nfunction": {"p": 2.0, "q": 2.0, "n": 3},
    "measure": {"densities": [{"kind": "constant", "level": 1.0, "support_radius": 1.0}]},
    "wolff": {"A": 1.0, "R": "inf", "rel_tol": 1e-7},
    "grid": {"r_min": 0.05, "r_max": 20.0, "points": 16},
    "verify": {"suite": "lambda_inequality", "alpha": 1.0}
  })";
  const RunResult r = run("verify", cfg, dir);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "verify.json"));
  CHECK(r.out.find("pass") != std::string::npos);
}

TEST_CASE("an unachievable bound fails verification with exit code 4") {
  const fs::path dir = fresh_dir("verify_fail");
  const std::string cfg = R"({
    "command": "verify",
    "nfunction": {"p": 2.0, "q": 3.0, "n": 3},
    "gamma": 0.25,
    "measure": {"densities": [{"kind": "constant", "level": 1.0, "support_radius": 1.0, "scale": 0.01}]},
    "wolff": {"A": 1.0, "R": "inf", "rel_tol": 1e-6},
    "grid": {"r_min": 0.05, "r_max": 20.0, "points": 10},
    "iteration": {"epsilon": "auto", "max_iters": 200, "tol": 1e-5},
    "verify": {"suite": "lower_bound", "C": 1e6}
  })";
  const RunResult r = run("verify", cfg, dir);
  CHECK(r.code == 4);
  CHECK(r.out.find("fail") != std::string::npos);
}

TEST_CASE("constants run prints and stores the bundle") {
  const fs::path dir = fresh_dir("constants");
  const RunResult r = run("constants", kConstantsConfig, dir);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "constants.json"));
  const std::string doc = slurp(dir / "constants.json");
  CHECK(doc.find("0.0020130634042948") != std::string::npos);
  CHECK(r.out.find("c_star") != std::string::npos);
  const fs::path dir2 = fresh_dir("constants_quiet");
  const RunResult q = run("constants", kConstantsConfig, dir2, true);
  CHECK(q.code == 0);
  CHECK(q.out.empty());
}

TEST_CASE("configuration failures exit with code 2 and one error object") {
  const fs::path dir = fresh_dir("bad");
  {
    const RunResult r = run("wolff", "{ not json", dir);
    CHECK(r.code == 2);
    CHECK(r.err.rfind("{\"error\":", 0) == 0);
    CHECK(r.err.find("\"type\"") != std::string::npos);
    CHECK(r.err.find("\"message\"") != std::string::npos);
  }
  {
    std::string cfg = kBallConfig;
    cfg.insert(cfg.rfind('}'), R"(, "surprise": 1)");
    const RunResult r = run("wolff", cfg, dir);
    CHECK(r.code == 2);
    CHECK(r.err.find("surprise") != std::string::npos);
  }
  {
    // The embedded command key must agree with the subcommand.
    const RunResult r = run("wolff", kCheckConfig, dir);
    CHECK(r.code == 2);
  }
  {
    const RunResult r = run("frobnicate", kBallConfig, dir);
    CHECK(r.code == 2);
  }
  {
    // Validation failures inside the domain layer map to 2 as well.
    std::string cfg = kBallConfig;
    const auto pos = cfg.find("\"p\": 2.0");
    cfg.replace(pos, 8, "\"p\": 0.5");
    const RunResult r = run("wolff", cfg, dir);
    CHECK(r.code == 2);
  }
}

TEST_CASE("untruncated critical growth maps to the regime exit code") {
  const fs::path dir = fresh_dir("regime");
  const std::string cfg = R"({
    "nfunction": {"p": 3.0, "q": 3.0, "n": 3},
    "measure": {"atoms": [{"position": [0.0, 0.0, 0.0], "mass": 1.0}]},
    "wolff": {"A": 1.0, "R": "inf", "rel_tol": 1e-8},
    "grid": {"r_min": 0.1, "r_max": 10.0, "points": 4}
  })";
  const RunResult r = run("wolff", cfg, dir);
  CHECK(r.code == 3);
  CHECK(r.err.find("regime") != std::string::npos);
}

TEST_CASE("installed binary round trip") {
  const char* cli = std::getenv("WOLFFLAB_CLI");
  if (cli == nullptr || cli[0] == '\0') {
    MESSAGE("WOLFFLAB_CLI not set, skipping the process-level smoke run");
    return;
  }
  const fs::path dir = fresh_dir("binary");
  const fs::path cfg_path = dir / "config.json";
  {
    std::ofstream out(cfg_path);
    out << kBallConfig;
  }
  const fs::path out_dir = dir / "out";
  const std::string cmd = std::string("\"") + cli + "\" wolff --config " +
                          cfg_path.string() + " --out " + out_dir.string() +
                          " --quiet";
  const int raw = std::system(cmd.c_str());
  REQUIRE(raw != -1);
  CHECK(WEXITSTATUS(raw) == 0);
  CHECK(fs::exists(out_dir / "profile.csv"));
}
