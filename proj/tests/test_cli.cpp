#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {
const char* kCli = SEMIFLOW_CLI_PATH;
const char* kScenarios = SEMIFLOW_SCENARIO_DIR;

int run(const std::string& args) {
  const int ret = std::system((std::string(kCli) + " " + args +
                               " > /dev/null 2>&1")
                                  .c_str());
  return (ret >> 8) & 0xff;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("semiflow_cli_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string scenario(const std::string& name) {
  return (fs::path(kScenarios) / name).string();
}
}  // namespace

TEST_CASE("run subcommand produces artifacts and exits zero") {
  auto out = fresh_dir("run");
  const int code = run("run --config " + scenario("heat.json") + " --out " +
                       out.string() + " --dump-states final");
  CHECK(code == 0);
  CHECK(fs::exists(out / "heat_report.json"));
  CHECK(fs::exists(out / "heat_trajectory.csv"));
  CHECK(fs::exists(out / "heat_state_final.csv"));

  const std::string report = slurp(out / "heat_report.json");
  CHECK(report.find("apriori_bound") != std::string::npos);
  CHECK(report.find("selection_accuracy") != std::string::npos);
}

TEST_CASE("runs are byte-for-byte deterministic") {
  auto out1 = fresh_dir("det1");
  auto out2 = fresh_dir("det2");
  const std::string base =
      "run --config " + scenario("heat.json") + " --seed 7 --dump-states all";
  REQUIRE(run(base + " --out " + out1.string()) == 0);
  REQUIRE(run(base + " --out " + out2.string()) == 0);
  for (const auto& name : {"heat_report.json", "heat_trajectory.csv"}) {
    CHECK(slurp(out1 / name) == slurp(out2 / name));
    CHECK(!slurp(out1 / name).empty());
  }
}

TEST_CASE("config errors exit with code 2") {
  auto out = fresh_dir("badcfg");
  fs::path bad = out / "bad.json";
  std::ofstream(bad) << "{\"name\": \"bad\", \"mode\": \"run\"";  // truncated
  CHECK(run("run --config " + bad.string() + " --out " + out.string()) == 2);

  fs::path wrong = out / "wrong.json";
  std::ofstream(wrong)
      << R"({"name":"w","mode":"run","grid":{"kind":"circle"}})";
  CHECK(run("run --config " + wrong.string() + " --out " + out.string()) == 2);

  // mode mismatch between config and subcommand
  CHECK(run("perturbed --config " + scenario("heat.json") + " --out " +
            out.string()) == 2);
}

TEST_CASE("failed estimates exit with code 1") {
  auto out = fresh_dir("fail");
  const int code =
      run("run --config " + scenario("heat.json") + " --out " + out.string() +
          " --slack-override apriori_bound=1e-9");
  CHECK(code == 1);
  CHECK(fs::exists(out / "heat_report.json"));

  CHECK(run("run --config " + scenario("negative_loose_tol.json") + " --out " +
            out.string()) == 1);
}

TEST_CASE("bad override syntax exits with code 2") {
  auto out = fresh_dir("badflag");
  CHECK(run("run --config " + scenario("heat.json") + " --out " + out.string() +
            " --slack-override apriori_bound=abc") == 2);
}

TEST_CASE("perturbed and dtn subcommands") {
  auto out = fresh_dir("modes");
  CHECK(run("perturbed --config " + scenario("picard_small_data.json") +
            " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "picard_small_data_fixedpoint.json"));
  CHECK(run("dtn --config " + scenario("dtn_constant.json") + " --out " +
            out.string()) == 0);
  CHECK(fs::exists(out / "dtn_constant_report.json"));
}

TEST_CASE("verify runs the bundled manifest") {
  auto out = fresh_dir("verify");
  CHECK(run("verify --config " + scenario("suite.json") + " --out " +
            out.string()) == 0);
  CHECK(run("verify --config " + out.string() + "/missing.json --out " +
            out.string()) == 2);
}
