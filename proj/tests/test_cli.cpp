#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << text;
  return path.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run(const std::string& args) {
  const std::string cmd =
      std::string(PIC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("bound verb reproduces the reference report") {
  auto in = write_temp("cli_p1.json",
                       R"({"m":6,"absent":[[3],[1,2,3,4],[3,4,5,6]]})");
  auto out = (fs::temp_directory_path() / "cli_p1_report.json").string();
  CHECK(run("bound --in " + in + " --out " + out) == 0);
  auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["lb_algorithmic"] == 5);
  CHECK(j["closed_form"] == 5);
  CHECK(j["beta_confirmed"] == 5);
  // determinism across runs
  auto first = slurp(out);
  CHECK(run("bound --in " + in + " --out " + out) == 0);
  CHECK(slurp(out) == first);
}

TEST_CASE("verify verb distinguishes success, failure, and usage errors") {
  auto in = write_temp("cli_p2.json",
                       R"({"m":5,"absent":[[1,2],[1,2,4],[1,3],[1,3,5]]})");
  auto good = write_temp(
      "cli_p2_code.json",
      R"({"q":2,"rows":[[0,0,1,0,1],[1,0,0,0,0],[0,1,0,0,0],[0,0,0,1,0]]})");
  auto bad = write_temp("cli_p2_short.json",
                        R"({"q":2,"rows":[[1,0,0,0,0],[0,1,0,0,0]]})");
  CHECK(run("verify --in " + in + " --code " + good) == 0);
  CHECK(run("verify --in " + in + " --code " + bad) == 1);
  CHECK(run("verify --in " + in) == 2);                    // missing flag
  CHECK(run("verify --in /nonexistent --code " + good) == 2);
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("construct emits a code that verify accepts") {
  auto in = write_temp("cli_p1b.json",
                       R"({"m":6,"absent":[[3],[1,2,3,4],[3,4,5,6]]})");
  auto code = (fs::temp_directory_path() / "cli_p1_code.json").string();
  CHECK(run("construct --in " + in + " --out " + code) == 0);
  auto j = nlohmann::json::parse(slurp(code));
  CHECK(j["rows"].size() == 5);
  CHECK(run("verify --in " + in + " --code " + code) == 0);
}

TEST_CASE("trace export round-trips as JSON") {
  auto in = write_temp("cli_p1c.json",
                       R"({"m":6,"absent":[[3],[1,2,3,4],[3,4,5,6]]})");
  auto out = (fs::temp_directory_path() / "cli_p1_trace.json").string();
  CHECK(run("trace --in " + in + " --policy lookahead --emit-trace " + out) ==
        0);
  auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["order"].size() == 6);
  CHECK(j.contains("skipped"));
  CHECK(j.contains("hits"));
  for (const auto& step : j["steps"]) {
    CHECK((step["kind"] == "decode" || step["kind"] == "skip" ||
           step["kind"] == "avoid"));
  }
  CHECK(run("trace --in " + in + " --policy sideways") == 2);
}

TEST_CASE("sweep writes both formats") {
  auto csv = (fs::temp_directory_path() / "cli_sweep.csv").string();
  auto json = (fs::temp_directory_path() / "cli_sweep.json").string();
  CHECK(run("sweep --m 3 --max-absent 3 --q 2 --out " + csv) == 0);
  CHECK(slurp(csv).rfind("canonical_absent", 0) == 0);
  CHECK(run("sweep --m 3 --max-absent 3 --q 2 --format json --out " + json) ==
        0);
  CHECK(nlohmann::json::parse(slurp(json)).is_array());
}
