#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "config.hpp"

namespace fs = std::filesystem;
using klab::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("klab_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

nlohmann::json load(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("exit code matrix") {
  const auto d = scratch("matrix");
  struct Case {
    std::vector<std::string> args;
    int code;
  };
  const std::vector<Case> cases{
      {{"verify", "--l", "2", "--suites", "all"}, 0},
      {{"verify", "--l", "4", "--suites", "taming", "--M", "2", "--M-box=-1,1,0,3"}, 1},
      {{"verify", "--suites", "obstruction", "--turns", "5", "--degree", "4"}, 1},
      {{"verify", "--suites", "obstruction", "--turns", "inf", "--degree", "40"}, 1},
      {{"verify", "--suites", "obstruction", "--turns", "2", "--degree", "3"}, 0},
      {{"verify", "--suites", "nonsense"}, 2},
      {{"verify", "--suites", "obstruction", "--turns", "many"}, 2},
      {{"build", "--l", "1"}, 2},
      {{"build", "--a", "1.5"}, 2},
      {{"build", "--l", "3"}, 0},
      {{"plot", "--kind", "bogus"}, 2},
      {{"plot", "--kind", "surface_obj"}, 0},
      {{"lift", "--n", "3", "--m", "3"}, 0},
      {{"lift", "--n", "40", "--m", "6"}, 2},
      {{"lift", "--n", "2"}, 2},
      {{"lift", "--n", "2", "--A", "[[1,0],[0]]"}, 2},
      {{"frobnicate"}, 2},
      {{}, 2},
      {{"build", "--unknown-flag"}, 2},
      {{"lift", "--n", "3", "--A", "[[1e300,0,0],[0,0,0],[0,0,0]]", "--m", "1"}, 0},
      {{"verify", "--l", "5", "--suites", "graphlike"}, 2},
  };
  for (const auto& c : cases) {
    auto args = c.args;
    if (!args.empty() && args.front() != "frobnicate") args.insert(args.end(), {"--out", d.string()});
    CAPTURE(args.empty() ? std::string("<none>") : args.front());
    const Run r = run(args);
    CHECK(r.code == c.code);
  }
}

TEST_CASE("numerical failure exits 3") {
  const auto d = scratch("numerical");
  // (1 + y²) overflows, so p is not finite along the section.
  const Run r = run({"verify", "--suites", "taming", "--y-grid", "1e200", "--out", d.string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("numerical failure") != std::string::npos);
}

TEST_CASE("verify writes a report with hash, seed and conventions even on failure") {
  const auto d = scratch("report");
  const Run r = run({"verify", "--l", "4", "--suites", "taming", "--M", "2", "--M-box", "[-1,1,0,3]", "--out", d.string()});
  CHECK(r.code == 1);
  const auto j = load(d / "report.json");
  CHECK(j["pass"] == false);
  CHECK(j["config_hash"].get<std::string>().size() == 16);
  CHECK(j["seed"].is_number());
  CHECK(!j["conventions"].empty());
  bool saw_bound = false;
  for (const auto& s : j["suites"]) {
    if (s["suite"] == "m_bound") {
      saw_bound = true;
      CHECK(s["pass"] == false);
      CHECK(s["details"][0]["bound"].get<double>() == doctest::Approx(5.75));
    }
  }
  CHECK(saw_bound);
}

TEST_CASE("build writes every artifact") {
  const auto d = scratch("build");
  REQUIRE(run({"build", "--l", "4", "--M", "4", "--out", d.string()}).code == 0);
  for (const char* name : {"surface.obj", "surface_points.csv", "snake.csv", "section_y0.csv", "taming.json"}) {
    CHECK(fs::exists(d / name));
  }
  const auto t = load(d / "taming.json");
  CHECK(t["M"] == 4.0);
  CHECK(t["m"] == 7);
  CHECK(t["equilibria"].size() == 4);
  const auto obj = slurp(d / "surface.obj");
  std::size_t tags = 0;
  for (std::size_t pos = 0; (pos = obj.find("# equilibrium", pos)) != std::string::npos; ++pos) ++tags;
  CHECK(tags == 4);
}

TEST_CASE("lift prints the generator and basis") {
  const auto d = scratch("lift");
  const Run r = run({"lift", "--n", "1", "--m", "3", "--A", "[[1]]", "--out", d.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["generator"]["rows"] == nlohmann::json::parse("[[0,0,0,0],[0,1,0,0],[0,0,2,0],[0,0,0,3]]"));
  CHECK(j["basis"] == nlohmann::json::parse("[[0],[1],[2],[3]]"));
  const auto big = nlohmann::json::parse(run({"lift", "--n", "3", "--m", "3", "--out", d.string()}).out);
  CHECK(big["dim"] == 20);
  CHECK(big["generator"]["rows"].size() == 20);
}

TEST_CASE("config file, flag precedence and KOOPMAN_LAB_OUT") {
  const auto d = scratch("config");
  fs::create_directories(d);
  std::ofstream(d / "cfg.json") << R"({"l": 3, "a": 0.4, "seed": 99, "output_dir": ")" << (d / "from_file").string()
                                << "\"}";
  REQUIRE(run({"build", "--config", (d / "cfg.json").string()}).code == 0);
  CHECK(load(d / "from_file" / "taming.json")["l"] == 3);

  ::setenv("KOOPMAN_LAB_OUT", (d / "from_env").c_str(), 1);
  REQUIRE(run({"build", "--config", (d / "cfg.json").string(), "--l", "2"}).code == 0);
  CHECK(load(d / "from_env" / "taming.json")["l"] == 2);
  REQUIRE(run({"build", "--out", (d / "from_flag").string()}).code == 0);
  CHECK(fs::exists(d / "from_flag" / "taming.json"));
  ::unsetenv("KOOPMAN_LAB_OUT");

  std::ofstream(d / "bad.json") << R"({"l": 3, "colour": "blue"})";
  CHECK(run({"build", "--config", (d / "bad.json").string(), "--out", d.string()}).code == 2);
  std::ofstream(d / "broken.json") << "{";
  CHECK(run({"build", "--config", (d / "broken.json").string(), "--out", d.string()}).code == 2);
  std::ofstream(d / "tol.json") << R"({"tolerances": {"koopman": -1}})";
  CHECK(run({"verify", "--config", (d / "tol.json").string(), "--out", d.string()}).code == 2);
}

TEST_CASE("unwritable output directory exits 2") {
  const auto d = scratch("blocked");
  fs::create_directories(d.parent_path());
  std::ofstream(d) << "a file, not a directory";
  CHECK(run({"build", "--out", d.string()}).code == 2);
  CHECK(run({"verify", "--suites", "obstruction", "--out", (d / "sub").string()}).code == 2);
}

TEST_CASE("plot reruns are byte-identical and the hash ignores output_dir") {
  const auto a = scratch("plot_a");
  const auto b = scratch("plot_b");
  for (const auto& dir : {a, b}) {
    REQUIRE(run({"plot", "--l", "4", "--M", "4", "--kind", "cross_section", "--y", "0", "--out", dir.string()}).code == 0);
    REQUIRE(run({"plot", "--l", "4", "--M", "4", "--kind", "contour_csv", "--y", "0", "--out", dir.string()}).code == 0);
  }
  for (const char* name : {"cross_section_l4_y0.svg", "contours_l4_y0.csv"}) {
    const auto first = slurp(a / name);
    CHECK(!first.empty());
    CHECK(first == slurp(b / name));
  }
}

TEST_CASE("config hash depends on parameters only") {
  klab::cli::RunConfig x, y;
  klab::cli::resolve(x);
  y.output_dir = "elsewhere";
  klab::cli::resolve(y);
  CHECK(klab::cli::config_hash(x) == klab::cli::config_hash(y));
  y.seed += 1;
  CHECK(klab::cli::config_hash(x) != klab::cli::config_hash(y));
  CHECK(klab::cli::parse_number_list("[1, -2.5,3]") == std::vector<double>{1, -2.5, 3});
  CHECK_THROWS(klab::cli::parse_number_list("1,x"));
}
