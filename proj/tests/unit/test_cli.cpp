#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "io.hpp"

namespace fs = std::filesystem;
using blowup::cli::run_command;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const fs::path p = fs::temp_directory_path() / "blowup_cli_tests";
  fs::create_directories(p);
  return p;
}

fs::path write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

fs::path portrait_file(const std::string& direction, double horizon, int nre, int nim) {
  json spec = {{"chart", "XY"},
               {"grid", {{"re", {-2, 2}}, {"im", {-1, 1}}, {"counts", {nre, nim}}, {"fixed", 0}}},
               {"horizon", horizon},
               {"time_direction", direction}};
  return write("portrait_" + direction + std::to_string(nre) + ".json", spec.dump());
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("trees table") {
    const auto r = run({"trees", "--max-m", "16"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    std::vector<std::int64_t> counts;
    for (const auto& row : doc["rows"]) counts.push_back(row["count"].get<std::int64_t>());
    CHECK(counts == std::vector<std::int64_t>{1, 1, 2, 3, 6, 14, 34, 95, 280, 854, 2694, 8714, 28640, 95640, 323396});
  }

  TEST_CASE("detour of the quartic blow-up") {
    const auto r = run({"detour", "catalog:scalar_poly?m=4", "--cycles", "3"});
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    CHECK(doc["closed"].get<bool>());
    CHECK(doc["windings"]["w_t"].get<int>() == 3);
  }

  TEST_CASE("classify the degenerate caricature") {
    const auto r = run({"classify", "catalog:galerkin_symmetric?a=2"});
    REQUIRE(r.code == 0);
    int nonsemisimple = 0;
    bool origin = false;
    const json doc = json::parse(r.out);
    for (const auto& e : doc["equilibria"]) {
      if (e["chart"] != "UZ") continue;
      const double z = e["location"][1][0].get<double>();
      if (std::abs(z) < 1e-12) origin = std::abs(e["eigenvalues"][0][0].get<double>() + 1.0) < 1e-12;
      else nonsemisimple += !e["semisimple"].get<bool>();
    }
    CHECK(origin);
    CHECK(nonsemisimple == 2);
  }

  TEST_CASE("system files") {
    const auto good = write("x2.json", R"({"name": "x2", "f": [[2,0,1,0],[2,1,0,0]], "g": [[0,1,-1,0]]})");
    const auto r = run({"catalog", "show", "scalar_poly"});
    REQUIRE(r.code == 0);
    const auto classify = run({"classify", good.string()});
    REQUIRE(classify.code == 0);
    CHECK(json::parse(classify.out)["degree"] == 2);

    const auto bad = write("neg.json", R"({"f": [[-1,0,1,0]], "g": [[0,1,1,0]]})");
    const auto e = run({"classify", bad.string()});
    CHECK(e.code == 2);
    const auto err = json::parse(e.err);
    CHECK(err["error"] == "ParseError");
    CHECK(err["message"].get<std::string>().find("f[0]") != std::string::npos);

    const auto constant = write("const.json", R"({"f": [[0,0,1,0]], "g": []})");
    CHECK(json::parse(run({"classify", constant.string()}).err)["error"] == "DegreeZero");
    const auto text = write("text.json", R"({"f": [[1,0,"a",0]], "g": []})");
    CHECK(run({"classify", text.string()}).code == 2);
  }

  TEST_CASE("exit codes and error lines") {
    auto r = run({"classify", "catalog:unknown"});
    CHECK(r.code == 2);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    r = run({"linearize", "catalog:galerkin_symmetric?a=0.5", "--eq", "3"});
    CHECK(r.code == 3);
    CHECK(json::parse(r.err)["error"] == "ResonantAtOrder");
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"holonomy", "catalog:riccati", "--eq", "99"}).code == 2);
  }

  TEST_CASE("integrate writes the trajectory CSV") {
    const auto path = write("semi.json", R"({"segments": [{"type": "line", "from": 0, "to": 0.5},
      {"type": "arc", "center": 1, "radius": 0.5, "angle_from": 3.141592653589793, "angle_to": 0},
      {"type": "line", "from": 1.5, "to": 2}]})");
    const auto r = run({"integrate", "catalog:scalar_poly", "--path", path.string(), "--start", "1,0"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("s,re_t,im_t,chart,re_c1,im_c1,re_c2,im_c2\n", 0) == 0);
    // Last row: t = 2 in chart UZ with u = 1/x = -1.
    const auto last = r.out.substr(r.out.rfind('\n', r.out.size() - 2) + 1);
    CHECK(last.find(",UZ,-1.0000000000") != std::string::npos);
  }

  TEST_CASE("Riccati portraits") {
    const auto real = portrait_file("Real", 12.0, 8, 5);
    auto r = run({"portrait", "catalog:riccati", "--portrait", real.string(), "--svg", (scratch() / "r.svg").string(),
                  "--csv", (scratch() / "r.csv").string(), "--reproducible", "--jobs", "4"});
    REQUIRE(r.code == 0);
    auto doc = json::parse(r.out);
    REQUIRE(doc["seeds"].size() == 40);
    int done = 0, sink = 0;
    for (const auto& s : doc["seeds"]) {
      if (s["status"] != "Completed") continue;
      ++done;
      sink += std::hypot(s["end"][0][0].get<double>() + 1.0, s["end"][0][1].get<double>()) < 0.05;
    }
    CHECK(sink >= 0.9 * done);

    const auto imag = portrait_file("Imaginary", M_PI, 8, 5);
    r = run({"portrait", "catalog:riccati", "--portrait", imag.string(), "--svg", (scratch() / "i.svg").string(), "--csv",
             (scratch() / "i.csv").string()});
    REQUIRE(r.code == 0);
    doc = json::parse(r.out);
    int back = 0;
    done = 0;
    for (const auto& s : doc["seeds"]) {
      if (s["status"] != "Completed") continue;
      ++done;
      back += std::hypot(s["end"][0][0].get<double>() - s["start"][0][0].get<double>(),
                         s["end"][0][1].get<double>() - s["start"][0][1].get<double>()) < 0.01;
    }
    CHECK(back >= 0.9 * done);
  }

  TEST_CASE("empty grid gives axes only") {
    const auto spec = portrait_file("Real", 1.0, 0, 0);
    const auto svg = scratch() / "empty.svg";
    REQUIRE(run({"portrait", "catalog:riccati", "--portrait", spec.string(), "--svg", svg.string(), "--csv",
                 (scratch() / "empty.csv").string(), "--reproducible"})
                .code == 0);
    std::ifstream in(svg);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text.find("<line") != std::string::npos);
    CHECK(text.find("<path") == std::string::npos);
    CHECK(text.find("metadata") == std::string::npos);
  }

  TEST_CASE("BLOWUP_JOBS overrides --jobs") {
    ::setenv("BLOWUP_JOBS", "3", 1);
    CHECK(blowup::cli::resolve_jobs(8) == 3);
    ::unsetenv("BLOWUP_JOBS");
    CHECK(blowup::cli::resolve_jobs(8) == 8);
    CHECK(blowup::cli::resolve_jobs(0) == 1);
  }

  TEST_CASE("seventeen significant digits") {
    CHECK(blowup::cli::dump(json(0.1), -1) == "0.10000000000000001");
    CHECK(blowup::cli::fmt17(1.0 / 3.0) == "0.33333333333333331");
  }
}
