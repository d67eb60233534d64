#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "doctest.h"
#include "superosc/cli/commands.hpp"
#include "superosc/cli/config.hpp"
#include "superosc/cli/table.hpp"

using namespace superosc;
using namespace superosc::cli;
namespace fs = std::filesystem;

namespace {

struct TempConfig {
  fs::path path;
  explicit TempConfig(const std::string& text) {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("superosc_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".json");
    std::ofstream(path) << text;
  }
  ~TempConfig() { fs::remove(path); }
};

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::string& command, const std::string& text, const Overrides& o = {}) {
  TempConfig cfg(text);
  std::ostringstream out, err;
  const int code = run_cli(command, cfg.path.string(), o, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::vector<std::string> split(const std::string& l) {
  std::vector<std::string> v;
  std::stringstream ss(l);
  for (std::string c; std::getline(ss, c, ',');) v.push_back(c);
  return v;
}

const std::string kSequence = R"({
  "physics": {"m": 1, "omega": 1, "hbar": 1, "d": 1},
  "sequence": {"a": 2, "p": [1], "n": 10},
  "study": {"x": {"lo": -1, "hi": 1, "count": 201}}
})";

const std::string kEvolve = R"({
  "physics": {"m": 1, "omega": 1, "hbar": 1, "d": 1},
  "force": {"kind": "constant", "f0": [0.3]},
  "sequence": {"a": 2, "p": [1], "n": 6},
  "study": {"t": [0.0, 0.3], "x": [-0.5, 0.5], "methods": ["mode_sum", "operator_series"]}
})";

}  // namespace

TEST_CASE("number formatting is fixed and round-trip exact") {
  CHECK(format_number(1.0, 17) == "1.0000000000000000e+00");
  CHECK(format_number(-0.1, 3) == "-1.00e-01");
  CHECK(format_number(std::nan(""), 17) == "nan");
  const double v = 0.1 + 0.2;
  CHECK(std::stod(format_number(v, 17)) == v);
}

TEST_CASE("strict configuration parsing") {
  CHECK_NOTHROW(parse_config(kSequence, "sequence"));
  SUBCASE("unknown keys are errors") {
    const std::string bad = R"({"physics": {"m": 1, "omega": 1, "hbar": 1, "d": 1, "mass": 2},
      "sequence": {"a": 2, "p": [1], "n": 10}, "study": {"x": [0.0]}})";
    try {
      parse_config(bad, "sequence");
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("physics.mass") != std::string::npos);
    }
    const std::string top = R"({"physics": {"m": 1, "omega": 1, "hbar": 1, "d": 1},
      "sequence": {"a": 2, "p": [1], "n": 10}, "study": {"x": [0.0]}, "extra": 1})";
    CHECK_THROWS_AS(parse_config(top, "sequence"), ConfigError);
  }
  SUBCASE("missing blocks") {
    const std::string no_force = R"({"physics": {"m": 1, "omega": 1, "hbar": 1, "d": 1},
      "sequence": {"a": 2, "p": [1], "n": 10}, "study": {"t": [0.1], "x": [0.0]}})";
    try {
      parse_config(no_force, "evolve");
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("force") != std::string::npos);
    }
  }
  SUBCASE("parse errors report the line") {
    const std::string broken = "{\n  \"physics\": {\"m\": 1,\n  \"omega\" 1}\n}";
    try {
      parse_config(broken, "sequence");
      FAIL("expected a config error");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("value checks") {
    const std::string bad_mass = R"({"physics": {"m": -1, "omega": 1, "hbar": 1, "d": 1},
      "sequence": {"a": 2, "p": [1], "n": 10}, "study": {"x": [0.0]}})";
    CHECK_THROWS_AS(parse_config(bad_mass, "sequence"), ConfigError);
    const std::string bad_method = R"({"physics": {"m": 1, "omega": 1, "hbar": 1, "d": 1},
      "force": {"kind": "zero"}, "sequence": {"a": 2, "p": [1], "n": 10},
      "study": {"t": [0.1], "x": [0.0], "methods": ["spectral"]}})";
    CHECK_THROWS_AS(parse_config(bad_method, "evolve"), ConfigError);
    CHECK_THROWS_AS(parse_config(kSequence, "plot"), ConfigError);
  }
  SUBCASE("grids") {
    const auto cfg = parse_config(kSequence, "sequence");
    REQUIRE(cfg.sequence_study.x.size() == 201);
    CHECK(cfg.sequence_study.x.front() == -1.0);
    CHECK(cfg.sequence_study.x.back() == 1.0);
  }
}

TEST_CASE("flags override file values") {
  auto cfg = parse_config(R"({"physics": {"m": 1, "omega": 1, "hbar": 1, "d": 1},
    "sequence": {"a": 2, "p": [1], "n": 10}, "study": {"x": [0.0], "tolerance": 1e-3},
    "output": {"format": "csv", "path": "a.csv"}})",
                          "sequence");
  Overrides o;
  o.format = "json";
  o.tol = 1e-9;
  o.out = "b.json";
  apply_overrides(cfg, o);
  CHECK(cfg.output.format == "json");
  CHECK(cfg.output.path == "b.json");
  CHECK(cfg.sequence_study.tolerance == 1e-9);
}

TEST_CASE("sequence command output contract") {
  const auto r = run("sequence", kSequence);
  REQUIRE(r.code == kExitOk);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 202);
  CHECK(ls[0] ==
        "x,fn_product_re,fn_product_im,fn_sum_re,fn_sum_im,dual_form_rel_diff,limit_re,limit_im,"
        "limit_error,k_loc");
  const auto mid = split(ls[101]);
  CHECK(std::stod(mid[0]) == 0.0);
  CHECK(std::stod(mid[8]) == 0.0);
  for (std::size_t i = 1; i < ls.size(); ++i) CHECK(std::stod(split(ls[i])[5]) <= 1e-12);
  // Deterministic output.
  CHECK(run("sequence", kSequence).out == r.out);
  // A tolerance the data cannot meet is a breach.
  Overrides tight;
  tight.tol = 1e-300;
  CHECK(run("sequence", kSequence, tight).code == kExitTolerance);
}

TEST_CASE("evolve command") {
  const auto r = run("evolve", kEvolve);
  REQUIRE(r.code == kExitOk);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 5);
  CHECK(ls[0] ==
        "t,x,datum_re,datum_im,mode_sum_re,mode_sum_im,operator_series_re,operator_series_im,"
        "dev_mode_sum_vs_operator_series");
  // The t = 0 rows carry the datum.
  for (int i : {1, 2}) {
    const auto c = split(ls[i]);
    CHECK(std::stod(c[2]) == doctest::Approx(std::stod(c[4])).epsilon(1e-13));
    CHECK(std::stod(c[3]) == doctest::Approx(std::stod(c[5])).epsilon(1e-13));
  }
  std::string caustic = kEvolve;
  caustic.replace(caustic.find("[0.0, 0.3]"), 10, "[1.5707963267948966]");
  const auto c = run("evolve", caustic);
  CHECK(c.code == kExitDomain);
  CHECK(c.err.find("t* =") != std::string::npos);
  Overrides json;
  json.format = "json";
  const auto j = run("evolve", kEvolve, json);
  REQUIRE(j.code == kExitOk);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["rows"].size() == 4);
  CHECK(doc["meta"].contains("library_version"));
}

TEST_CASE("singularity command marks the crossing time") {
  const std::string cfg = R"({
    "physics": {"m": 1, "omega": 1, "hbar": 1, "d": 1},
    "force": {"kind": "zero"},
    "sequence": {"a": 0.5, "p": [1], "n": 10},
    "study": {"t": {"lo": 0.01, "hi": 1.56, "count": 156}, "x0": [0.0]},
    "output": {"format": "json"}
  })";
  const auto r = run("singularity", cfg);
  REQUIRE(r.code == kExitOk);
  const auto doc = nlohmann::json::parse(r.out);
  const double predicted = doc["meta"]["predicted_crossing_time"].get<double>();
  CHECK(predicted == doctest::Approx(std::acos(0.5)));
  CHECK(std::abs(doc["meta"]["crossing_time"].get<double>() - predicted) <= 0.01 + 1e-12);
  for (const auto& row : doc["rows"]) {
    CHECK(std::abs(row["collapsed"].get<double>() - 1.0) < 1e-12);
    CHECK(std::abs(row["k_loc_cos"].get<double>() - 0.5) < 1e-8);
  }
}

TEST_CASE("persistence command") {
  const std::string good = R"({
    "physics": {"m": 1, "omega": 0, "hbar": 1, "d": 1},
    "persistence": {"lattice": {"n": [6], "p": [1]},
                    "field": {"kind": "random", "seed": 3, "stride": 3}},
    "study": {"t": [0.0, 1.0, 4.0]}
  })";
  const auto r = run("persistence", good);
  REQUIRE(r.code == kExitOk);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 4);
  CHECK(ls[0] ==
        "t,roundtrip_defect,commutation_defect,kernel_sum_defect,period_initial_defect,"
        "period_evolved_defect,period_passed");
  const std::string bad = R"({
    "physics": {"m": 1, "omega": 0, "hbar": 1, "d": 1},
    "persistence": {"lattice": {"n": [6], "p": [1]},
                    "field": {"kind": "modes", "modes": [{"k": [1], "re": 1}, {"k": [2], "re": 1}]},
                    "period": [1.0]},
    "study": {"t": [1.0]}
  })";
  const auto b = run("persistence", bad);
  CHECK(b.code == kExitDomain);
  CHECK(b.err.find("defect") != std::string::npos);
}

TEST_CASE("exit codes for unreadable and invalid configs") {
  std::ostringstream out, err;
  CHECK(run_cli("sequence", "/nonexistent/config.json", {}, out, err) == kExitConfig);
  CHECK(run("sequence", "{not json").code == kExitConfig);
}
