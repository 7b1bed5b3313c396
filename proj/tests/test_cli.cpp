#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>

#include "eqtoeplitz/experiments.hpp"
#include "eqtoeplitz/io.hpp"
#include "json.hpp"

using namespace eqt;
using namespace eqt::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / "eqt-test-cli" / name;
  fs::remove_all(p);
  return p;
}

std::string config_error(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(R"({"experiment": "thm1-trace", "t": [2, 6], "N": 300, "L": [0, 1],
    "padding": 12, "tolerances": {"stokes": 1e-9}, "seed": 5,
    "symbols": {"f": {"type": "laurent", "terms": [{"j": 1, "k": 0, "c": 1}]}}})");
  CHECK(c.experiment == "thm1-trace");
  CHECK(c.t == std::vector<double>{2, 6});
  CHECK(c.N == std::vector<int>{300});
  CHECK(c.L == std::vector<int>{0, 1});
  CHECK(c.padding == 12);
  CHECK(c.tolerances.at("stokes") == 1e-9);
  CHECK(c.seed == 5);
  CHECK(c.symbols.count("f") == 1);

  const std::string once = serialize_config(c);
  CHECK(serialize_config(parse_config(once)) == once);

  const auto g = parse_config(R"({"experiment": "cut-independence", "group": {"symmetric": {"m": 2, "half_angle": 0.3}}})");
  CHECK_FALSE(g.group.empty());
  CHECK(serialize_config(parse_config(serialize_config(g))) == serialize_config(g));
}

TEST_CASE("config errors") {
  const auto syntax = config_error("{\"experiment\": \"eq8\",\n  \"t\": [5,]\n}");
  CHECK(syntax.find("line 2") != std::string::npos);
  CHECK(syntax.find("column") != std::string::npos);

  CHECK(config_error(R"({"experiment": "eq8", "tt": [5]})").find("'tt'") != std::string::npos);
  CHECK(config_error(R"({"experiment": "eq8", "t": []})").find("nonempty") != std::string::npos);
  CHECK(config_error(R"({"experiment": "eq8", "t": [1.0]})").find("'t'") != std::string::npos);
  CHECK(config_error(R"({"experiment": "eq8", "N": [0]})").find("'N'") != std::string::npos);
  CHECK(config_error(R"({"experiment": "eq8", "L": [-1]})").find("'L'") != std::string::npos);
  CHECK(config_error(R"({"experiment": "eq8", "tolerances": {"relative": 0}})").find("tolerances.relative") !=
        std::string::npos);
  CHECK(config_error(R"({"experiment": "eq8", "tolerances": {"relative": -1e-3}})").find("positive") !=
        std::string::npos);
  CHECK(config_error(R"({"t": [5]})").find("'experiment'") != std::string::npos);
  CHECK(config_error(R"({"experiment": "no-such-thing"})").find("no-such-thing") != std::string::npos);
  CHECK(config_error(R"([1, 2])").find("object") != std::string::npos);
  CHECK_THROWS_AS(find_experiment("nope"), ConfigError);
}

TEST_CASE("catalog covers criteria 1 to 10 once each") {
  CHECK_NOTHROW(validate_catalog());
  std::set<int> crit;
  std::set<std::string> names;
  for (const auto& e : catalog()) {
    CHECK(names.insert(e.name).second);
    CHECK_FALSE(e.description.empty());
    if (e.criterion) CHECK(crit.insert(e.criterion).second);
  }
  CHECK(crit.size() == 10);
  CHECK(*crit.begin() == 1);
  CHECK(*crit.rbegin() == 10);
}

TEST_CASE("run eq8 at t = 5 writes CSV and summary") {
  ExperimentConfig c;
  c.experiment = "eq8";
  c.t = {5.0};
  c.output = scratch("eq8").string();
  std::ostringstream log;
  CHECK(run(c, log) == 0);
  const auto csv = io::read_file(fs::path(c.output) / "eq8.csv");
  const auto rows = csv_rows(csv);
  REQUIRE(rows.size() >= 2);
  CHECK(rows[0][0] == "label");
  CHECK(rows[0].size() == 12);
  int near_pi = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].size() == 12 && std::abs(std::stod(rows[i][4]) - pi) < 1e-6) ++near_pi;
  CHECK(near_pi == 3);

  const auto s = nlohmann::json::parse(io::read_file(fs::path(c.output) / "eq8.summary.json"));
  CHECK(s.at("experiment") == "eq8");
  CHECK(s.at("criterion") == 1);
  CHECK(s.at("pass") == true);
  CHECK(s.at("checks").size() >= 1);

  // Same config, same bytes.
  std::ostringstream log2;
  CHECK(run(c, log2) == 0);
  CHECK(io::read_file(fs::path(c.output) / "eq8.csv") == csv);
}

TEST_CASE("thm1 with f = g gives zero traces") {
  auto c = parse_config(R"({"experiment": "thm1-trace", "t": [6], "N": [60],
    "symbols": {"f": {"type": "laurent", "terms": [{"j": 1, "k": 0, "c": 1}, {"j": 0, "k": 2, "c": 1}]},
                "g": {"type": "laurent", "terms": [{"j": 1, "k": 0, "c": 1}, {"j": 0, "k": 2, "c": 1}]}}})");
  c.output = scratch("thm1").string();
  const auto r = run_experiment(c);
  CHECK(r.pass());
  int traces = 0;
  for (const auto& row : r.rows)
    if (row.N == 60) {
      CHECK(row.value == cplx(0.0));
      ++traces;
    }
  CHECK(traces >= 1);
}

TEST_CASE("thm3 with a tiny truncation grid fails its tolerance") {
  auto c = parse_config(R"({"experiment": "thm3-commutator", "N": [8, 16]})");
  c.output = scratch("thm3").string();
  std::ostringstream log;
  CHECK(run(c, log) == 1);
  CHECK(log.str().find("FAIL") != std::string::npos);
}
