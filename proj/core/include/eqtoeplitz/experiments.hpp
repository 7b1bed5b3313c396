#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "eqtoeplitz/common.hpp"

namespace eqt::cli {

/// Everything a named experiment reads. Empty grids mean "use the experiment's defaults".
struct ExperimentConfig {
  std::string experiment;
  std::vector<double> t;
  std::vector<int> N;
  std::vector<int> L;
  int padding = -1;
  std::string group;                           // JSON text accepted by parse_group_json; empty: default group
  std::map<std::string, std::string> symbols;  // name -> JSON symbol spec
  std::map<std::string, double> tolerances;    // overrides of the experiment's tolerances
  std::uint64_t seed = 20240917;
  std::string output;                          // output directory; empty: default
};

/// Parses and validates; ConfigError messages carry line/column or the offending field.
ExperimentConfig parse_config(const std::string& text);
std::string serialize_config(const ExperimentConfig& c);

struct Row {
  std::string label;
  double t = 0.0;
  int N = 0;
  int L = 0;
  cplx value{0.0};
  cplx oracle{0.0};
  double deviation = 0.0;
  double tolerance = 0.0;
  bool asserted = true;
  bool pass() const { return !asserted || deviation <= tolerance; }
};

struct Check {
  std::string name;
  bool pass = false;
  double deviation = 0.0;
  double tolerance = 0.0;
  std::string detail;
  bool asserted = true;
};

struct ExperimentResult {
  std::string experiment;
  int criterion = 0;
  std::vector<Row> rows;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  double seconds = 0.0;

  bool pass() const;
  /// Largest deviation / tolerance over asserted checks and rows with a positive tolerance.
  double worst_ratio() const;
  double worst_deviation() const;
};

struct CatalogEntry {
  std::string name;
  int criterion = 0;  // 0: auxiliary
  std::string description;
  std::function<ExperimentResult(const ExperimentConfig&)> run;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& find_experiment(const std::string& name);
/// Throws if names repeat or a criterion 1..10 is missing or doubled.
void validate_catalog();

ExperimentResult run_experiment(const ExperimentConfig& c);

/// CSV: label,t,N,L,value_re,value_im,oracle_re,oracle_im,deviation,tolerance,asserted,pass
std::string to_csv(const ExperimentResult& r);
std::string summary_json(const ExperimentResult& r);

/// Runs, writes <out>/<name>.csv and <out>/<name>.summary.json, returns 0 iff every asserted tolerance is met.
int run(const ExperimentConfig& c, std::ostream& log);

}  // namespace eqt::cli
