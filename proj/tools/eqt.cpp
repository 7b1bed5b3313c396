// Command line runner for the named experiments.
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "eqtoeplitz/experiments.hpp"
#include "eqtoeplitz/io.hpp"
#include "eqtoeplitz/parallel.hpp"

int main(int argc, char** argv) {
  using namespace eqt;
  CLI::App app{"eqt: truncated Toeplitz experiments on weighted Bergman spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  int jobs = 1;
  std::string out;
  app.add_option("--jobs,-j", jobs, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  app.add_option("--out,-o", out, "output directory (default $EQT_OUTPUT_DIR or eqt-results)");

  auto* list = app.add_subcommand("list-experiments", "print the experiment catalog");

  auto* run = app.add_subcommand("run", "run one experiment");
  std::string config_path, experiment;
  std::vector<double> ts;
  std::vector<int> Ns, Ls;
  int padding = -1;
  auto* by_config = run->add_option("--config,-c", config_path, "JSON experiment config")->check(CLI::ExistingFile);
  auto* by_name = run->add_option("--experiment,-e", experiment, "experiment name");
  by_config->excludes(by_name);
  run->add_option("--t", ts, "weight grid");
  run->add_option("--n,--N", Ns, "truncation grid");
  run->add_option("--l,--L", Ls, "word-length grid");
  run->add_option("--padding", padding, "extra basis modes kept beyond N");
  auto* dump = app.add_subcommand("print-config", "print the normalized config for an experiment or config file");
  std::string dump_path, dump_name;
  dump->add_option("--config,-c", dump_path)->check(CLI::ExistingFile);
  dump->add_option("--experiment,-e", dump_name);

  CLI11_PARSE(app, argc, argv);

  try {
    cli::validate_catalog();
    set_worker_count(jobs);
    if (list->parsed()) {
      for (const auto& e : cli::catalog())
        std::cout << e.name << "\t" << (e.criterion ? "criterion " + std::to_string(e.criterion) : "auxiliary")
                  << "\t" << e.description << "\n";
      return 0;
    }
    auto load = [](const std::string& path, const std::string& name) {
      cli::ExperimentConfig c;
      if (!path.empty()) {
        c = cli::parse_config(io::read_file(path));
      } else if (!name.empty()) {
        c.experiment = name;
        (void)cli::find_experiment(name);
      } else {
        throw ConfigError("give --config or --experiment");
      }
      return c;
    };
    if (dump->parsed()) {
      std::cout << cli::serialize_config(load(dump_path, dump_name));
      return 0;
    }
    auto c = load(config_path, experiment);
    if (!ts.empty()) c.t = ts;
    if (!Ns.empty()) c.N = Ns;
    if (!Ls.empty()) c.L = Ls;
    if (padding >= 0) c.padding = padding;
    if (!out.empty()) c.output = out;
    return cli::run(c, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
