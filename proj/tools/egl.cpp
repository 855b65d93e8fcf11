// egl: command-line driver for the vorticity-gradient growth lab.
//
//   egl constants --set A=2 --set C3=1 --set mode=theoretical --precision 60
//   egl init --config run.cfg --output out
//   egl run  --config run.cfg --output out
//   egl fit  out/diagnostics.csv --column X1 --window 0 0.5
//   egl plot out/diagnostics.csv

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "egl/commands.hpp"
#include "egl/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exponential vorticity-gradient growth lab"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string output;
  bool force = false;
  unsigned precision = 0;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--output", output, "output directory");
  app.add_flag("--force", force, "overwrite existing outputs");
  app.add_option("--precision", precision, "decimal digits for theoretical constants");
  app.add_option("--set", overrides, "override a config key, key=value (repeatable)")
      ->allow_extra_args(false);

  auto* constants = app.add_subcommand("constants", "constant chain and key-integral margin");
  auto* init = app.add_subcommand("init", "build and verify initial data, write checkpoint");
  auto* run = app.add_subcommand("run", "evolve from a checkpoint and record diagnostics");
  std::string from;
  run->add_option("--from", from, "checkpoint to start from (default <output>/initial.chk)");

  auto* fit = app.add_subcommand("fit", "fit an exponential rate to a csv column");
  egl::FitRequest request;
  std::vector<double> window;
  fit->add_option("csv", request.csv, "diagnostics csv")->required();
  fit->add_option("--column", request.column, "column to fit");
  fit->add_option("--window", window, "t_a t_b")->expected(2);

  auto* plot = app.add_subcommand("plot", "emit a gnuplot script and data file");
  std::string plot_csv, plot_dir;
  plot->add_option("csv", plot_csv, "diagnostics csv")->required();
  plot->add_option("--dir", plot_dir, "where to write plot.gp and plot.dat");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? egl::exit_ok : egl::exit_usage;
  }

  if (*fit) {
    if (window.size() == 2) {
      request.t_a = window[0];
      request.t_b = window[1];
    }
    return egl::cmd_fit(request, std::cout, std::cerr);
  }
  if (*plot) return egl::cmd_plot(plot_csv, plot_dir, std::cout, std::cerr);

  egl::RunConfig config;
  try {
    if (!config_path.empty()) config = egl::load_config(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw egl::ConfigError("--set expects key=value: " + kv);
      const std::string key = kv.substr(0, eq);
      if (!egl::config_keys().count(key)) throw egl::ConfigError("unknown key '" + key + "'");
      egl::apply_setting(config, key, kv.substr(eq + 1));
    }
    if (!output.empty()) egl::apply_setting(config, "output", output);
    if (force) egl::apply_setting(config, "force", "true");
    if (precision) egl::apply_setting(config, "precision", std::to_string(precision));
  } catch (const egl::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return egl::exit_usage;
  }

  try {
    if (*constants) return egl::cmd_constants(config, std::cout, std::cerr);
    if (*init) return egl::cmd_init(config, std::cout, std::cerr);
    if (*run) return egl::cmd_run(config, from, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return egl::exit_usage;
  }
  return egl::exit_usage;
}
