#pragma once

// Command-line front end. Subcommands map one-to-one onto the scenario
// pipelines; every run writes a CSV table (stdout by default) and optionally
// an SVG plot. Exit codes: 0 success, 2 configuration error, 3 numerical
// failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qcorr/scenarios.hpp"

namespace qcorr::cli {

inline json load_config(const std::string& path) {
  if (path.empty()) return json();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

inline void deliver(const ScenarioOutput& out, const std::string& csv_path,
                    const std::string& svg_path) {
  if (csv_path.empty())
    write_csv(std::cout, out.table, out.meta);
  else
    write_csv_file(csv_path, out.table, out.meta);
  if (!svg_path.empty()) write_svg_file(svg_path, out.table, out.svg);
}

inline int run(int argc, const char* const* argv) {
  CLI::App app{"qcorr: correlation dynamics of two qubits in noisy environments"};
  app.require_subcommand(1);

  std::string config_path, out_path, svg_path, figure_name;
  std::uint64_t seed = 0;
  app.add_option("--seed", seed,
                 "seed for stochastic pipelines (accepted everywhere so runs "
                 "stay scriptable; the built-in pipelines are deterministic)");

  auto add_io = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config_path, "JSON config file");
    if (config_required) opt->required();
    sub->add_option("--out", out_path, "write the CSV table here instead of stdout");
    sub->add_option("--svg", svg_path, "also write an SVG plot here");
  };

  auto* evolve = app.add_subcommand(
      "evolve", "evolve a two-qubit state through a noise channel");
  add_io(evolve, true);

  auto* measure = app.add_subcommand(
      "measure", "print the correlation report of a state as JSON");
  measure->add_option("--config", config_path, "JSON config file with the state")
      ->required();
  measure->add_option("--out", out_path, "write the JSON report here instead of stdout");

  auto* kernel = app.add_subcommand(
      "kernel", "tabulate the single-qubit coherence factor q(t)");
  add_io(kernel, false);

  auto* sweep = app.add_subcommand(
      "sweep", "sweep a kernel parameter and report the memory witness");
  add_io(sweep, true);

  auto* figure = app.add_subcommand("figure", "run a named study end to end");
  figure
      ->add_option("name", figure_name,
                   "fig2, fig3, fig4, frozen, frozen-colored, common, "
                   "common-sweep")
      ->required();
  add_io(figure, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    const json cfg = load_config(config_path);
    if (evolve->parsed()) {
      deliver(run_evolve(cfg), out_path, svg_path);
    } else if (measure->parsed()) {
      const DensityMatrix rho =
          state_from_config(cfg.contains("state") ? cfg.at("state") : cfg);
      const std::string text = report_to_json(correlation_report(rho)).dump(2) + "\n";
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(out_path);
        if (!(f << text)) throw ConfigError("cannot write '" + out_path + "'");
      }
    } else if (kernel->parsed()) {
      json kcfg = cfg;
      if (kcfg.is_null()) kcfg = json{{"kernel", {{"kernel", "lorentzian"}}}};
      deliver(run_kernel(kcfg), out_path, svg_path);
    } else if (sweep->parsed()) {
      deliver(run_sweep(cfg), out_path, svg_path);
    } else if (figure->parsed()) {
      deliver(run_figure(figure_name, cfg), out_path, svg_path);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace qcorr::cli
