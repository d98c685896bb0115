#pragma once

// Named simulation pipelines behind the CLI. Each one parses a JSON config
// (all fields optional unless noted), runs the physics, and returns a table
// plus metadata and a default plot description.

#include <cmath>
#include <string>
#include <vector>

#include "qcorr/channels.hpp"
#include "qcorr/io.hpp"
#include "qcorr/kernels.hpp"
#include "qcorr/measures.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

struct ScenarioOutput {
  Table table;
  CsvMeta meta;
  SvgSpec svg;
};

namespace detail {

inline void check_schema(const json& cfg) {
  if (cfg.is_null()) return;
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  if (cfg.contains("schema") && cfg.at("schema") != json(1))
    throw ConfigError("unsupported config schema (expected \"schema\": 1)");
}

inline TimeGrid grid_from(const json& cfg, TimeGrid fallback) {
  if (cfg.is_null() || !cfg.contains("grid")) return fallback;
  const json& g = cfg.at("grid");
  if (!g.is_object()) throw ConfigError("\"grid\" must be an object");
  TimeGrid out = fallback;
  if (g.contains("t_max")) out.t_max = g.at("t_max").get<double>();
  if (g.contains("steps")) out.steps = g.at("steps").get<std::size_t>();
  return out;
}

// Number rendered into a column-name tag: '.' -> 'p', '-' -> 'm'.
inline std::string tag_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  std::string s = buf;
  for (char& c : s) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
  }
  return s;
}

inline std::uint64_t hash_of(const std::string& scenario, const json& cfg) {
  return fnv1a(scenario + ":" + (cfg.is_null() ? std::string("{}") : cfg.dump()));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Config fragments
// ---------------------------------------------------------------------------

inline EwlParams ewl_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("\"ewl\" must be an object");
  EwlParams p;
  p.r = j.value("r", p.r);
  if (j.contains("a2"))
    p.a = std::sqrt(j.at("a2").get<double>());
  else
    p.a = j.value("a", p.a);
  p.phase = j.value("phase", p.phase);
  if (j.contains("kind")) {
    const std::string k = j.at("kind").get<std::string>();
    if (k == "phi")
      p.kind = EwlKind::phi;
    else if (k == "psi")
      p.kind = EwlKind::psi;
    else
      throw ConfigError("ewl kind must be \"phi\" or \"psi\"");
  }
  validate(p);
  return p;
}

inline DensityMatrix state_from_config(const json& j) {
  if (!j.is_object())
    throw ConfigError("state must be an object naming one of: bell, "
                      "bell_diagonal, ewl, matrix");
  if (j.contains("bell")) {
    const std::string name = j.at("bell").get<std::string>();
    if (name == "phi_plus") return make_bell(BellKind::phi_plus);
    if (name == "phi_minus") return make_bell(BellKind::phi_minus);
    if (name == "psi_plus") return make_bell(BellKind::psi_plus);
    if (name == "psi_minus") return make_bell(BellKind::psi_minus);
    throw ConfigError("unknown bell state '" + name +
                      "' (choose phi_plus, phi_minus, psi_plus, psi_minus)");
  }
  if (j.contains("bell_diagonal")) {
    const auto v = j.at("bell_diagonal").get<std::vector<double>>();
    if (v.size() != 3)
      throw ConfigError("bell_diagonal needs exactly [c1, c2, c3]");
    return make_bell_diagonal({v[0], v[1], v[2]});
  }
  if (j.contains("ewl")) return make_ewl(ewl_from_json(j.at("ewl")));
  if (j.contains("matrix")) return state_from_json(j.at("matrix"));
  if (j.contains("re")) return state_from_json(j);
  throw ConfigError("state must specify one of: bell, bell_diagonal, ewl, matrix");
}

// ---------------------------------------------------------------------------
// Two qubits in independent structured environments: concurrence decay,
// revivals and sudden death for both state-family branches, with an
// optional memoryless reference curve.
// ---------------------------------------------------------------------------

inline ScenarioOutput run_fig2(const json& cfg) {
  detail::check_schema(cfg);
  std::vector<double> lambdas = {3.0, 0.01};
  if (!cfg.is_null() && cfg.contains("lambda_over_gamma"))
    lambdas = cfg.at("lambda_over_gamma").get<std::vector<double>>();
  const double r = cfg.is_null() ? 1.0 : cfg.value("r", 1.0);
  const double a2 = cfg.is_null() ? 1.0 / 3.0 : cfg.value("a2", 1.0 / 3.0);
  const double phase = cfg.is_null() ? 0.0 : cfg.value("phase", 0.0);
  const bool with_exp =
      cfg.is_null() ? true : cfg.value("include_exponential", true);
  const TimeGrid grid = detail::grid_from(cfg, TimeGrid{600.0, 6000});

  ScenarioOutput out;
  out.meta = {"fig2", "Gamma*t", detail::hash_of("fig2", cfg)};
  out.table.columns.push_back("t");
  struct Curve {
    EwlParams p;
    double lambda;  // <= 0 means the memoryless reference
    };
  std::vector<Curve> curves;
  for (auto kind : {EwlKind::phi, EwlKind::psi}) {
    EwlParams p;
    p.r = r;
    p.a = std::sqrt(a2);
    p.phase = phase;
    p.kind = kind;
    validate(p);
    const std::string base =
        kind == EwlKind::phi ? "conc_phi_" : "conc_psi_";
    for (double lam : lambdas) {
      curves.push_back({p, lam});
      out.table.columns.push_back(base + "l" + detail::tag_number(lam));
    }
    if (with_exp) {
      curves.push_back({p, 0.0});
      out.table.columns.push_back(base + "exp");
    }
  }
  for (double t : grid.times()) {
    std::vector<double> row{t};
    for (const Curve& c : curves) {
      const double q = c.lambda > 0.0 ? lorentzian_q(c.lambda, t) : markov_flat_q(t);
      row.push_back(concurrence_ewl_evolved(c.p, q));
    }
    out.table.add_row(std::move(row));
  }
  out.svg = {"Concurrence under independent structured decay", "Gamma*t",
             "concurrence"};
  return out;
}

// ---------------------------------------------------------------------------
// Entanglement trapping near a photonic band edge: the long-time trapped
// fraction against the detuning from the edge, with Bell-state concurrences
// computed through the full channel.
// ---------------------------------------------------------------------------

inline ScenarioOutput run_fig3(const json& cfg) {
  detail::check_schema(cfg);
  std::vector<double> deltas = {-10, -5, -2, -1, 0, 1, 2, 5, 10};
  if (!cfg.is_null() && cfg.contains("deltas"))
    deltas = cfg.at("deltas").get<std::vector<double>>();
  const double t_max = cfg.is_null() ? 200.0 : cfg.value("t_max", 200.0);

  ScenarioOutput out;
  out.meta = {"fig3", "beta*t", detail::hash_of("fig3", cfg)};
  out.table.columns = {"delta_over_beta", "trapped_fraction", "conc_phi",
                       "conc_psi"};
  for (double d : deltas) {
    const auto series = bandedge_q(d, bandedge_grid(d, t_max));
    const double trapped = coherence_plateau(series).value;
    const cd q_eff = std::sqrt(trapped);
    const double c_phi =
        concurrence(independent_envs_evolve(make_bell(BellKind::phi_plus), q_eff, q_eff));
    const double c_psi =
        concurrence(independent_envs_evolve(make_bell(BellKind::psi_plus), q_eff, q_eff));
    out.table.add_row({d, trapped, c_phi, c_psi});
  }
  out.svg = {"Entanglement trapping near a band edge", "delta/beta", "long-time value"};
  return out;
}

// ---------------------------------------------------------------------------
// Classical random external fields: entanglement and discord of a
// Bell-diagonal state under the two-qubit random-phase field mixture.
// Columns are t (in g*t units), E (relative entropy of entanglement) and
// D (quantum discord).
// ---------------------------------------------------------------------------

inline ScenarioOutput run_fig4(const json& cfg) {
  detail::check_schema(cfg);
  BellDiagonal c0{0.8, 0.8, -1.0};
  if (!cfg.is_null() && cfg.contains("c0")) {
    const auto v = cfg.at("c0").get<std::vector<double>>();
    if (v.size() != 3) throw ConfigError("c0 needs exactly [c1, c2, c3]");
    c0 = {v[0], v[1], v[2]};
  }
  make_bell_diagonal(c0);  // validate the triple
  const TimeGrid grid = detail::grid_from(cfg, TimeGrid{2.0 * M_PI, 2000});

  ScenarioOutput out;
  out.meta = {"fig4", "g*t", detail::hash_of("fig4", cfg)};
  out.table.columns = {"t", "E", "D"};
  for (double t : grid.times()) {
    const BellDiagonal c = random_field_bd(c0, t);
    out.table.add_row({t, rel_entropy_entanglement_bd(c),
                       discord_and_classical(c).discord});
  }
  out.svg = {"Correlations under random external fields", "g*t", "E, D"};
  return out;
}

// ---------------------------------------------------------------------------
// Frozen discord under local dephasing: white noise (time unit gamma*t)
// or random telegraph noise on both qubits (time unit a*t).
// ---------------------------------------------------------------------------

namespace detail {

inline BellDiagonal c0_from(const json& cfg, BellDiagonal fallback) {
  if (cfg.is_null() || !cfg.contains("c0")) return fallback;
  const auto v = cfg.at("c0").get<std::vector<double>>();
  if (v.size() != 3) throw ConfigError("c0 needs exactly [c1, c2, c3]");
  return {v[0], v[1], v[2]};
}

}  // namespace detail

inline ScenarioOutput run_frozen(const json& cfg) {
  detail::check_schema(cfg);
  const BellDiagonal c0 = detail::c0_from(cfg, {1.0, -0.6, 0.6});
  make_bell_diagonal(c0);
  const TimeGrid grid = detail::grid_from(cfg, TimeGrid{1.5, 3000});

  ScenarioOutput out;
  out.meta = {"frozen", "gamma*t", detail::hash_of("frozen", cfg)};
  out.table.columns = {"t", "discord", "classical"};
  for (double t : grid.times()) {
    const auto split = discord_and_classical(dephase_white(c0, t));
    out.table.add_row({t, split.discord, split.classical});
  }
  out.svg = {"Discord freezing under white dephasing", "gamma*t", "correlations"};
  return out;
}

inline ScenarioOutput run_frozen_colored(const json& cfg) {
  detail::check_schema(cfg);
  const BellDiagonal c0 = detail::c0_from(cfg, {1.0, -0.6, 0.6});
  make_bell_diagonal(c0);
  const double nu = cfg.is_null() ? 0.05 : cfg.value("nu_over_a", 0.05);
  if (!(nu >= 0.0)) throw ConfigError("nu_over_a must be non-negative");
  const TimeGrid grid = detail::grid_from(cfg, TimeGrid{12.0, 6000});

  ScenarioOutput out;
  out.meta = {"frozen-colored", "a*t", detail::hash_of("frozen-colored", cfg)};
  out.table.columns = {"t", "discord", "classical", "attenuation"};
  for (double t : grid.times()) {
    const double q = telegraph_q(1.0, nu, t);
    const auto split = discord_and_classical(flip_channel_evolve(c0, 3, q * q));
    out.table.add_row({t, split.discord, split.classical, q * q});
  }
  out.svg = {"Discord under telegraph dephasing", "a*t", "correlations"};
  return out;
}

// ---------------------------------------------------------------------------
// Two qubits sharing one lossy mode: entanglement generation and trapping.
// ---------------------------------------------------------------------------

namespace detail {

inline CommonReservoirParams common_params(const json& cfg) {
  CommonReservoirParams p;
  if (!cfg.is_null()) {
    p.r1 = cfg.value("r1", p.r1);
    p.ratio = cfg.value("ratio", p.ratio);
    p.c1_0 = cfg.value("c1_0", 1.0);
    p.c2_0 = cfg.value("c2_0", 0.0);
  } else {
    p.c1_0 = 1.0;
    p.c2_0 = 0.0;
  }
  validate(p);
  return p;
}

}  // namespace detail

inline ScenarioOutput run_common(const json& cfg) {
  detail::check_schema(cfg);
  const CommonReservoirParams p = detail::common_params(cfg);
  const TimeGrid grid = detail::grid_from(cfg, TimeGrid{60.0, 3000});
  const auto times = grid.times();
  const auto amps = common_reservoir_amplitudes(p, times);

  ScenarioOutput out;
  out.meta = {"common", "Omega_T*t", detail::hash_of("common", cfg)};
  out.table.columns = {"t", "concurrence", "p10", "p01", "p00"};
  for (std::size_t i = 0; i < times.size(); ++i) {
    const cd c1 = amps[i](0), c2 = amps[i](1);
    const DensityMatrix rho = one_excitation_state(c1, c2);
    out.table.add_row({times[i], concurrence(rho), std::norm(c1), std::norm(c2),
                       std::real(rho(3, 3))});
  }
  out.svg = {"Shared-mode dynamics", "Omega_T*t", "concurrence, populations"};
  return out;
}

inline ScenarioOutput run_common_sweep(const json& cfg) {
  detail::check_schema(cfg);
  std::vector<double> r1_values;
  if (!cfg.is_null() && cfg.contains("r1_values"))
    r1_values = cfg.at("r1_values").get<std::vector<double>>();
  else
    for (int i = 1; i <= 19; ++i) r1_values.push_back(0.05 * i);
  const double ratio = cfg.is_null() ? 0.1 : cfg.value("ratio", 0.1);
  const double t_end = cfg.is_null() ? 60.0 : cfg.value("t_end", 60.0);

  ScenarioOutput out;
  out.meta = {"common-sweep", "Omega_T*t", detail::hash_of("common-sweep", cfg)};
  out.table.columns = {"r1", "conc_end", "conc_stationary"};
  for (double r1 : r1_values) {
    CommonReservoirParams p;
    p.r1 = r1;
    p.ratio = ratio;
    p.c1_0 = 1.0;
    p.c2_0 = 0.0;
    validate(p);
    const auto amps = common_reservoir_amplitudes(p, {0.0, t_end});
    out.table.add_row({r1,
                       one_excitation_concurrence(amps[1](0), amps[1](1)),
                       common_reservoir_stationary_concurrence(p)});
  }
  out.svg = {"Stationary entanglement against coupling asymmetry", "r1",
             "concurrence"};
  return out;
}

// ---------------------------------------------------------------------------
// Generic pipelines: kernel inspection, state evolution, parameter sweeps.
// ---------------------------------------------------------------------------

namespace detail {

inline TimeGrid default_kernel_grid(const KernelSpec& spec) {
  if (spec.type == KernelSpec::Type::band_edge)
    return bandedge_grid(spec.delta_over_beta, 200.0);
  return TimeGrid{50.0, 5000};
}

// Accept either a full kernel object or the bare kernel name as a string.
inline KernelSpec kernel_spec_from(const json& j) {
  if (j.is_string()) return kernel_from_json(json{{"kernel", j.get<std::string>()}});
  return kernel_from_json(j);
}

}  // namespace detail

inline ScenarioOutput run_kernel(const json& cfg) {
  detail::check_schema(cfg);
  if (cfg.is_null() || !cfg.contains("kernel"))
    throw ConfigError("kernel scenario needs a \"kernel\" object");
  const KernelSpec spec = detail::kernel_spec_from(cfg.at("kernel"));
  const TimeGrid grid = detail::grid_from(cfg, detail::default_kernel_grid(spec));
  const auto series = kernel_series(spec, grid);

  ScenarioOutput out;
  out.meta = {"kernel", kernel_time_unit(spec), detail::hash_of("kernel", cfg)};
  out.table.columns = {"t", "re_q", "im_q", "abs_q2"};
  for (std::size_t i = 0; i < series.t.size(); ++i)
    out.table.add_row({series.t[i], std::real(series.q[i]),
                       std::imag(series.q[i]), series.abs2(i)});
  out.svg = {"Coherence factor", kernel_time_unit(spec), "q(t)"};
  out.svg.y_columns = {out.table.column_index("re_q"),
                       out.table.column_index("abs_q2")};
  return out;
}

// Summed positive increments of the trace distance between the evolved
// excited/ground pair, evaluated straight from a coherence series.
inline double witness_from_series(const CoherenceSeries& series) {
  if (series.t.size() < 2)
    throw ConfigError("memory witness needs at least two samples");
  const double h = series.t[1] - series.t[0];
  auto family = [&](const Mat2& rho0, double t) {
    const auto idx = static_cast<std::size_t>(std::llround(t / h));
    return amplitude_damp_single(rho0, series.q[std::min(idx, series.q.size() - 1)]);
  };
  Mat2 e = Mat2::Zero(), g = Mat2::Zero();
  e(0, 0) = 1.0;
  g(1, 1) = 1.0;
  return nonmarkov_witness(family, e, g, series.t);
}

inline ScenarioOutput run_evolve(const json& cfg) {
  detail::check_schema(cfg);
  if (cfg.is_null() || !cfg.contains("state") || !cfg.contains("channel"))
    throw ConfigError("evolve scenario needs \"state\" and \"channel\" objects");
  const DensityMatrix rho0 = state_from_config(cfg.at("state"));
  const json& ch = cfg.at("channel");
  if (!ch.is_object() || !ch.contains("type"))
    throw ConfigError("\"channel\" needs a \"type\" field");
  const std::string type = ch.at("type").get<std::string>();

  ScenarioOutput out;
  out.meta.scenario = "evolve";
  out.meta.config_hash = detail::hash_of("evolve", cfg);

  auto bd_row = [&](Table& t, double time, const BellDiagonal& c) {
    const DensityMatrix rho = make_bell_diagonal(c);
    const auto split = discord_and_classical(c);
    t.add_row({time, concurrence(rho), chsh_max(rho), split.discord,
               split.classical, rel_entropy_entanglement_bd(c)});
  };
  const std::vector<std::string> bd_columns = {
      "t",       "concurrence", "chsh_max",
      "discord", "classical",   "rel_entropy_entanglement"};

  if (type == "independent") {
    if (!ch.contains("kernel"))
      throw ConfigError("channel type 'independent' needs a \"kernel\" object");
    const KernelSpec spec = detail::kernel_spec_from(ch.at("kernel"));
    const TimeGrid grid = detail::grid_from(cfg, detail::default_kernel_grid(spec));
    const auto series = kernel_series(spec, grid);
    out.meta.time_unit = kernel_time_unit(spec);
    out.table.columns = {"t", "concurrence", "chsh_max"};
    for (std::size_t i = 0; i < series.t.size(); ++i) {
      const DensityMatrix rho =
          independent_envs_evolve(rho0, series.q[i], series.q[i]);
      out.table.add_row({series.t[i], concurrence(rho), chsh_max(rho)});
    }
  } else if (type == "dephase_white" || type == "dephase_telegraph" ||
             type == "random_field") {
    BellDiagonal c0{0, 0, 0};
    try {
      c0 = bd_coefficients(rho0);
    } catch (const ConfigError&) {
      throw ConfigError("channel type '" + type +
                        "' requires a Bell-diagonal state");
    }
    out.table.columns = bd_columns;
    if (type == "dephase_white") {
      const TimeGrid grid = detail::grid_from(cfg, TimeGrid{1.5, 1500});
      out.meta.time_unit = "gamma*t";
      for (double t : grid.times()) bd_row(out.table, t, dephase_white(c0, t));
    } else if (type == "dephase_telegraph") {
      const double a = ch.value("a", 1.0);
      const double nu = ch.value("nu", 0.05);
      if (!(a > 0.0) || nu < 0.0)
        throw ConfigError("dephase_telegraph needs a > 0 and nu >= 0");
      const TimeGrid grid = detail::grid_from(cfg, TimeGrid{12.0, 2400});
      out.meta.time_unit = a == 1.0 ? "a*t" : "t";
      for (double t : grid.times())
        bd_row(out.table, t, dephase_telegraph(c0, a, nu, t));
    } else {
      const TimeGrid grid = detail::grid_from(cfg, TimeGrid{2.0 * M_PI, 2000});
      out.meta.time_unit = "g*t";
      for (double t : grid.times()) bd_row(out.table, t, random_field_bd(c0, t));
    }
  } else {
    throw ConfigError("unknown channel type '" + type +
                      "' (choose independent, dephase_white, dephase_telegraph, "
                      "random_field)");
  }
  out.svg = {"State evolution", out.meta.time_unit, "correlations"};
  return out;
}

inline ScenarioOutput run_sweep(const json& cfg) {
  detail::check_schema(cfg);
  if (cfg.is_null() || !cfg.contains("kernel") || !cfg.contains("values"))
    throw ConfigError("sweep scenario needs \"kernel\" and \"values\"");
  const KernelSpec base = detail::kernel_spec_from(cfg.at("kernel"));
  const auto values = cfg.at("values").get<std::vector<double>>();
  if (values.empty()) throw ConfigError("\"values\" must not be empty");
  std::string parameter;
  switch (base.type) {
    case KernelSpec::Type::lorentzian: parameter = "lambda_over_gamma"; break;
    case KernelSpec::Type::band_edge: parameter = "delta_over_beta"; break;
    case KernelSpec::Type::telegraph: parameter = "nu"; break;
    case KernelSpec::Type::markov_flat:
      throw ConfigError("the memoryless kernel has no parameter to sweep");
  }
  if (!cfg.is_null() && cfg.contains("parameter"))
    parameter = cfg.at("parameter").get<std::string>();

  ScenarioOutput out;
  out.meta = {"sweep", kernel_time_unit(base), detail::hash_of("sweep", cfg)};
  out.table.columns = {parameter, "nm_witness", "q2_end"};
  for (double v : values) {
    KernelSpec spec = base;
    if (parameter == "lambda_over_gamma")
      spec.lambda_over_gamma = v;
    else if (parameter == "delta_over_beta")
      spec.delta_over_beta = v;
    else if (parameter == "a")
      spec.a = v;
    else if (parameter == "nu")
      spec.nu = v;
    else
      throw ConfigError("unknown sweep parameter '" + parameter + "'");
    const TimeGrid grid = detail::grid_from(cfg, detail::default_kernel_grid(spec));
    const auto series = kernel_series(spec, grid);
    out.table.add_row({v, witness_from_series(series),
                       series.abs2(series.t.size() - 1)});
  }
  out.svg = {"Kernel parameter sweep", out.table.columns[0], "witness, |q|^2"};
  return out;
}

// ---------------------------------------------------------------------------
// Dispatcher for the named figure pipelines.
// ---------------------------------------------------------------------------

inline ScenarioOutput run_figure(const std::string& name, const json& cfg) {
  if (name == "fig2") return run_fig2(cfg);
  if (name == "fig3") return run_fig3(cfg);
  if (name == "fig4") return run_fig4(cfg);
  if (name == "frozen") return run_frozen(cfg);
  if (name == "frozen-colored") return run_frozen_colored(cfg);
  if (name == "common") return run_common(cfg);
  if (name == "common-sweep") return run_common_sweep(cfg);
  throw ConfigError("unknown figure '" + name +
                    "' (choose fig2, fig3, fig4, frozen, frozen-colored, "
                    "common, common-sweep)");
}

}  // namespace qcorr
