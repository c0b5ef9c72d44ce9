// Scenario orchestration: constraint derivation, strategy evaluation,
// bandwidth sweeps, and deterministic artifact emission (CSV/JSON/SVG/s2p).
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfmatch/bodefano.hpp"
#include "bfmatch/ladder.hpp"
#include "bfmatch/network.hpp"
#include "bfmatch/rational_fit.hpp"
#include "bfmatch/scenario_file.hpp"
#include "bfmatch/svg_plot.hpp"

namespace bfmatch {

struct StrategyResult {
  Strategy strategy;
  TransmissionProfile profile;
  double rate_bps = 0.0;
  FeasibilityReport feasibility;
};

struct SweepRow {
  double bandwidth_hz;
  Strategy strategy;
  double rate_bps;
};

// Everything derived from one scenario configuration, cached so the strategy
// evaluations can share the optimal profile and the fitted load model.
struct ScenarioComputation {
  ScenarioModel model;
  RationalFunction load_model;   // reflection coefficient used for constraints
  double load_model_error = 0.0; // 0 for the closed-form single-antenna model
  std::vector<BodeFanoConstraint> constraints;
  std::optional<OptimizationResult> optimal;
  std::optional<LadderNetwork> ladder;
  FitLadderReport ladder_report;
};

struct RunArtifacts {
  ScenarioComputation comp;
  std::vector<StrategyResult> strategies;
  std::vector<SweepRow> sweep;
  std::string out_dir;
};

inline ScenarioComputation prepare_scenario(const ScenarioConfig& cfg, const RunOptions& run) {
  ScenarioComputation sc;
  sc.model = evaluate_scenario(cfg);
  if (cfg.mode == BeamMode::single) {
    sc.load_model = chu_scattering_rational(cfg);
    sc.load_model_error = 0.0;
  } else {
    FitOptions fo;
    fo.eps_fit = run.rational_fit_tol;
    const FitResult fit = fit_rational(sc.model.s_eq, run.rational_fit_order, fo);
    sc.load_model = fit.fn;
    sc.load_model_error = fit.max_rel_error;
  }
  sc.constraints = derive_constraints(sc.load_model);
  return sc;
}

inline const OptimizationResult& ensure_optimal(ScenarioComputation& sc, const RunOptions& run) {
  if (!sc.optimal) sc.optimal = solve(sc.model.ideal, sc.constraints, run.tol);
  return *sc.optimal;
}

inline const LadderNetwork& ensure_ladder(ScenarioComputation& sc, const RunOptions& run) {
  if (!sc.ladder) {
    const OptimizationResult& opt = ensure_optimal(sc, run);
    FitLadderOptions fo;
    fo.seed = run.seed;
    auto [net, report] = fit_ladder(opt.profile, sc.model.s_eq, sc.model.ideal,
                                    run.ladder_order, fo);
    sc.ladder = std::move(net);
    sc.ladder_report = report;
  }
  return *sc.ladder;
}

inline TransmissionProfile no_match_profile(const ScenarioModel& model) {
  TransmissionProfile out;
  out.provenance = Strategy::no_match;
  out.frequencies = model.grid;
  out.values.reserve(model.grid.size());
  for (const cplx& s : model.s_eq.values)
    out.values.push_back(std::clamp(1.0 - std::norm(s), 0.0, 1.0));
  return out;
}

inline TransmissionProfile strategy_profile(ScenarioComputation& sc, Strategy st,
                                            const RunOptions& run) {
  switch (st) {
    case Strategy::optimal:
      return ensure_optimal(sc, run).profile;
    case Strategy::frequency_flat:
      return frequency_flat(sc.constraints, sc.model.grid);
    case Strategy::conjugate_match:
      return conjugate_match(sc.model.cfg, sc.model.s_eq);
    case Strategy::ladder:
      return transmission_into_load(ensure_ladder(sc, run), sc.model.s_eq, sc.model.grid);
    case Strategy::ideal:
      return ideal_profile(sc.model.grid);
    case Strategy::no_match:
      return no_match_profile(sc.model);
  }
  throw std::logic_error("strategy_profile: unhandled strategy");
}

inline std::vector<SweepRow> bandwidth_sweep(const ScenarioConfig& templ,
                                             const std::vector<double>& bandwidths,
                                             const std::vector<Strategy>& strategies,
                                             const RunOptions& run) {
  // fixed total supplied power: E_s scales as P_total / B
  const double p_total = templ.e_s * templ.bandwidth();
  std::vector<SweepRow> rows;
  for (double b : bandwidths) {
    if (!(b > 0.0)) throw std::invalid_argument("bandwidth_sweep: bandwidth must be positive");
    ScenarioConfig cfg = templ;
    cfg.f_min = templ.f_c - b / 2.0;
    cfg.f_max = templ.f_c + b / 2.0;
    cfg.e_s = p_total / b;
    ScenarioComputation sc = prepare_scenario(cfg, run);
    for (Strategy st : strategies) {
      const TransmissionProfile profile = strategy_profile(sc, st, run);
      rows.push_back({b, st, rate(profile, sc.model.ideal)});
    }
  }
  return rows;
}

namespace detail {

inline std::string num17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_long_csv(const std::string& path, const std::string& header,
                           const std::vector<StrategyResult>& strategies,
                           bool scale_by_snr, const SnrProfile& snr) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << header << "\n";
  for (const auto& sr : strategies) {
    for (size_t i = 0; i < sr.profile.frequencies.size(); ++i) {
      double v = sr.profile.values[i];
      if (scale_by_snr) v *= snr.values[i];
      out << num17(sr.profile.frequencies[i]) << "," << to_string(sr.strategy) << ","
          << num17(v) << "\n";
    }
  }
}

}  // namespace detail

inline void write_artifacts(const RunArtifacts& art, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const ScenarioComputation& sc = art.comp;
  const ScenarioModel& model = sc.model;

  if (!art.strategies.empty()) {
    detail::write_long_csv(out_dir + "/transmission.csv", "f_hz,strategy,value", art.strategies,
                           false, model.ideal);
    detail::write_long_csv(out_dir + "/snr.csv", "f_hz,strategy,value", art.strategies, true,
                           model.ideal);
  }

  {
    std::ofstream out(out_dir + "/constraints.csv");
    out << "label,kind,root_re,root_im,multiplicity,bound\n";
    for (const auto& c : sc.constraints)
      out << c.label << "," << to_string(c.kind) << "," << detail::num17(c.root.real()) << ","
          << detail::num17(c.root.imag()) << "," << c.multiplicity << ","
          << detail::num17(c.bound) << "\n";
  }

  if (!art.strategies.empty()) {
    std::ofstream out(out_dir + "/feasibility.csv");
    out << "label,strategy,lhs,bound,slack,feasible\n";
    for (const auto& sr : art.strategies)
      for (size_t k = 0; k < sc.constraints.size(); ++k)
        out << sc.constraints[k].label << "," << to_string(sr.strategy) << ","
            << detail::num17(sr.feasibility.lhs[k]) << ","
            << detail::num17(sc.constraints[k].bound) << ","
            << detail::num17(sr.feasibility.slack[k]) << ","
            << (sr.feasibility.feasible ? "true" : "false") << "\n";
  }

  if (!art.sweep.empty()) {
    std::ofstream out(out_dir + "/sweep.csv");
    out << "bandwidth_hz,strategy,rate_bps\n";
    for (const auto& row : art.sweep)
      out << detail::num17(row.bandwidth_hz) << "," << to_string(row.strategy) << ","
          << detail::num17(row.rate_bps) << "\n";
  }

  if (sc.ladder) {
    const TouchstoneData ts = export_touchstone(*sc.ladder, model.grid);
    write_touchstone(ts, out_dir + "/ladder.s2p");
  }

  nlohmann::json j;
  j["scenario"]["mode"] = to_string(model.cfg.mode);
  j["scenario"]["f_c_hz"] = model.cfg.f_c;
  j["scenario"]["bandwidth_hz"] = model.cfg.bandwidth();
  j["scenario"]["antenna_radius_m"] = model.cfg.a;
  j["scenario"]["grid_points"] = model.cfg.grid_points;
  j["load_model"]["fit_error"] = sc.load_model_error;
  j["load_model"]["order"] =
      static_cast<int>(std::max(sc.load_model.zeros.size(), sc.load_model.poles.size()));
  for (const auto& c : sc.constraints) {
    nlohmann::json jc;
    jc["label"] = c.label;
    jc["kind"] = to_string(c.kind);
    jc["bound"] = c.bound;
    j["constraints"].push_back(jc);
  }
  const SnrProfile& snr = model.ideal;
  j["rates_bps"]["ideal"] = rate(ideal_profile(model.grid), snr);
  for (const auto& sr : art.strategies) j["rates_bps"][to_string(sr.strategy)] = sr.rate_bps;
  if (sc.optimal) {
    j["optimal"]["rate_bps"] = sc.optimal->rate_bps;
    j["optimal"]["multipliers"] = sc.optimal->multipliers;
    j["optimal"]["slack"] = sc.optimal->slack;
    j["optimal"]["stationarity_residual"] = sc.optimal->stationarity_residual;
  }
  if (sc.ladder) {
    nlohmann::json jl;
    jl["order"] = sc.ladder->order;
    jl["z0"] = sc.ladder->z0;
    for (const auto& [l, c] : sc.ladder->elements) {
      jl["elements_h_f"].push_back({l, c});
    }
    jl["fit_objective"] = sc.ladder_report.objective;
    jl["rate_ratio"] = sc.ladder_report.rate_ratio;
    j["ladder"] = jl;
  }
  if (!art.sweep.empty()) {
    for (const auto& row : art.sweep) {
      nlohmann::json jr;
      jr["bandwidth_hz"] = row.bandwidth_hz;
      jr["strategy"] = to_string(row.strategy);
      jr["rate_bps"] = row.rate_bps;
      j["sweep"].push_back(jr);
    }
  }
  std::ofstream out(out_dir + "/summary.json");
  out << j.dump(2) << "\n";
}

inline RunArtifacts run_scenario(const ScenarioFileData& sf, bool write_outputs = true) {
  RunArtifacts art;
  art.out_dir = sf.run.out_dir;
  art.comp = prepare_scenario(sf.scenario, sf.run);
  for (Strategy st : sf.run.strategies) {
    StrategyResult sr;
    sr.strategy = st;
    sr.profile = strategy_profile(art.comp, st, sf.run);
    sr.rate_bps = rate(sr.profile, art.comp.model.ideal);
    sr.feasibility = feasibility_check(art.comp.constraints, sr.profile);
    art.strategies.push_back(std::move(sr));
  }
  if (!sf.run.sweep_bandwidths.empty())
    art.sweep = bandwidth_sweep(sf.scenario, sf.run.sweep_bandwidths, sf.run.strategies, sf.run);
  if (write_outputs) write_artifacts(art, art.out_dir);
  return art;
}

// Plot emission: reads the CSV bundle back in so plots depend only on the
// emitted artifacts, then renders one SVG per figure-equivalent table.
namespace detail {

struct LongRow {
  double x;
  std::string strategy;
  double value;
};

inline std::vector<LongRow> read_long_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::vector<LongRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, c;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c))
      throw std::runtime_error(path + ": malformed row '" + line + "'");
    rows.push_back({std::stod(a), b, std::stod(c)});
  }
  return rows;
}

inline std::vector<PlotSeries> series_from_rows(const std::vector<LongRow>& rows,
                                                double x_scale) {
  std::vector<PlotSeries> series;
  std::map<std::string, size_t> index;
  for (const auto& r : rows) {
    auto it = index.find(r.strategy);
    if (it == index.end()) {
      index.emplace(r.strategy, series.size());
      series.push_back({r.strategy, {}, {}});
      it = index.find(r.strategy);
    }
    series[it->second].x.push_back(r.x * x_scale);
    series[it->second].y.push_back(r.value);
  }
  return series;
}

}  // namespace detail

inline std::vector<std::string> emit_plots(const std::string& bundle_dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> written;
  struct Table {
    const char* csv;
    const char* svg;
    const char* title;
    const char* x_label;
    const char* y_label;
    double x_scale;
  };
  const Table tables[] = {
      {"transmission.csv", "transmission.svg", "Transmission coefficient", "f (GHz)", "T(f)",
       1e-9},
      {"snr.csv", "snr.svg", "Received SNR", "f (GHz)", "SNR", 1e-9},
      {"sweep.csv", "sweep.svg", "Achievable rate vs bandwidth", "B (GHz)", "rate (bit/s)", 1e-9},
  };
  for (const Table& t : tables) {
    const fs::path csv = fs::path(bundle_dir) / t.csv;
    if (!fs::exists(csv)) continue;
    const auto rows = detail::read_long_csv(csv.string());
    PlotSpec spec;
    spec.title = t.title;
    spec.x_label = t.x_label;
    spec.y_label = t.y_label;
    spec.series = detail::series_from_rows(rows, t.x_scale);
    const fs::path svg = fs::path(bundle_dir) / t.svg;
    std::ofstream out(svg);
    if (!out) throw std::runtime_error(svg.string() + ": cannot open for writing");
    out << render_svg(spec);
    written.push_back(svg.string());
  }
  return written;
}

}  // namespace bfmatch
