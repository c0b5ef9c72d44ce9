// Command-line front end: scenario-driven constraint derivation, rate
// optimization, ladder fitting, bandwidth sweeps, and plot emission.
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "bfmatch/bfmatch.hpp"

namespace {

struct GlobalFlags {
  int grid_points = 0;
  double tol = 0.0;
  std::string out_dir;
  long long seed = -1;
};

void add_global_flags(CLI::App* cmd, GlobalFlags& g) {
  cmd->add_option("--grid-points", g.grid_points, "Override the frequency grid size");
  cmd->add_option("--tol", g.tol, "Override the optimizer tolerance");
  cmd->add_option("--out-dir", g.out_dir, "Override the output directory");
  cmd->add_option("--seed", g.seed, "Override the fitter seed");
}

bfmatch::ScenarioFileData load_with_flags(const std::string& path, const GlobalFlags& g) {
  bfmatch::ScenarioFileData sf = bfmatch::load_scenario_file(path);
  if (g.grid_points > 0) {
    sf.run.grid_points = g.grid_points;
    sf.scenario.grid_points = g.grid_points;
  }
  if (g.tol > 0.0) sf.run.tol = g.tol;
  if (!g.out_dir.empty()) sf.run.out_dir = g.out_dir;
  if (g.seed >= 0) sf.run.seed = static_cast<std::uint64_t>(g.seed);
  return sf;
}

void print_constraints(const bfmatch::ScenarioComputation& sc) {
  std::printf("derived %zu Bode-Fano constraint(s), load model error %.3g\n",
              sc.constraints.size(), sc.load_model_error);
  for (const auto& c : sc.constraints)
    std::printf("  %-24s kind=%-16s bound=%.17g\n", c.label.c_str(),
                bfmatch::to_string(c.kind).c_str(), c.bound);
}

void print_rates(const bfmatch::RunArtifacts& art) {
  for (const auto& sr : art.strategies)
    std::printf("  %-16s rate = %.10g bit/s  feasible = %s\n",
                bfmatch::to_string(sr.strategy).c_str(), sr.rate_bps,
                sr.feasibility.feasible ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bode-Fano bandwidth constraints and matching-network synthesis"};
  app.require_subcommand(1);
  app.footer(
      "Scenario files use [scenario] and [run] sections.\n"
      "[scenario] keys (defaults): mode (single), f_c_hz (7e9), bandwidth_hz (4.2e9),\n"
      "  antenna_radius_m (4.29e-3 single, lambda_c/15 array), resistance_ohm (50),\n"
      "  z0_ohm (50), element_spacing_m (lambda_c/2), theta_rad (0 even, pi/2 odd),\n"
      "  es_w_per_hz (0.25/bandwidth), total_power_w (0.25), n0_w_per_hz (4e-21),\n"
      "  gain (1.5), d_txrx_m (500), speed_of_light_m_per_s (299792458)\n"
      "[run] keys (defaults): grid_points (2001), tol (1e-6), seed (0), out_dir (out),\n"
      "  strategies (all six), ladder_order (4), rational_fit_order (4),\n"
      "  rational_fit_tol (1e-3), sweep_bandwidths_hz (empty)");

  GlobalFlags g;
  std::string scenario_path, bundle_dir;

  CLI::App* c_constraints =
      app.add_subcommand("constraints", "Derive the Bode-Fano constraints for a scenario");
  c_constraints->add_option("scenario", scenario_path, "Scenario file")->required();
  add_global_flags(c_constraints, g);

  CLI::App* c_optimize =
      app.add_subcommand("optimize", "Evaluate all configured strategies and emit the bundle");
  c_optimize->add_option("scenario", scenario_path, "Scenario file")->required();
  add_global_flags(c_optimize, g);

  CLI::App* c_fit =
      app.add_subcommand("fit-ladder", "Fit an LC ladder to the optimal transmission profile");
  c_fit->add_option("scenario", scenario_path, "Scenario file")->required();
  add_global_flags(c_fit, g);

  CLI::App* c_sweep =
      app.add_subcommand("sweep", "Rate-versus-bandwidth sweep over the configured list");
  c_sweep->add_option("scenario", scenario_path, "Scenario file")->required();
  add_global_flags(c_sweep, g);

  CLI::App* c_plots = app.add_subcommand("plots", "Render SVG plots from an emitted bundle");
  c_plots->add_option("bundle", bundle_dir, "Artifact bundle directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_constraints->parsed()) {
      bfmatch::ScenarioFileData sf = load_with_flags(scenario_path, g);
      sf.run.strategies.clear();  // constraint report only
      bfmatch::RunArtifacts art = bfmatch::run_scenario(sf);
      print_constraints(art.comp);
      std::printf("wrote %s/constraints.csv\n", art.out_dir.c_str());
    } else if (c_optimize->parsed()) {
      bfmatch::ScenarioFileData sf = load_with_flags(scenario_path, g);
      bfmatch::RunArtifacts art = bfmatch::run_scenario(sf);
      print_constraints(art.comp);
      print_rates(art);
      if (art.comp.optimal)
        std::printf("optimal rate = %.10g bit/s, stationarity residual = %.3g\n",
                    art.comp.optimal->rate_bps, art.comp.optimal->stationarity_residual);
      std::printf("bundle written to %s\n", art.out_dir.c_str());
    } else if (c_fit->parsed()) {
      bfmatch::ScenarioFileData sf = load_with_flags(scenario_path, g);
      sf.run.strategies = {bfmatch::Strategy::optimal, bfmatch::Strategy::ladder};
      bfmatch::RunArtifacts art = bfmatch::run_scenario(sf);
      const bfmatch::LadderNetwork& net = *art.comp.ladder;
      std::printf("order-%d ladder (Z0 = %g):\n", net.order, net.z0);
      for (int i = 0; i < net.order; ++i)
        std::printf("  stage %d: L = %.10g H, C = %.10g F\n", i + 1, net.elements[i].first,
                    net.elements[i].second);
      std::printf("fit objective = %.6g, rate ratio vs target = %.6f\n",
                  art.comp.ladder_report.objective, art.comp.ladder_report.rate_ratio);
      std::printf("bundle written to %s\n", art.out_dir.c_str());
    } else if (c_sweep->parsed()) {
      bfmatch::ScenarioFileData sf = load_with_flags(scenario_path, g);
      if (sf.run.sweep_bandwidths.empty())
        throw bfmatch::ScenarioFileError(scenario_path +
                                         ": sweep requires sweep_bandwidths_hz in [run]");
      bfmatch::RunArtifacts art = bfmatch::run_scenario(sf);
      for (const auto& row : art.sweep)
        std::printf("  B = %.6g Hz  %-16s rate = %.10g bit/s\n", row.bandwidth_hz,
                    bfmatch::to_string(row.strategy).c_str(), row.rate_bps);
      std::printf("bundle written to %s\n", art.out_dir.c_str());
    } else if (c_plots->parsed()) {
      const auto written = bfmatch::emit_plots(bundle_dir);
      for (const auto& p : written) std::printf("wrote %s\n", p.c_str());
      if (written.empty()) std::printf("no CSV tables found in %s\n", bundle_dir.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
