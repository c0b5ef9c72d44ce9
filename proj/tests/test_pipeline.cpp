#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bfmatch/pipeline.hpp"

using namespace bfmatch;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace {

ScenarioFileData scenario_str(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario_file(in, "test.toml");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

fs::path fresh_dir(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / leaf;
  fs::remove_all(dir);
  return dir;
}

const char* kBaseScenario =
    "[scenario]\n"
    "mode = \"single\"\n"
    "[run]\n"
    "grid_points = 201\n"
    "strategies = [\"optimal\", \"frequency_flat\", \"no_match\"]\n";

}  // namespace

TEST_CASE("run_scenario writes the artifact bundle with pinned headers") {
  const fs::path dir = fresh_dir("bfm_pipeline_bundle");
  ScenarioFileData sf = scenario_str(kBaseScenario);
  sf.run.out_dir = dir.string();

  const RunArtifacts art = run_scenario(sf);
  REQUIRE(art.strategies.size() == 3);

  CHECK(fs::exists(dir / "transmission.csv"));
  CHECK(fs::exists(dir / "snr.csv"));
  CHECK(fs::exists(dir / "constraints.csv"));
  CHECK(fs::exists(dir / "feasibility.csv"));
  CHECK(fs::exists(dir / "summary.json"));
  CHECK_FALSE(fs::exists(dir / "sweep.csv"));
  CHECK_FALSE(fs::exists(dir / "ladder.s2p"));

  CHECK(first_line(dir / "transmission.csv") == "f_hz,strategy,value");
  CHECK(first_line(dir / "snr.csv") == "f_hz,strategy,value");
  CHECK(first_line(dir / "constraints.csv") == "label,kind,root_re,root_im,multiplicity,bound");
  CHECK(first_line(dir / "feasibility.csv") == "label,strategy,lhs,bound,slack,feasible");

  // one spectral row per strategy per grid point, plus the header
  std::istringstream rows(slurp(dir / "transmission.csv"));
  std::string line;
  size_t n = 0;
  while (std::getline(rows, line))
    if (!line.empty()) ++n;
  CHECK(n == 1 + 3 * 201);
}

TEST_CASE("identical scenario files produce byte-identical artifacts") {
  const fs::path dir_a = fresh_dir("bfm_pipeline_det_a");
  const fs::path dir_b = fresh_dir("bfm_pipeline_det_b");

  ScenarioFileData sf = scenario_str(kBaseScenario);
  sf.run.out_dir = dir_a.string();
  run_scenario(sf);
  sf.run.out_dir = dir_b.string();
  run_scenario(sf);

  for (const char* f : {"transmission.csv", "snr.csv", "constraints.csv", "feasibility.csv",
                        "summary.json"})
    CHECK(slurp(dir_a / f) == slurp(dir_b / f));
}

TEST_CASE("empty strategy list emits the constraint report only") {
  const fs::path dir = fresh_dir("bfm_pipeline_constraints_only");
  ScenarioFileData sf = scenario_str(
      "[scenario]\nmode = \"single\"\n[run]\ngrid_points = 101\nstrategies = []\n");
  sf.run.out_dir = dir.string();

  const RunArtifacts art = run_scenario(sf);
  CHECK(art.strategies.empty());
  CHECK(fs::exists(dir / "constraints.csv"));
  CHECK(fs::exists(dir / "summary.json"));
  CHECK_FALSE(fs::exists(dir / "transmission.csv"));
  CHECK_FALSE(fs::exists(dir / "snr.csv"));
  CHECK_FALSE(fs::exists(dir / "feasibility.csv"));

  // two derived constraints for the closed-form single-antenna load
  std::istringstream rows(slurp(dir / "constraints.csv"));
  std::string line;
  size_t n = 0;
  while (std::getline(rows, line))
    if (!line.empty()) ++n;
  CHECK(n == 3);
}

TEST_CASE("ladder strategy emits the fitted network and its touchstone file") {
  const fs::path dir = fresh_dir("bfm_pipeline_ladder");
  ScenarioFileData sf = scenario_str(
      "[scenario]\nmode = \"single\"\n[run]\n"
      "grid_points = 201\nladder_order = 1\nstrategies = [\"ladder\"]\n");
  sf.run.out_dir = dir.string();

  const RunArtifacts art = run_scenario(sf);
  REQUIRE(art.comp.ladder.has_value());
  CHECK(art.comp.ladder->order == 1);
  CHECK(fs::exists(dir / "ladder.s2p"));

  const TouchstoneData ts = ingest_touchstone((dir / "ladder.s2p").string());
  CHECK(ts.ports == 2);
  CHECK(ts.frequencies.size() == 201);

  const nlohmann::json j = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(j.at("ladder").at("order").get<int>() == 1);
  CHECK(j.at("ladder").at("elements_h_f").size() == 1);
  CHECK(j.at("ladder").at("rate_ratio").get<double>() > 0.0);
  CHECK(j.at("rates_bps").contains("ladder"));
}

TEST_CASE("summary records constraints, rates, and solver diagnostics") {
  const fs::path dir = fresh_dir("bfm_pipeline_summary");
  ScenarioFileData sf = scenario_str(kBaseScenario);
  sf.run.out_dir = dir.string();
  run_scenario(sf);

  const nlohmann::json j = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(j.at("scenario").at("mode").get<std::string>() == "single");
  CHECK(j.at("scenario").at("f_c_hz").get<double>() == 7e9);
  CHECK(j.at("constraints").size() == 2);
  CHECK(j.at("load_model").at("fit_error").get<double>() == 0.0);

  const double r_ideal = j.at("rates_bps").at("ideal").get<double>();
  const double r_opt = j.at("rates_bps").at("optimal").get<double>();
  const double r_ff = j.at("rates_bps").at("frequency_flat").get<double>();
  const double r_nm = j.at("rates_bps").at("no_match").get<double>();
  CHECK(r_nm < r_ff);
  CHECK(r_ff < r_opt);
  CHECK(r_opt < r_ideal);

  CHECK(j.at("optimal").at("multipliers").size() == 2);
  CHECK(j.at("optimal").at("stationarity_residual").get<double>() <= 1e-6);
}

TEST_CASE("a single-entry sweep has one row per strategy") {
  const fs::path dir = fresh_dir("bfm_pipeline_sweep");
  ScenarioFileData sf = scenario_str(
      "[scenario]\nmode = \"single\"\n[run]\n"
      "grid_points = 101\nstrategies = [\"optimal\", \"no_match\"]\n"
      "sweep_bandwidths_hz = [0.7e9]\n");
  sf.run.out_dir = dir.string();

  const RunArtifacts art = run_scenario(sf);
  REQUIRE(art.sweep.size() == 2);
  CHECK(art.sweep[0].bandwidth_hz == 0.7e9);
  CHECK(art.sweep[0].strategy == Strategy::optimal);
  CHECK(art.sweep[1].strategy == Strategy::no_match);
  CHECK(art.sweep[0].rate_bps > art.sweep[1].rate_bps);

  CHECK(first_line(dir / "sweep.csv") == "bandwidth_hz,strategy,rate_bps");
  std::istringstream rows(slurp(dir / "sweep.csv"));
  std::string line;
  size_t n = 0;
  while (std::getline(rows, line))
    if (!line.empty()) ++n;
  CHECK(n == 3);
}

TEST_CASE("plots are emitted deterministically with one series per strategy") {
  const fs::path dir = fresh_dir("bfm_pipeline_plots");
  ScenarioFileData sf = scenario_str(kBaseScenario);
  sf.run.out_dir = dir.string();
  run_scenario(sf);

  const std::vector<std::string> written = emit_plots(dir.string());
  REQUIRE(written.size() == 2);
  CHECK(fs::exists(dir / "transmission.svg"));
  CHECK(fs::exists(dir / "snr.svg"));

  const std::string svg = slurp(dir / "transmission.svg");
  CHECK_THAT(svg, ContainsSubstring("<svg"));
  CHECK_THAT(svg, ContainsSubstring("optimal"));
  CHECK_THAT(svg, ContainsSubstring("frequency_flat"));
  CHECK_THAT(svg, ContainsSubstring("no_match"));

  const std::string snapshot = slurp(dir / "snr.svg");
  emit_plots(dir.string());
  CHECK(slurp(dir / "snr.svg") == snapshot);
}

TEST_CASE("scenario computations are reproducible in memory") {
  ScenarioFileData sf = scenario_str(kBaseScenario);
  const RunArtifacts a = run_scenario(sf, false);
  const RunArtifacts b = run_scenario(sf, false);
  REQUIRE(a.strategies.size() == b.strategies.size());
  for (size_t i = 0; i < a.strategies.size(); ++i)
    CHECK(a.strategies[i].rate_bps == b.strategies[i].rate_bps);
}
