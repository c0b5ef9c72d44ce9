// Scenario configuration: physical parameters, band, grid, and presets.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfmatch/constants.hpp"

namespace bfmatch {

enum class BeamMode { single, even, odd };

inline std::string to_string(BeamMode m) {
  switch (m) {
    case BeamMode::single: return "single";
    case BeamMode::even: return "even";
    case BeamMode::odd: return "odd";
  }
  return "?";
}

struct ScenarioConfig {
  double a = 4.29e-3;        // antenna sphere radius, m
  double R = 50.0;           // characteristic resistance, ohm
  double z0 = 50.0;          // reference impedance, ohm
  double c = kSpeedOfLight;  // m/s
  double f_c = 7e9;          // center frequency, Hz
  double f_min = 4.9e9;      // band lower edge, Hz
  double f_max = 9.1e9;      // band upper edge, Hz
  double e_s = 0.25 / 4.2e9; // supplied power density, W/Hz
  double n_0 = 4e-21;        // noise density, W/Hz
  double gain = 1.5;         // antenna gain G
  double d_txrx = 500.0;     // link distance, m
  double d = 0.0;            // element spacing, m (array modes)
  double theta = 0.0;        // receiver angle from broadside, rad (array modes)
  BeamMode mode = BeamMode::single;
  int grid_points = 2001;

  double lambda_c() const { return c / f_c; }
  double bandwidth() const { return f_max - f_min; }
  int ports() const { return mode == BeamMode::single ? 1 : 2; }

  void validate() const {
    if (!(f_min > 0.0)) throw std::invalid_argument("ScenarioConfig: f_min must be > 0");
    if (!(f_max > f_min)) throw std::invalid_argument("ScenarioConfig: f_max must exceed f_min");
    if (!(a > 0.0 && R > 0.0 && z0 > 0.0 && c > 0.0 && f_c > 0.0 && n_0 > 0.0 &&
          gain > 0.0 && d_txrx > 0.0 && e_s >= 0.0))
      throw std::invalid_argument("ScenarioConfig: physical quantities must be positive");
    if (mode != BeamMode::single && !(d > 0.0))
      throw std::invalid_argument("ScenarioConfig: array modes need element spacing d > 0");
    if (grid_points < 2) throw std::invalid_argument("ScenarioConfig: grid_points < 2");
  }

  std::vector<double> grid() const {
    std::vector<double> g(static_cast<size_t>(grid_points));
    for (int i = 0; i < grid_points; ++i)
      g[static_cast<size_t>(i)] =
          f_min + (f_max - f_min) * static_cast<double>(i) / (grid_points - 1);
    return g;
  }
};

inline double noise_density(double boltzmann, double temperature) {
  return boltzmann * temperature;
}

// Total supplied power fixed across bandwidths: E_s = P_total / B.
inline constexpr double kTotalPowerW = 0.25;

inline ScenarioConfig single_chu_scenario(double bandwidth_hz, int grid_points = 2001) {
  ScenarioConfig cfg;
  cfg.mode = BeamMode::single;
  cfg.f_min = cfg.f_c - bandwidth_hz / 2.0;
  cfg.f_max = cfg.f_c + bandwidth_hz / 2.0;
  cfg.e_s = kTotalPowerW / bandwidth_hz;
  cfg.grid_points = grid_points;
  cfg.validate();
  return cfg;
}

inline ScenarioConfig two_chu_scenario(BeamMode mode, double bandwidth_hz,
                                       int grid_points = 2001) {
  if (mode == BeamMode::single)
    throw std::invalid_argument("two_chu_scenario: mode must be even or odd");
  ScenarioConfig cfg;
  cfg.mode = mode;
  cfg.a = cfg.lambda_c() / 15.0;
  cfg.d = cfg.lambda_c() / 2.0;
  cfg.theta = (mode == BeamMode::even) ? 0.0 : kPi / 2.0;  // broadside vs endfire
  cfg.f_min = cfg.f_c - bandwidth_hz / 2.0;
  cfg.f_max = cfg.f_c + bandwidth_hz / 2.0;
  cfg.e_s = kTotalPowerW / bandwidth_hz;
  cfg.grid_points = grid_points;
  cfg.validate();
  return cfg;
}

}  // namespace bfmatch
