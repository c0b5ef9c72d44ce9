#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "bfmatch/bodefano.hpp"
#include "bfmatch/network.hpp"
#include "bfmatch/optimizer.hpp"
#include "bfmatch/scenario.hpp"

using namespace bfmatch;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct ChuSetup {
  ScenarioModel model;
  std::vector<BodeFanoConstraint> constraints;
};

ChuSetup chu_setup(double bandwidth, int grid_points = 2001) {
  ChuSetup s{evaluate_scenario(single_chu_scenario(bandwidth, grid_points)), {}};
  s.constraints = derive_constraints(chu_scattering_rational(s.model.cfg));
  return s;
}

BodeFanoConstraint flat_constraint(double bound) {
  return {ConstraintKind::infinity, {0.0, 0.0}, 1, bound, [](double) { return 1.0; },
          "flat"};
}

SnrProfile synthetic_snr(int n, unsigned seed) {
  SnrProfile snr;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(0.5, 8.0);
  snr.frequencies.resize(static_cast<size_t>(n));
  snr.values.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    snr.frequencies[static_cast<size_t>(i)] = 1e9 + 1e9 * i / (n - 1.0);
    snr.values[static_cast<size_t>(i)] = dist(rng);
  }
  return snr;
}

// Brute-force reference: projected gradient ascent on the discretized rate
// with a trapezoid-weighted integral constraint.
double pga_rate(const SnrProfile& snr, const BodeFanoConstraint& c, int iterations) {
  const size_t n = snr.values.size();
  std::vector<double> w(n), a(n);
  for (size_t i = 0; i < n; ++i) {
    const double lo = (i == 0) ? snr.frequencies[0] : snr.frequencies[i - 1];
    const double hi = (i + 1 == n) ? snr.frequencies[n - 1] : snr.frequencies[i + 1];
    w[i] = 0.5 * (hi - lo);
    a[i] = w[i] * c.weight(snr.frequencies[i]);
  }
  auto lhs_of = [&](const std::vector<double>& t) {
    double l = 0.0;
    for (size_t i = 0; i < n; ++i) l += a[i] * std::log(1.0 / (1.0 - t[i]));
    return l;
  };
  auto project = [&](std::vector<double> t) {
    for (double& v : t) v = std::clamp(v, 0.0, 1.0 - 1e-9);
    if (lhs_of(t) <= c.bound) return t;
    auto shrink = [&](double nu) {
      std::vector<double> out(n);
      for (size_t i = 0; i < n; ++i) {
        const double b = 1.0 + t[i];
        const double disc = b * b - 4.0 * (t[i] - nu * a[i]);
        out[i] = std::clamp(0.5 * (b - std::sqrt(std::max(disc, 0.0))), 0.0, 1.0 - 1e-9);
      }
      return out;
    };
    double nu_hi = 1e-45;
    while (lhs_of(shrink(nu_hi)) > c.bound) nu_hi *= 2.0;
    double nu_lo = nu_hi / 2.0;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (nu_lo + nu_hi);
      (lhs_of(shrink(mid)) > c.bound ? nu_lo : nu_hi) = mid;
    }
    return shrink(nu_hi);
  };

  double max_ws = 0.0;
  for (size_t i = 0; i < n; ++i) max_ws = std::max(max_ws, w[i] * snr.values[i]);
  const double eta = 0.05 / max_ws;
  std::vector<double> t(n, 0.0);
  for (int it = 0; it < iterations; ++it) {
    for (size_t i = 0; i < n; ++i)
      t[i] += eta * w[i] * snr.values[i] / (kLn2 * (1.0 + snr.values[i] * t[i]));
    t = project(t);
  }
  double obj = 0.0;
  for (size_t i = 0; i < n; ++i) obj += w[i] * std::log2(1.0 + snr.values[i] * t[i]);
  return obj;
}

}  // namespace

TEST_CASE("rate of the zero profile is zero and the unit case is exact") {
  SnrProfile snr;
  snr.frequencies = {1e9, 1e9 + 1.0};
  snr.values = {3.0, 3.0};

  TransmissionProfile zero;
  zero.frequencies = snr.frequencies;
  zero.values = {0.0, 0.0};
  zero.provenance = Strategy::optimal;
  CHECK(rate(zero, snr) == 0.0);

  TransmissionProfile one = ideal_profile(snr.frequencies);
  CHECK_THAT(rate(one, snr), WithinRel(2.0, 1e-12));
}

TEST_CASE("optimal rate strictly exceeds the frequency-flat rate at full band") {
  const ChuSetup s = chu_setup(4.2e9);
  const OptimizationResult res = solve(s.model.ideal, s.constraints);
  const TransmissionProfile ff = frequency_flat(s.constraints, s.model.grid);
  const double r_ff = rate(ff, s.model.ideal);
  CHECK(res.rate_bps > r_ff * 1.0001);
}

TEST_CASE("multiplier-profile map validates inputs and limits") {
  const ChuSetup s = chu_setup(4.2e9);
  CHECK_THROWS_AS(transmission_from_multipliers({1.0}, s.constraints, s.model.ideal),
                  std::invalid_argument);
  CHECK_THROWS_AS(transmission_from_multipliers({0.0, 0.0}, s.constraints, s.model.ideal),
                  std::invalid_argument);

  const TransmissionProfile crushed =
      transmission_from_multipliers({1e80, 1e80}, s.constraints, s.model.ideal);
  for (double t : crushed.values) CHECK(t == 0.0);
}

TEST_CASE("clamp boundary: T is exactly zero where the numerator is nonpositive") {
  SnrProfile snr;
  snr.frequencies = {1e9, 2e9, 3e9};
  snr.values = {2.0, 1.0, 0.5};
  const std::vector<BodeFanoConstraint> cs{flat_constraint(1e9)};

  // mu chosen so ln2 * mu * xi = 1: points with snr < 1 clamp, snr = 1 sits
  // exactly on the boundary, snr > 1 stays interior.
  const double mu = 1.0 / kLn2;
  const TransmissionProfile t = transmission_from_multipliers({mu}, cs, snr);
  CHECK(t.values[0] > 0.0);
  CHECK(t.values[1] == 0.0);
  CHECK(t.values[2] == 0.0);
}

TEST_CASE("transmission is zero wherever the SNR mask is zero") {
  SnrProfile snr;
  snr.frequencies = {1e9, 2e9, 3e9, 4e9};
  snr.values = {0.0, 4.0, 4.0, 0.0};
  const TransmissionProfile t =
      transmission_from_multipliers({1e-11}, {flat_constraint(1e9)}, snr);
  CHECK(t.values[0] == 0.0);
  CHECK(t.values[3] == 0.0);
  CHECK(t.values[1] > 0.0);
}

TEST_CASE("optimal profile dominates the flat level and rises with frequency") {
  const ChuSetup s = chu_setup(4.2e9);
  const OptimizationResult res = solve(s.model.ideal, s.constraints);
  const TransmissionProfile ff = frequency_flat(s.constraints, s.model.grid);
  const double t_ff = ff.values.front();

  const auto peak = std::max_element(res.profile.values.begin(), res.profile.values.end());
  CHECK(*peak > t_ff);
  CHECK(*peak < 1.0);

  size_t above = 0;
  for (double t : res.profile.values)
    if (t > t_ff) ++above;
  CHECK(above * 2 > res.profile.values.size());

  // The f^-4 weight makes transmission cheap at high frequency, so the
  // waterfilling level at the top band edge exceeds the bottom edge.
  CHECK(res.profile.values.back() > res.profile.values.front());
}

TEST_CASE("full-band solve binds the f^-4 constraint only") {
  const ChuSetup s = chu_setup(4.2e9);
  const OptimizationResult res = solve(s.model.ideal, s.constraints);

  CHECK(res.multipliers[0] == 0.0);
  CHECK_THAT(res.multipliers[1], WithinRel(1.68e41, 2e-2));
  CHECK(std::abs(res.slack[1]) <= 1e-6 * s.constraints[1].bound);
  CHECK(res.slack[0] > 0.0);
  CHECK_FALSE(res.joint_refinement_used);
  CHECK_THAT(res.rate_bps, WithinRel(2.229e9, 1e-3));

  const double r_ideal = rate(ideal_profile(s.model.grid), s.model.ideal);
  CHECK(res.rate_bps <= r_ideal);
  CHECK(feasibility_check(s.constraints, res.profile).feasible);
}

TEST_CASE("frozen solve fixture at 2.8 GHz bandwidth") {
  const ChuSetup s = chu_setup(2.8e9);
  const OptimizationResult res = solve(s.model.ideal, s.constraints);
  CHECK_THAT(res.rate_bps, WithinRel(2.365393232e9, 1e-4));
  CHECK(res.multipliers[0] == 0.0);
  CHECK_THAT(res.multipliers[1], WithinRel(1.049504e41, 1e-3));
}

TEST_CASE("relaxing the bounds recovers the ideal rate") {
  const ChuSetup s = chu_setup(4.2e9);
  std::vector<BodeFanoConstraint> relaxed = s.constraints;
  for (auto& c : relaxed) c.bound *= 1e6;
  const OptimizationResult res = solve(s.model.ideal, relaxed);
  const double r_ideal = rate(ideal_profile(s.model.grid), s.model.ideal);
  CHECK_THAT(res.rate_bps, WithinRel(r_ideal, 1e-3));
}

TEST_CASE("solve rejects nonpositive bounds") {
  const ChuSetup s = chu_setup(4.2e9);
  std::vector<BodeFanoConstraint> bad = s.constraints;
  bad[0].bound = -1.0;
  CHECK_THROWS_AS(solve(s.model.ideal, bad), std::invalid_argument);
}

TEST_CASE("frequency-flat level matches the closed-form reflection bounds") {
  const ChuSetup s = chu_setup(4.2e9);
  const double f_lo = 4.9e9, f_hi = 9.1e9;

  const double i1 = (1.0 / (2.0 * kPi * kPi)) * (1.0 / f_lo - 1.0 / f_hi);
  const double i2 = (1.0 / (24.0 * std::pow(kPi, 4.0))) *
                    (1.0 / std::pow(f_lo, 3.0) - 1.0 / std::pow(f_hi, 3.0));
  CHECK_THAT(i1, WithinRel(4.7717982877082158e-12, 1e-12));
  CHECK_THAT(i2, WithinRel(3.0681790509592242e-33, 1e-12));

  // Frozen reference levels; the residue bounds feeding the exponent are
  // accurate to ~1e-9 and the exponential stretches that to ~1e-7 here.
  const double r1 = std::exp(-s.constraints[0].bound / i1);
  const double r2 = std::exp(-s.constraints[1].bound / i2);
  CHECK_THAT(r1, WithinRel(0.0024844686275552101, 1e-6));
  CHECK_THAT(r2, WithinRel(0.27987606181694391, 1e-6));

  const TransmissionProfile ff = frequency_flat(s.constraints, s.model.grid);
  const double t_ff = 1.0 - std::max(r1, r2);
  CHECK_THAT(ff.values.front(), WithinRel(t_ff, 1e-9));
  CHECK_THAT(ff.values.back(), WithinRel(t_ff, 1e-9));
  CHECK_THAT(ff.values.front(), WithinAbs(0.719, 5e-3));

  const FeasibilityReport rep = feasibility_check(s.constraints, ff);
  CHECK(rep.feasible);
  CHECK(std::abs(rep.slack[1]) <= 1e-6 * s.constraints[1].bound);
}

TEST_CASE("vanishing bandwidth drives the flat level to one") {
  const ChuSetup s = chu_setup(4.2e9);
  std::vector<double> tiny(33);
  for (size_t i = 0; i < tiny.size(); ++i)
    tiny[i] = 6.9999e9 + (7.0001e9 - 6.9999e9) * i / (tiny.size() - 1.0);
  const TransmissionProfile ff = frequency_flat(s.constraints, tiny);
  CHECK(ff.values.front() >= 1.0 - 1e-9);
}

TEST_CASE("ideal profile is one on band, rate-complete, and infeasible") {
  const ChuSetup s = chu_setup(4.2e9);
  const TransmissionProfile one = ideal_profile(s.model.grid);
  CHECK(one.values[s.model.grid.size() / 2] == 1.0);
  CHECK(rate(one, s.model.ideal) > 0.0);
  CHECK_FALSE(feasibility_check(s.constraints, one).feasible);
}

TEST_CASE("KKT residual suite holds on solved scenarios") {
  for (double b : {2.8e9, 4.2e9}) {
    const ChuSetup s = chu_setup(b);
    const OptimizationResult res = solve(s.model.ideal, s.constraints);
    CHECK(res.stationarity_residual <= 1e-6);
    for (size_t i = 0; i < res.multipliers.size(); ++i) {
      CHECK(res.multipliers[i] >= 0.0);
      const bool cs_ok =
          res.multipliers[i] == 0.0 || std::abs(res.slack[i]) <= 1e-6 * s.constraints[i].bound;
      CHECK(cs_ok);
      CHECK(res.slack[i] >= -1e-6 * s.constraints[i].bound);
    }
  }
}

TEST_CASE("waterfilling is monotone in SNR under a flat weight") {
  const SnrProfile snr = synthetic_snr(64, 17);
  const std::vector<BodeFanoConstraint> cs{flat_constraint(2e9)};
  const OptimizationResult res = solve(snr, cs);

  std::vector<size_t> idx(snr.values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](size_t a, size_t b) { return snr.values[a] < snr.values[b]; });
  for (size_t k = 1; k < idx.size(); ++k)
    CHECK(res.profile.values[idx[k]] >= res.profile.values[idx[k - 1]] - 1e-12);
}

TEST_CASE("projected gradient ascent reproduces the solver rate on a coarse grid") {
  const ChuSetup s = chu_setup(4.2e9, 64);
  const std::vector<BodeFanoConstraint> active{s.constraints[1]};
  const OptimizationResult res = solve(s.model.ideal, active);
  const double brute = pga_rate(s.model.ideal, active[0], 1000);
  CHECK_THAT(brute, WithinRel(res.rate_bps, 1e-2));
}
