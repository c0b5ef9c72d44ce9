// Constrained achievable-rate maximization (KKT waterfilling) and the
// benchmark transmission strategies.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "bfmatch/bodefano.hpp"
#include "bfmatch/constants.hpp"
#include "bfmatch/network.hpp"
#include "bfmatch/quadrature.hpp"
#include "bfmatch/transmission.hpp"

namespace bfmatch {

struct OptimizationResult {
  TransmissionProfile profile;
  std::vector<double> multipliers;
  double rate_bps = 0.0;
  std::vector<double> slack;
  double stationarity_residual = 0.0;  // max relative residual at interior points
  bool joint_refinement_used = false;  // single-constraint bisection sufficed when false
};

// Achievable rate: integral of log2(1 + SNR(f) T(f)) over the band.
inline double rate(const TransmissionProfile& profile, const SnrProfile& snr) {
  const auto& fs = snr.frequencies;
  auto integrand = [&](double f) {
    const double s = interp_at(snr.frequencies, snr.values, f);
    const double t = profile.at(f);
    return std::log2(1.0 + s * t);
  };
  return integrate_cells(std::span<const double>(fs.data(), fs.size()), integrand);
}

// Numerical ceiling on transmission. Profiles closer to unity than one part
// in 1e9 are indistinguishable in the rate integral, while ln(1/(1 - T))
// loses all precision to cancellation in the subtraction; a constraint whose
// integral stays below its bound even at this ceiling cannot be driven tight
// by any representable profile and is treated as inactive.
inline constexpr double kMaxTransmission = 1.0 - 1e-9;

// Pointwise waterfilling profile for fixed multipliers:
//   T*(f) = [ (1 - ln2 M(f)/SNR(f)) / (1 + ln2 M(f)) ]+,  M = sum mu_i xi_i,
// clipped to the kMaxTransmission ceiling.
inline TransmissionProfile transmission_from_multipliers(
    const std::vector<double>& mus, const std::vector<BodeFanoConstraint>& constraints,
    const SnrProfile& snr) {
  if (mus.size() != constraints.size())
    throw std::invalid_argument("transmission_from_multipliers: size mismatch");
  if (std::all_of(mus.begin(), mus.end(), [](double m) { return m == 0.0; }))
    throw std::invalid_argument(
        "transmission_from_multipliers: all multipliers zero; the unconstrained "
        "profile is T = 1 (use the ideal benchmark instead)");
  TransmissionProfile out;
  out.provenance = Strategy::optimal;
  out.frequencies = snr.frequencies;
  out.values.resize(snr.values.size());
  for (size_t i = 0; i < snr.values.size(); ++i) {
    const double s = snr.values[i];
    if (!(s > 0.0)) {
      out.values[i] = 0.0;
      continue;
    }
    double m = 0.0;
    for (size_t k = 0; k < mus.size(); ++k)
      if (mus[k] != 0.0) m += mus[k] * constraints[k].weight(snr.frequencies[i]);
    const double t = (1.0 - kLn2 * m / s) / (1.0 + kLn2 * m);
    out.values[i] = std::clamp(t, 0.0, kMaxTransmission);
  }
  return out;
}

namespace detail {

inline double snr_scale(const SnrProfile& snr) {
  std::vector<double> pos;
  pos.reserve(snr.values.size());
  for (double v : snr.values)
    if (v > 0.0) pos.push_back(v);
  if (pos.empty()) throw std::invalid_argument("solve: SNR identically zero");
  std::nth_element(pos.begin(), pos.begin() + pos.size() / 2, pos.end());
  return pos[pos.size() / 2];
}

// A transmission that reaches 1.0 exactly (possible when the bound is so
// loose that 1 - T underflows) makes the integral diverge; for bracketing
// and feasibility purposes that is simply an infinite lhs.
inline double lhs_or_inf(const BodeFanoConstraint& c, const TransmissionProfile& t) {
  try {
    return constraint_lhs(c, t);
  } catch (const std::domain_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

// Bisect mu_i (all others fixed) until constraint i is tight: lhs_i = B_i.
// The lhs is monotone decreasing in mu_i. The bracket starts at the physical
// multiplier scale median(SNR)/(ln2 xi(f_mid)); SI-unit weights make the
// natural scale ~1e41, far beyond any unit-magnitude initial bracket.
inline double bisect_single(size_t i, std::vector<double> mus,
                            const std::vector<BodeFanoConstraint>& constraints,
                            const SnrProfile& snr, double tol) {
  const auto& c = constraints[i];
  const double f_mid = snr.frequencies[snr.frequencies.size() / 2];
  const double mu_scale = snr_scale(snr) / (kLn2 * c.weight(f_mid));
  auto lhs_at = [&](double mu) {
    mus[i] = mu;
    return lhs_or_inf(c, transmission_from_multipliers(mus, constraints, snr));
  };
  double lo = 0.0, hi = mu_scale;
  int doublings = 0;
  while (lhs_at(hi) > c.bound) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 128)
      throw std::runtime_error("solve: bisection bracket not found after 128 doublings");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double l = lhs_at(mid);
    if (l > c.bound)
      lo = mid;
    else
      hi = mid;
    if (std::abs(l - c.bound) <= tol * c.bound) return mid;
  }
  return hi;  // feasible side of the bracket
}

inline double stationarity_residual(const TransmissionProfile& t, const std::vector<double>& mus,
                                    const std::vector<BodeFanoConstraint>& constraints,
                                    const SnrProfile& snr) {
  double worst = 0.0;
  for (size_t i = 0; i < t.values.size(); ++i) {
    const double tv = t.values[i];
    const double s = snr.values[i];
    // Points at either clip boundary satisfy an inequality, not the interior
    // equation. The ceiling also keeps 1 - tv >= 1e-9 at certified points, so
    // the cancellation in evaluating the residual stays below ~1e-6.
    if (!(tv > 1e-12 && tv < kMaxTransmission) || !(s > 0.0)) continue;
    double m = 0.0;
    for (size_t k = 0; k < mus.size(); ++k)
      m += mus[k] * constraints[k].weight(t.frequencies[i]);
    const double lead = s / (1.0 + s * tv);
    const double resid = std::abs(-lead + kLn2 * m / (1.0 - tv));
    worst = std::max(worst, resid / lead);
  }
  return worst;
}

}  // namespace detail

// KKT waterfilling solve: one-at-a-time bisection candidates, feasibility
// filter, then cyclic (Gauss-Seidel) refinement if no single-constraint
// candidate is feasible. Constraints that stay slack even at the
// kMaxTransmission ceiling are inactive by construction and keep mu = 0; on
// narrow bands this can hold for every constraint at once, in which case the
// ceiling profile itself is the optimum.
inline OptimizationResult solve(const SnrProfile& snr,
                                const std::vector<BodeFanoConstraint>& constraints,
                                double tol = 1e-6) {
  if (constraints.empty()) throw std::invalid_argument("solve: need at least one constraint");
  for (const auto& c : constraints)
    if (!(c.bound > 0.0)) throw std::invalid_argument("solve: nonpositive bound");

  const size_t n = constraints.size();

  // Supremum of representable profiles, zero where the channel carries no
  // power. Its integrals bound every achievable lhs.
  TransmissionProfile t_cap;
  t_cap.provenance = Strategy::optimal;
  t_cap.frequencies = snr.frequencies;
  t_cap.values.reserve(snr.values.size());
  for (double s : snr.values) t_cap.values.push_back(s > 0.0 ? kMaxTransmission : 0.0);

  std::vector<double> cap_lhs(n);
  bool all_inactive = true;
  for (size_t i = 0; i < n; ++i) {
    cap_lhs[i] = detail::lhs_or_inf(constraints[i], t_cap);
    all_inactive = all_inactive && cap_lhs[i] <= constraints[i].bound * (1.0 + tol);
  }
  if (all_inactive) {
    OptimizationResult res;
    res.multipliers.assign(n, 0.0);
    res.profile = t_cap;
    res.rate_bps = rate(res.profile, snr);
    for (size_t k = 0; k < n; ++k) res.slack.push_back(constraints[k].bound - cap_lhs[k]);
    res.stationarity_residual =
        detail::stationarity_residual(res.profile, res.multipliers, constraints, snr);
    return res;
  }

  struct Candidate {
    std::vector<double> mus;
    TransmissionProfile profile;
    bool feasible;
    double rate;
  };
  std::vector<Candidate> candidates;
  for (size_t i = 0; i < n; ++i) {
    if (cap_lhs[i] <= constraints[i].bound * (1.0 + tol)) continue;  // cannot be driven tight
    std::vector<double> mus(n, 0.0);
    mus[i] = detail::bisect_single(i, mus, constraints, snr, tol);
    TransmissionProfile t = transmission_from_multipliers(mus, constraints, snr);
    bool feasible = true;
    for (size_t k = 0; k < n; ++k) {
      const double l = detail::lhs_or_inf(constraints[k], t);
      if (l > constraints[k].bound * (1.0 + tol)) feasible = false;
    }
    candidates.push_back({std::move(mus), std::move(t), feasible, 0.0});
  }

  const Candidate* best = nullptr;
  for (auto& c : candidates) {
    if (!c.feasible) continue;
    c.rate = rate(c.profile, snr);
    if (!best || c.rate > best->rate) best = &c;
  }

  std::vector<double> mus;
  bool refined = false;
  if (best) {
    mus = best->mus;
  } else {
    refined = true;
    // Joint refinement: cyclically re-tighten each violated constraint while
    // keeping the other multipliers fixed, until all constraints hold.
    mus.assign(n, 0.0);
    for (int outer = 0; outer < 64; ++outer) {
      bool all_ok = true;
      for (size_t i = 0; i < n; ++i) {
        std::vector<double> probe = mus;
        probe[i] = 0.0;
        TransmissionProfile t =
            std::all_of(probe.begin(), probe.end(), [](double m) { return m == 0.0; })
                ? t_cap
                : transmission_from_multipliers(probe, constraints, snr);
        const double l0 = detail::lhs_or_inf(constraints[i], t);
        if (l0 <= constraints[i].bound * (1.0 + tol)) {
          if (mus[i] != 0.0) all_ok = false;
          mus[i] = 0.0;  // complementary slackness: inactive constraint
          continue;
        }
        const double updated = detail::bisect_single(i, probe, constraints, snr, tol);
        if (std::abs(updated - mus[i]) > tol * std::max(updated, mus[i])) all_ok = false;
        mus[i] = updated;
      }
      TransmissionProfile t = transmission_from_multipliers(mus, constraints, snr);
      bool feasible = true;
      for (size_t k = 0; k < n; ++k)
        if (detail::lhs_or_inf(constraints[k], t) > constraints[k].bound * (1.0 + tol))
          feasible = false;
      if (feasible && all_ok) break;
    }
  }

  OptimizationResult res;
  res.joint_refinement_used = refined;
  res.multipliers = mus;
  res.profile = transmission_from_multipliers(mus, constraints, snr);
  res.profile.provenance = Strategy::optimal;
  res.rate_bps = rate(res.profile, snr);
  for (size_t k = 0; k < n; ++k)
    res.slack.push_back(constraints[k].bound - detail::lhs_or_inf(constraints[k], res.profile));
  res.stationarity_residual =
      detail::stationarity_residual(res.profile, mus, constraints, snr);
  return res;
}

// Frequency-flat benchmark: T_ff = 1 - max_i exp(-B_i / integral_band xi_i).
inline TransmissionProfile frequency_flat(const std::vector<BodeFanoConstraint>& constraints,
                                          const std::vector<double>& grid) {
  if (grid.size() < 2) throw std::invalid_argument("frequency_flat: need a band grid");
  double r_max = 0.0;
  for (const auto& c : constraints) {
    const double xi_int = integrate(c.weight, grid.front(), grid.back(),
                                    QuadratureOptions{1e-12, 0.0, 4000});
    r_max = std::max(r_max, std::exp(-c.bound / xi_int));
  }
  TransmissionProfile out;
  out.provenance = Strategy::frequency_flat;
  out.frequencies = grid;
  out.values.assign(grid.size(), 1.0 - r_max);
  return out;
}

inline TransmissionProfile ideal_profile(const std::vector<double>& grid) {
  TransmissionProfile out;
  out.provenance = Strategy::ideal;
  out.frequencies = grid;
  out.values.assign(grid.size(), 1.0);
  return out;
}

}  // namespace bfmatch
