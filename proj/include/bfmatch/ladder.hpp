// Lossless LC-ladder matching networks: ABCD/S evaluation, transmission into
// a reflective load, Nelder-Mead fitting to a target profile, and the
// two-element conjugate-match benchmark.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bfmatch/constants.hpp"
#include "bfmatch/optimizer.hpp"
#include "bfmatch/rational.hpp"
#include "bfmatch/scenario.hpp"
#include "bfmatch/touchstone.hpp"
#include "bfmatch/transmission.hpp"

namespace bfmatch {

struct LadderNetwork {
  int order = 0;                                   // number of (L, C) stages
  std::vector<std::pair<double, double>> elements; // (L_i henries, C_i farads)
  double z0 = 50.0;
  bool series_first = true;  // series-L leads each stage, then shunt-C

  void validate() const {
    if (order < 1 || order > 10) throw std::invalid_argument("ladder order must be in 1..10");
    if (static_cast<int>(elements.size()) != order)
      throw std::invalid_argument("ladder element count does not match order");
    for (const auto& [l, c] : elements)
      if (!(l > 0.0) || !(c > 0.0) || !std::isfinite(l) || !std::isfinite(c))
        throw std::invalid_argument("ladder element values must be positive and finite");
  }
};

namespace detail {

// Cascade primitives, source side on the left (right-multiplication order).
inline Eigen::Matrix2cd abcd_series(cplx z) {
  Eigen::Matrix2cd m;
  m << 1.0, z, 0.0, 1.0;
  return m;
}

inline Eigen::Matrix2cd abcd_shunt(cplx y) {
  Eigen::Matrix2cd m;
  m << 1.0, 0.0, y, 1.0;
  return m;
}

inline Eigen::Matrix2cd abcd_to_scattering(const Eigen::Matrix2cd& m, double z0) {
  const cplx a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const cplx den = a + b / z0 + c * z0 + d;
  Eigen::Matrix2cd s;
  s(0, 0) = (a + b / z0 - c * z0 - d) / den;
  s(0, 1) = 2.0 * (a * d - b * c) / den;
  s(1, 0) = 2.0 / den;
  s(1, 1) = (-a + b / z0 - c * z0 + d) / den;
  return s;
}

inline cplx interp_complex(const SampledResponse& sr, double f) {
  const auto& xs = sr.frequencies;
  if (f <= xs.front()) return sr.values.front();
  if (f >= xs.back()) return sr.values.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), f);
  const size_t hi = it - xs.begin();
  const double t = (f - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
  return sr.values[hi - 1] + t * (sr.values[hi] - sr.values[hi - 1]);
}

// T(f) of a matching two-port terminated by the reflective load s_eq.
inline double transmission_point(const Eigen::Matrix2cd& s, cplx s_eq) {
  const cplx den = 1.0 - s(1, 1) * s_eq;
  if (std::abs(den) < 1e-12)
    throw std::domain_error("transmission_into_load: resonant denominator");
  const double t = std::norm(s(1, 0)) * (1.0 - std::norm(s_eq)) / std::norm(den);
  return std::clamp(t, 0.0, 1.0);
}

}  // namespace detail

inline Eigen::Matrix2cd ladder_abcd(const LadderNetwork& net, double f) {
  const double w = 2.0 * kPi * f;
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  for (const auto& [l, c] : net.elements) {
    if (net.series_first) {
      m = m * detail::abcd_series(kJ * w * l);
      m = m * detail::abcd_shunt(kJ * w * c);
    } else {
      m = m * detail::abcd_shunt(kJ * w * c);
      m = m * detail::abcd_series(kJ * w * l);
    }
  }
  return m;
}

inline Eigen::Matrix2cd two_port_scattering(const LadderNetwork& net, double f) {
  if (!(f > 0.0)) throw std::invalid_argument("two_port_scattering: f must be positive");
  return detail::abcd_to_scattering(ladder_abcd(net, f), net.z0);
}

inline TransmissionProfile transmission_into_load(const LadderNetwork& net,
                                                  const SampledResponse& load,
                                                  const std::vector<double>& grid) {
  TransmissionProfile out;
  out.provenance = Strategy::ladder;
  out.frequencies = grid;
  out.values.reserve(grid.size());
  for (double f : grid) {
    const Eigen::Matrix2cd s = two_port_scattering(net, f);
    out.values.push_back(detail::transmission_point(s, detail::interp_complex(load, f)));
  }
  return out;
}

struct FitLadderOptions {
  int restarts = 16;
  int iterations = 4000;
  std::uint64_t seed = 0;
  int max_grid = 301;                      // objective grid decimation cap
  std::vector<LadderNetwork> warm_starts;  // extra deterministic initial points
};

struct FitLadderReport {
  double objective = 0.0;   // weighted mean squared error over the band
  double rate_ratio = 0.0;  // R(T_net) / R(T_target)
  int best_start = -1;      // restart index, or -(k+1) for warm start k
  int evaluations = 0;
};

class FitDivergedError : public std::runtime_error {
 public:
  LadderNetwork best_candidate;
  FitDivergedError(std::string msg, LadderNetwork best)
      : std::runtime_error(std::move(msg)), best_candidate(std::move(best)) {}
};

namespace detail {

constexpr double kLogLMin = -27.631021115928547;  // ln 1e-12
constexpr double kLogLMax = -13.815510557964274;  // ln 1e-6
constexpr double kLogCMin = -34.538776394910684;  // ln 1e-15
constexpr double kLogCMax = -20.72326583694641;   // ln 1e-9

struct LadderObjective {
  std::vector<double> freqs;
  std::vector<cplx> s_eq;
  std::vector<double> target;
  std::vector<double> weight;
  double z0;
  bool series_first;
  mutable int evaluations = 0;

  LadderNetwork network(const std::vector<double>& x) const {
    LadderNetwork net;
    net.order = static_cast<int>(x.size()) / 2;
    net.z0 = z0;
    net.series_first = series_first;
    for (int i = 0; i < net.order; ++i) {
      const double l = std::exp(std::clamp(x[2 * i], kLogLMin, kLogLMax));
      const double c = std::exp(std::clamp(x[2 * i + 1], kLogCMin, kLogCMax));
      net.elements.emplace_back(l, c);
    }
    return net;
  }

  double operator()(const std::vector<double>& x) const {
    ++evaluations;
    double penalty = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      const double lo = (i % 2 == 0) ? kLogLMin : kLogCMin;
      const double hi = (i % 2 == 0) ? kLogLMax : kLogCMax;
      if (x[i] < lo) penalty += 1e3 * (lo - x[i]) * (lo - x[i]);
      if (x[i] > hi) penalty += 1e3 * (x[i] - hi) * (x[i] - hi);
    }
    const LadderNetwork net = network(x);
    double sse = 0.0, wsum = 0.0;
    for (size_t i = 0; i < freqs.size(); ++i) {
      const Eigen::Matrix2cd s = detail::abcd_to_scattering(ladder_abcd(net, freqs[i]), z0);
      double t;
      try {
        t = detail::transmission_point(s, s_eq[i]);
      } catch (const std::domain_error&) {
        return 1e9 + penalty;
      }
      const double e = t - target[i];
      sse += weight[i] * e * e;
      wsum += weight[i];
    }
    return sse / wsum + penalty;
  }
};

// Nelder-Mead in log-element space. Standard coefficients; simplex spread
// break keeps long flat runs from burning the iteration budget.
inline std::pair<std::vector<double>, double> nelder_mead(const LadderObjective& obj,
                                                          std::vector<double> x0,
                                                          int iterations) {
  const size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  for (size_t i = 0; i < n; ++i) pts[i + 1][i] += 0.5;
  std::vector<double> fv(n + 1);
  for (size_t i = 0; i <= n; ++i) fv[i] = obj(pts[i]);

  std::vector<size_t> idx(n + 1);
  for (int it = 0; it < iterations; ++it) {
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return fv[a] < fv[b]; });
    const size_t best = idx[0], worst = idx[n], second = idx[n - 1];
    if (fv[worst] - fv[best] < 1e-15 * (1.0 + std::abs(fv[best]))) break;

    std::vector<double> centroid(n, 0.0);
    for (size_t k = 0; k <= n; ++k) {
      if (k == worst) continue;
      for (size_t d = 0; d < n; ++d) centroid[d] += pts[k][d];
    }
    for (double& c : centroid) c /= static_cast<double>(n);

    auto affine = [&](double coef) {
      std::vector<double> p(n);
      for (size_t d = 0; d < n; ++d) p[d] = centroid[d] + coef * (centroid[d] - pts[worst][d]);
      return p;
    };

    std::vector<double> xr = affine(1.0);
    const double fr = obj(xr);
    if (fr < fv[idx[0]]) {
      std::vector<double> xe = affine(2.0);
      const double fe = obj(xe);
      if (fe < fr) {
        pts[worst] = std::move(xe);
        fv[worst] = fe;
      } else {
        pts[worst] = std::move(xr);
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      pts[worst] = std::move(xr);
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      std::vector<double> xc = affine(outside ? 0.5 : -0.5);
      const double fc = obj(xc);
      if (fc < std::min(fr, fv[worst])) {
        pts[worst] = std::move(xc);
        fv[worst] = fc;
      } else {
        for (size_t k = 0; k <= n; ++k) {
          if (k == best) continue;
          for (size_t d = 0; d < n; ++d) pts[k][d] = pts[best][d] + 0.5 * (pts[k][d] - pts[best][d]);
          fv[k] = obj(pts[k]);
        }
      }
    }
  }
  size_t best = 0;
  for (size_t i = 1; i <= n; ++i)
    if (fv[i] < fv[best]) best = i;
  return {pts[best], fv[best]};
}

}  // namespace detail

inline std::pair<LadderNetwork, FitLadderReport> fit_ladder(const TransmissionProfile& target,
                                                            const SampledResponse& load,
                                                            const SnrProfile& snr, int order,
                                                            const FitLadderOptions& opt = {}) {
  if (order < 1 || order > 10) throw std::invalid_argument("fit_ladder: order must be in 1..10");
  target.validate();
  load.validate();

  detail::LadderObjective obj;
  obj.z0 = 50.0;
  obj.series_first = true;
  const size_t n = target.frequencies.size();
  const size_t stride = std::max<size_t>(1, (n + opt.max_grid - 1) / opt.max_grid);
  double snr_max = 0.0;
  for (double v : snr.values) snr_max = std::max(snr_max, v);
  for (size_t i = 0; i < n; i += stride) {
    const double f = target.frequencies[i];
    obj.freqs.push_back(f);
    obj.s_eq.push_back(detail::interp_complex(load, f));
    obj.target.push_back(target.values[i]);
    const double s = interp_at(snr.frequencies, snr.values, f);
    obj.weight.push_back(1.0 + (snr_max > 0.0 ? s / snr_max : 0.0));
  }
  if (obj.freqs.back() != target.frequencies.back()) {
    const double f = target.frequencies.back();
    obj.freqs.push_back(f);
    obj.s_eq.push_back(detail::interp_complex(load, f));
    obj.target.push_back(target.values.back());
    const double s = interp_at(snr.frequencies, snr.values, f);
    obj.weight.push_back(1.0 + (snr_max > 0.0 ? s / snr_max : 0.0));
  }

  // Both stage orientations are searched with the same restart seeds; a
  // one-stage up-transforming match needs the shunt element on the source
  // side, which series-first alone cannot realize.
  detail::LadderObjective obj_shunt = obj;
  obj_shunt.series_first = false;

  const size_t dim = 2 * static_cast<size_t>(order);
  std::vector<double> best_x;
  double best_f = std::numeric_limits<double>::infinity();
  int best_start = -1;
  const detail::LadderObjective* best_obj = &obj;

  auto consider = [&](const detail::LadderObjective& o, std::vector<double> x0, int tag) {
    auto [x, f] = detail::nelder_mead(o, std::move(x0), opt.iterations);
    if (f < best_f) {
      best_f = f;
      best_x = std::move(x);
      best_start = tag;
      best_obj = &o;
    }
  };

  for (const auto* o : {&obj, &obj_shunt}) {
    for (int r = 0; r < opt.restarts; ++r) {
      std::vector<double> x0(dim);
      if (r == 0) {
        for (size_t i = 0; i < dim; ++i)
          x0[i] = (i % 2 == 0) ? 0.5 * (detail::kLogLMin + detail::kLogLMax)
                               : 0.5 * (detail::kLogCMin + detail::kLogCMax);
      } else {
        std::mt19937_64 rng(opt.seed + static_cast<std::uint64_t>(r));
        std::uniform_real_distribution<double> ul(detail::kLogLMin, detail::kLogLMax);
        std::uniform_real_distribution<double> uc(detail::kLogCMin, detail::kLogCMax);
        for (size_t i = 0; i < dim; ++i) x0[i] = (i % 2 == 0) ? ul(rng) : uc(rng);
      }
      consider(*o, std::move(x0), r);
    }
  }
  for (size_t wsi = 0; wsi < opt.warm_starts.size(); ++wsi) {
    const LadderNetwork& ws = opt.warm_starts[wsi];
    std::vector<double> x0;
    for (const auto& [l, c] : ws.elements) {
      x0.push_back(std::log(l));
      x0.push_back(std::log(c));
    }
    // extend with near-transparent stages when warm start has lower order
    while (x0.size() < dim) {
      x0.push_back(detail::kLogLMin);
      x0.push_back(detail::kLogCMin);
    }
    x0.resize(dim);
    consider(ws.series_first ? obj : obj_shunt, std::move(x0), -static_cast<int>(wsi) - 1);
  }

  if (!std::isfinite(best_f) || best_x.empty()) {
    LadderNetwork fallback;
    fallback.order = order;
    fallback.z0 = obj.z0;
    fallback.elements.assign(order, {1e-9, 1e-12});
    throw FitDivergedError("fit_ladder: all restarts diverged", std::move(fallback));
  }

  LadderNetwork net = best_obj->network(best_x);
  net.validate();
  FitLadderReport report;
  report.objective = best_f;
  report.best_start = best_start;
  report.evaluations = obj.evaluations + obj_shunt.evaluations;
  const TransmissionProfile achieved = transmission_into_load(net, load, target.frequencies);
  const double target_rate = rate(target, snr);
  report.rate_ratio = target_rate > 0.0 ? rate(achieved, snr) / target_rate : 0.0;
  return {std::move(net), report};
}

inline TouchstoneData export_touchstone(const LadderNetwork& net, const std::vector<double>& grid) {
  TouchstoneData ts;
  ts.resistance = net.z0;
  ts.ports = 2;
  ts.format = TouchstoneFormat::ri;
  for (double f : grid) {
    const Eigen::Matrix2cd s = two_port_scattering(net, f);
    ts.frequencies.push_back(f);
    ts.data.push_back({s(0, 0), s(1, 0), s(0, 1), s(1, 1)});
  }
  return ts;
}

// Two-element conjugate match at f_c. Both L-section topologies and both
// reactance sign families are tried; exact-match candidates are ranked by a
// stored-energy proxy so the returned design is deterministic.
inline TransmissionProfile conjugate_match(const ScenarioConfig& cfg, const SampledResponse& load) {
  load.validate();
  const double fc = cfg.f_c;
  const double w_c = 2.0 * kPi * fc;
  const double z0 = cfg.z0;
  const cplx s_eq_c = detail::interp_complex(load, fc);
  const cplx zl = z0 * (1.0 + s_eq_c) / (1.0 - s_eq_c);
  const double rl = zl.real(), xl = zl.imag();
  if (!(rl > 0.0)) throw std::domain_error("conjugate_match: load has nonpositive resistance");

  enum class Kind { series_l, series_c, shunt_l, shunt_c };
  struct Elem {
    Kind kind;
    double value;
  };
  struct Candidate {
    std::vector<Elem> chain;  // source side first
    double energy = 0.0;
    bool ladder_form = false;  // series elements are all L, shunt all C
  };

  auto series_elem = [&](double x) {
    return x >= 0.0 ? Elem{Kind::series_l, x / w_c} : Elem{Kind::series_c, -1.0 / (w_c * x)};
  };
  auto shunt_elem = [&](double b) {
    return b >= 0.0 ? Elem{Kind::shunt_c, b / w_c} : Elem{Kind::shunt_l, -1.0 / (w_c * b)};
  };
  auto in_ladder_form = [](const std::vector<Elem>& chain) {
    for (const Elem& e : chain)
      if (e.kind == Kind::series_c || e.kind == Kind::shunt_l || !(e.value > 0.0)) return false;
    return true;
  };

  // Standard two-solution L-section family for the rl-vs-z0 case: the shunt
  // leg faces the higher-impedance side.
  std::vector<Candidate> candidates;
  if (rl < z0) {
    // source - shunt(B) - series(X) - load
    const double q = std::sqrt(z0 / rl - 1.0);
    for (double sign : {1.0, -1.0}) {
      const double x = sign * q * rl - xl;
      const double b = sign * q / z0;
      candidates.push_back({{shunt_elem(b), series_elem(x)}, 0.0, false});
    }
  } else {
    // source - series(X) - shunt(B) - load
    const double g = rl / (rl * rl + xl * xl);
    const double bl = -xl / (rl * rl + xl * xl);  // load susceptance
    if (1.0 / g > z0) {
      const double q = std::sqrt(1.0 / (g * z0) - 1.0);
      for (double sign : {1.0, -1.0}) {
        const double b = -bl + sign * g * q;
        const double x = -sign * q * z0;
        candidates.push_back({{series_elem(x), shunt_elem(b)}, 0.0, false});
      }
    }
  }
  for (auto& c : candidates) c.ladder_form = in_ladder_form(c.chain);
  if (candidates.empty()) throw std::domain_error("conjugate_match: no L-section candidate");

  auto chain_abcd = [&](const std::vector<Elem>& chain, double f) {
    const double w = 2.0 * kPi * f;
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    for (const Elem& e : chain) {
      switch (e.kind) {
        case Kind::series_l: m = m * detail::abcd_series(kJ * w * e.value); break;
        case Kind::series_c: m = m * detail::abcd_series(1.0 / (kJ * w * e.value)); break;
        case Kind::shunt_c: m = m * detail::abcd_shunt(kJ * w * e.value); break;
        case Kind::shunt_l: m = m * detail::abcd_shunt(1.0 / (kJ * w * e.value)); break;
      }
    }
    return m;
  };

  // Stored-energy proxy at the matched operating point: unit source through
  // z0 gives the input node V = 1/2, I = 1/(2 z0).
  auto energy = [&](const std::vector<Elem>& chain) {
    cplx v = 0.5, i = 0.5 / z0;
    double e = 0.0;
    for (const Elem& el : chain) {
      switch (el.kind) {
        case Kind::series_l:
          e += el.value * std::norm(i);
          v -= kJ * w_c * el.value * i;
          break;
        case Kind::series_c: {
          const cplx drop = i / (kJ * w_c * el.value);
          e += el.value * std::norm(drop);
          v -= drop;
          break;
        }
        case Kind::shunt_c:
          e += el.value * std::norm(v);
          i -= kJ * w_c * el.value * v;
          break;
        case Kind::shunt_l: {
          const cplx branch = v / (kJ * w_c * el.value);
          e += el.value * std::norm(branch);
          i -= branch;
          break;
        }
      }
    }
    return e;
  };

  // A design the ladder engine can express (series L, shunt C) is preferred
  // so the profile matches a realizable one-stage LadderNetwork; ties and
  // the remaining family go by lower stored energy.
  const Candidate* best = nullptr;
  for (auto& c : candidates) {
    const Eigen::Matrix2cd s = detail::abcd_to_scattering(chain_abcd(c.chain, fc), z0);
    const double t_c = detail::transmission_point(s, s_eq_c);
    if (t_c < 0.999) continue;
    c.energy = energy(c.chain);
    if (!best || std::make_pair(!c.ladder_form, c.energy) <
                     std::make_pair(!best->ladder_form, best->energy))
      best = &c;
  }
  if (!best) throw std::domain_error("conjugate_match: no candidate achieves the design match");

  if (best->ladder_form) {
    LadderNetwork net;
    net.order = 1;
    net.z0 = z0;
    net.series_first = best->chain.front().kind == Kind::series_l;
    const double l = net.series_first ? best->chain[0].value : best->chain[1].value;
    const double cval = net.series_first ? best->chain[1].value : best->chain[0].value;
    net.elements = {{l, cval}};
    net.validate();
    TransmissionProfile out = transmission_into_load(net, load, load.frequencies);
    out.provenance = Strategy::conjugate_match;
    return out;
  }

  TransmissionProfile out;
  out.provenance = Strategy::conjugate_match;
  out.frequencies = load.frequencies;
  out.values.reserve(load.frequencies.size());
  for (size_t i = 0; i < load.frequencies.size(); ++i) {
    const double f = load.frequencies[i];
    const Eigen::Matrix2cd s = detail::abcd_to_scattering(chain_abcd(best->chain, f), z0);
    out.values.push_back(detail::transmission_point(s, load.values[i]));
  }
  return out;
}

}  // namespace bfmatch
