// Circuit models: Chu antennas, coupled two-element array, beamformer
// combination, channel responses, and SNR profiles.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "bfmatch/constants.hpp"
#include "bfmatch/rational.hpp"
#include "bfmatch/scenario.hpp"

namespace bfmatch {

struct MultiportScattering {
  std::vector<double> frequencies;
  std::vector<Eigen::MatrixXcd> matrices;  // one N x N matrix per frequency
};

struct Beamformer {
  Eigen::VectorXcd s_f21;       // frequency-flat combining vector, unit norm
  cplx s_f11{0.0, 0.0};
  Eigen::MatrixXcd s_f22;       // zero matrix for the modes used here
  bool reciprocal = true;       // s_F12 = s_F21^T
};

struct ChannelResponse {
  std::vector<double> frequencies;
  std::vector<Eigen::VectorXcd> s_rt;  // N x 1 per frequency
};

struct SnrProfile {
  std::vector<double> frequencies;
  std::vector<double> values;  // dimensionless, zero outside the band
};

inline cplx z_to_s(cplx z, double r_ref) {
  const cplx den = z + r_ref;
  if (den == cplx{0.0, 0.0}) throw std::domain_error("z_to_s: Z + R singular");
  return (z - r_ref) / den;
}

inline Eigen::MatrixXcd z_to_s(const Eigen::MatrixXcd& z, double r_ref) {
  const auto n = z.rows();
  const Eigen::MatrixXcd a = z + r_ref * Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd b = z - r_ref * Eigen::MatrixXcd::Identity(n, n);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
  if (!lu.isInvertible()) throw std::domain_error("z_to_s: Z + R*I singular");
  return lu.solve(b);
}

// Chu electric antenna: series capacitor C = a/(cR) feeding L || R with
// L = aR/c. Z_T(f) = R/x + R x/(1+x), x = j 2 pi f a/c.
inline cplx chu_impedance(const ScenarioConfig& cfg, double f) {
  if (!(f > 0.0)) throw std::domain_error("chu_impedance: f must be > 0");
  const cplx x = kJ * (2.0 * kPi * f * cfg.a / cfg.c);
  return cfg.R / x + cfg.R * x / (1.0 + x);
}

// S_T(s) = 1 / (2 s^2 a^2/c^2 + 2 s a/c + 1) in pole/zero form.
inline RationalFunction chu_scattering_rational(const ScenarioConfig& cfg) {
  const double k = cfg.a / cfg.c;
  RationalFunction fn;
  fn.poles = {cplx{-1.0, 1.0} / (2.0 * k), cplx{-1.0, -1.0} / (2.0 * k)};
  fn.gain = 1.0 / (2.0 * k * k);
  return fn;
}

// Mutual impedance between two identical Chu antennas at spacing d.
inline cplx mutual_impedance(const ScenarioConfig& cfg, double f) {
  if (!(f > 0.0 && cfg.d > 0.0))
    throw std::domain_error("mutual_impedance: need f > 0 and d > 0");
  const double re11 = chu_impedance(cfg, f).real();
  const double u = 2.0 * kPi * f * cfg.d / cfg.c;
  const cplx bracket = 1.0 / (kJ * u) - 1.0 / (u * u) + kJ / (u * u * u);
  return -1.5 * std::sqrt(re11 * re11) * bracket * std::exp(-kJ * u);
}

inline MultiportScattering array_scattering(const ScenarioConfig& cfg,
                                            const std::vector<double>& grid) {
  MultiportScattering out;
  out.frequencies = grid;
  out.matrices.reserve(grid.size());
  if (cfg.mode == BeamMode::single) {
    for (double f : grid) {
      Eigen::MatrixXcd s(1, 1);
      s(0, 0) = z_to_s(chu_impedance(cfg, f), cfg.R);
      out.matrices.push_back(std::move(s));
    }
    return out;
  }
  for (double f : grid) {
    const cplx z11 = chu_impedance(cfg, f);
    const cplx z12 = mutual_impedance(cfg, f);
    Eigen::MatrixXcd z(2, 2);
    z << z11, z12, z12, z11;
    out.matrices.push_back(z_to_s(z, cfg.R));
  }
  return out;
}

// Paper's frequency-flat lossless modes: s_F21 = (-j/sqrt(2)) [1, +/-1]^T,
// S_F11 = 0, S_F22 = 0.
inline Beamformer beamformer_for_mode(BeamMode mode) {
  Beamformer bf;
  if (mode == BeamMode::single) {
    bf.s_f21 = Eigen::VectorXcd::Ones(1);
    bf.s_f22 = Eigen::MatrixXcd::Zero(1, 1);
    return bf;
  }
  bf.s_f21 = Eigen::VectorXcd(2);
  const cplx w = -kJ / std::sqrt(2.0);
  bf.s_f21(0) = w;
  bf.s_f21(1) = (mode == BeamMode::even) ? w : -w;
  bf.s_f22 = Eigen::MatrixXcd::Zero(2, 2);
  return bf;
}

// S_eq = S_F11 + s_F21^T S_T (I - S_F22 S_T)^-1 s_F21 (reciprocal beamformer).
inline SampledResponse equivalent_load(const MultiportScattering& st, const Beamformer& bf,
                                       const std::vector<double>& grid) {
  SampledResponse out;
  out.frequencies = grid;
  out.values.reserve(grid.size());
  const auto n = bf.s_f21.size();
  for (size_t i = 0; i < grid.size(); ++i) {
    const Eigen::MatrixXcd& s = st.matrices[i];
    if (n == 1) {
      out.values.push_back(bf.s_f11 + s(0, 0) * bf.s_f21(0) * bf.s_f21(0));
      continue;
    }
    const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) - bf.s_f22 * s;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
    if (!lu.isInvertible()) throw std::domain_error("equivalent_load: singular I - S_F22 S_T");
    const Eigen::VectorXcd rhs = lu.solve(bf.s_f21);
    // Plain transpose, not adjoint: the combining vector is not conjugated.
    const cplx quad = (bf.s_f21.transpose() * (s * rhs))(0, 0);
    out.values.push_back(bf.s_f11 + quad);
  }
  return out;
}

// Receive antenna: single Chu with the transmit radius and resistance.
inline cplx receive_impedance(const ScenarioConfig& cfg, double f) {
  return chu_impedance(cfg, f);
}

// Wireless channel response s_RT(f). Single antenna:
//   (1 - S_T) c G Re(Z_T) / ((Z_0 + Z_R) 2 pi f d_txrx).
// Two-element array adds the steering entry exp(j 2 pi f (d/c) sin(theta)) and
// the (I2 - S_T) matrix factor; Re(Z_T) is the scalar element resistance.
inline ChannelResponse channel_response(const ScenarioConfig& cfg, const MultiportScattering& st,
                                        const std::vector<double>& grid) {
  ChannelResponse out;
  out.frequencies = grid;
  out.s_rt.reserve(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    const double f = grid[i];
    const cplx zr = receive_impedance(cfg, f);
    const double re_zt = chu_impedance(cfg, f).real();
    const cplx pref =
        cfg.c * cfg.gain * re_zt / (2.0 * kPi * f * cfg.d_txrx * (cfg.z0 + zr));
    if (cfg.mode == BeamMode::single) {
      Eigen::VectorXcd v(1);
      v(0) = pref * (1.0 - st.matrices[i](0, 0));
      out.s_rt.push_back(std::move(v));
      continue;
    }
    Eigen::VectorXcd steer(2);
    steer(0) = 1.0;
    steer(1) = std::exp(kJ * (2.0 * kPi * f * cfg.d / cfg.c * std::sin(cfg.theta)));
    const Eigen::MatrixXcd m =
        Eigen::MatrixXcd::Identity(2, 2) - st.matrices[i];
    out.s_rt.push_back(pref * (m * steer));
  }
  return out;
}

namespace detail {

// Common factor s_RT^T (I - S_F22 S_T)^-1 s_F21 of the SNR and channel forms.
inline cplx combined_gain(const Eigen::VectorXcd& s_rt, const Eigen::MatrixXcd& st,
                          const Beamformer& bf) {
  const auto n = bf.s_f21.size();
  const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) - bf.s_f22 * st;
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  if (!lu.isInvertible()) throw std::domain_error("combined_gain: singular I - S_F22 S_T");
  // Plain transpose product; .dot() would conjugate s_rt.
  return (s_rt.transpose() * lu.solve(bf.s_f21))(0, 0);
}

}  // namespace detail

// SNR_ideal(f) = |s_RT^T (I - S_F22 S_T)^-1 s_F21|^2 / (1 - |S_eq|^2) * E_s/N_0.
inline SnrProfile snr_ideal(const ScenarioConfig& cfg, const MultiportScattering& st,
                            const Beamformer& bf, const ChannelResponse& srt,
                            const std::vector<double>& grid) {
  const SampledResponse seq = equivalent_load(st, bf, grid);
  SnrProfile out;
  out.frequencies = grid;
  out.values.reserve(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < cfg.f_min || grid[i] > cfg.f_max) {
      out.values.push_back(0.0);
      continue;
    }
    const double mag2 = std::norm(detail::combined_gain(srt.s_rt[i], st.matrices[i], bf));
    const double denom = 1.0 - std::norm(seq.values[i]);
    if (!(denom > 0.0)) throw std::domain_error("snr_ideal: lossless load singularity");
    out.values.push_back(mag2 / denom * cfg.e_s / cfg.n_0);
  }
  return out;
}

// SNR with the source wired straight to the load: drops the 1/(1 - |S_eq|^2).
inline SnrProfile snr_no_match(const ScenarioConfig& cfg, const MultiportScattering& st,
                               const Beamformer& bf, const ChannelResponse& srt,
                               const std::vector<double>& grid) {
  SnrProfile out;
  out.frequencies = grid;
  out.values.reserve(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < cfg.f_min || grid[i] > cfg.f_max) {
      out.values.push_back(0.0);
      continue;
    }
    const double mag2 = std::norm(detail::combined_gain(srt.s_rt[i], st.matrices[i], bf));
    out.values.push_back(mag2 * cfg.e_s / cfg.n_0);
  }
  return out;
}

// Equivalent SISO channel through a two-port matching network:
//   H = s_RT^T (I - S_F22 S_T)^-1 s_F21 * S_M21 / (1 - S_M22 S_eq).
struct TwoPortSample {
  cplx s11, s21, s12, s22;
};

inline std::vector<cplx> equivalent_channel(const std::vector<TwoPortSample>& sm,
                                            const SampledResponse& seq,
                                            const ChannelResponse& srt,
                                            const MultiportScattering& st, const Beamformer& bf,
                                            const std::vector<double>& grid) {
  std::vector<cplx> out;
  out.reserve(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    const cplx g = detail::combined_gain(srt.s_rt[i], st.matrices[i], bf);
    const cplx den = 1.0 - sm[i].s22 * seq.values[i];
    if (std::abs(den) < 1e-12) throw std::domain_error("equivalent_channel: resonant denominator");
    out.push_back(g * sm[i].s21 / den);
  }
  return out;
}

// Bundled per-scenario circuit quantities used across the pipeline.
struct ScenarioModel {
  ScenarioConfig cfg;
  std::vector<double> grid;
  MultiportScattering st;
  Beamformer bf;
  ChannelResponse srt;
  SampledResponse s_eq;
  SnrProfile ideal;
  SnrProfile no_match;
};

inline ScenarioModel evaluate_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  ScenarioModel m;
  m.cfg = cfg;
  m.grid = cfg.grid();
  m.st = array_scattering(cfg, m.grid);
  m.bf = beamformer_for_mode(cfg.mode);
  m.srt = channel_response(cfg, m.st, m.grid);
  m.s_eq = equivalent_load(m.st, m.bf, m.grid);
  m.ideal = snr_ideal(cfg, m.st, m.bf, m.srt, m.grid);
  m.no_match = snr_no_match(cfg, m.st, m.bf, m.srt, m.grid);
  return m;
}

}  // namespace bfmatch
