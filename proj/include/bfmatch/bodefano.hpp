// Bode-Fano integral constraints derived from a passive rational load.
#pragma once

#include <cmath>
#include <limits>
#include <complex>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfmatch/constants.hpp"
#include "bfmatch/quadrature.hpp"
#include "bfmatch/rational.hpp"
#include "bfmatch/transmission.hpp"

namespace bfmatch {

enum class ConstraintKind { imaginary_axis, right_half_plane, infinity, origin_repeated };

inline std::string to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::imaginary_axis: return "imaginary_axis";
    case ConstraintKind::right_half_plane: return "right_half_plane";
    case ConstraintKind::infinity: return "infinity";
    case ConstraintKind::origin_repeated: return "origin_repeated";
  }
  return "?";
}

struct BodeFanoConstraint {
  ConstraintKind kind;
  cplx root{0.0, 0.0};              // representative root, rad/s
  int multiplicity = 1;
  double bound = 0.0;               // B_BF > 0
  std::function<double(double)> weight;  // xi_BF(f), f in Hz
  std::string label;
};

class UnsupportedRootError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_positive_bound(double b, const std::string& label) {
  if (!(b > 0.0))
    throw std::domain_error("derive_constraints: nonpositive bound for " + label +
                            " (modeling error: the load admits no transmission)");
}

}  // namespace detail

// Derive one constraint per qualifying reflection-equation root orbit.
// Roots of S(-s)S(s) = 1 always appear in {s, -s, conj(s), -conj(s)} orbits;
// one representative (Re >= 0, Im >= 0) is emitted per orbit.
inline std::vector<BodeFanoConstraint> derive_constraints(const RationalFunction& load,
                                                          double cluster_tol = 1e-6) {
  const ReflectionStructure rs = analyze_reflection(load, cluster_tol);
  std::vector<BodeFanoConstraint> out;

  for (const RootMultiplicity& wr : rs.w_roots) {
    const cplx w = wr.root;
    const int mw = wr.multiplicity;

    if (w == cplx{0.0, 0.0}) {
      // Origin root, s-multiplicity 2*mw. Only s^4 = 0 (mw == 2) carries
      // closed-form bounds: two constraints from the Taylor coefficients of
      // ln(1/S) at s = 0, weights 1/(2 pi^2 f^2) and 1/(8 pi^4 f^4).
      if (mw != 2) {
        std::ostringstream os;
        os << "derive_constraints: origin root of s-multiplicity " << 2 * mw
           << " unsupported (only multiplicity 4 has published bounds)";
        throw UnsupportedRootError(os.str());
      }
      const std::vector<cplx> c = log_taylor_coefficients(load, {0.0, 0.0}, 4);
      const double c1 = c[1].real();
      const double c3 = c[3].real();
      if (std::abs(c[1].imag()) > 1e-9 * std::abs(c1) + 1e-300 ||
          std::abs(c[3].imag()) > 1e-9 * std::abs(c3) + 1e-300)
        throw std::domain_error("derive_constraints: complex Taylor coefficient");
      detail::require_positive_bound(c1, "origin f^-2");
      detail::require_positive_bound(-c3, "origin f^-4");
      BodeFanoConstraint d1{ConstraintKind::origin_repeated, {0.0, 0.0}, 4, c1,
                            [](double f) { return 1.0 / (2.0 * kPi * kPi * f * f); },
                            "origin f^-2"};
      BodeFanoConstraint d2{ConstraintKind::origin_repeated, {0.0, 0.0}, 4, -c3,
                            [](double f) {
                              const double f2 = f * f;
                              return 1.0 / (8.0 * kPi * kPi * kPi * kPi * f2 * f2);
                            },
                            "origin f^-4"};
      out.push_back(std::move(d1));
      out.push_back(std::move(d2));
      continue;
    }

    if (w.imag() == 0.0 && w.real() < 0.0) {
      // Imaginary-axis pair s = +/- j omega. Tangency of |S(jw)| = 1 forces
      // even s-multiplicity, i.e. mw even; the supported case is mw == 2.
      if (mw != 2) {
        std::ostringstream os;
        os << "derive_constraints: imaginary-axis root with w-multiplicity " << mw
           << " unsupported";
        throw UnsupportedRootError(os.str());
      }
      const double omega = std::sqrt(-w.real());
      const double fi = omega / (2.0 * kPi);
      cplx sum{0.0, 0.0};
      for (const cplx& p : load.poles) sum += 1.0 / (p - kJ * omega);
      for (const cplx& z : load.zeros) sum += 1.0 / (z + kJ * omega);
      const double bound = -sum.real();
      if (std::abs(sum.imag()) > 1e-6 * std::max(1.0, std::abs(sum.real())) * (1.0 + omega))
        throw std::domain_error("derive_constraints: non-real imaginary-axis bound");
      detail::require_positive_bound(bound, "imaginary-axis");
      BodeFanoConstraint c{ConstraintKind::imaginary_axis, kJ * omega, 2, bound,
                           [fi](double f) {
                             const double d1 = fi - f;
                             const double d2 = fi + f;
                             return (1.0 / (d1 * d1) + 1.0 / (d2 * d2)) / (4.0 * kPi * kPi);
                           },
                           "imaginary_axis f_i=" + std::to_string(fi)};
      out.push_back(std::move(c));
      continue;
    }

    // Right-half-plane orbit: w complex or positive-real, simple root.
    if (mw != 1) {
      std::ostringstream os;
      os << "derive_constraints: repeated off-origin root (w-multiplicity " << mw
         << ") unsupported";
      throw UnsupportedRootError(os.str());
    }
    if (w.imag() < 0.0) continue;  // conjugate twin handles this orbit
    cplx s0 = std::sqrt(w);        // principal branch: Re >= 0
    if (s0.real() < 0.0) s0 = -s0;
    if (s0.imag() < 0.0) s0 = std::conj(s0);  // orbit representative

    // Bound: -ln |S(s0) prod(s0 + z)/prod(s0 - z)|. Expanding S cancels the
    // (s0 - z) factors, leaving gain * prod(s0 + z) / prod(s0 - p), which is
    // safe even when s0 coincides with a zero of S.
    cplx val{load.gain, 0.0};
    for (const cplx& z : load.zeros) val *= (s0 + z);
    for (const cplx& p : load.poles) val /= (s0 - p);
    const double bound = -std::log(std::abs(val));
    detail::require_positive_bound(bound, "right-half-plane");
    BodeFanoConstraint c{ConstraintKind::right_half_plane, s0, 1, bound,
                         [s0](double f) {
                           const cplx jw = kJ * (2.0 * kPi * f);
                           return (1.0 / (s0 - jw) + 1.0 / (s0 + jw)).real();
                         },
                         "right_half_plane s=" + std::to_string(s0.real()) + "+" +
                             std::to_string(s0.imag()) + "j"};
    out.push_back(std::move(c));
  }

  if (rs.infinity_deficiency > 0) {
    if (rs.infinity_deficiency > 1)
      throw UnsupportedRootError(
          "derive_constraints: repeated root at infinity unsupported");
    cplx sum{0.0, 0.0};
    for (const cplx& p : load.poles) sum += p;
    for (const cplx& z : load.zeros) sum += z;
    const double bound = -0.5 * sum.real();
    detail::require_positive_bound(bound, "infinity");
    out.push_back({ConstraintKind::infinity, {0.0, 0.0}, 1, bound,
                   [](double) { return 1.0; }, "infinity"});
  }

  return out;
}

// lhs = integral of xi(f) ln(1/(1 - T(f))) over the sampled support of T.
inline double constraint_lhs(const BodeFanoConstraint& c, const TransmissionProfile& profile) {
  profile.validate();
  size_t saturated = 0;
  for (double t : profile.values)
    if (t >= 1.0 - 1e-12) ++saturated;
  if (saturated > profile.values.size() / 100 + 1)
    throw std::domain_error("constraint_lhs: T = 1 on a set of positive measure (divergent)");
  const auto& fs = profile.frequencies;
  auto integrand = [&](double f) {
    const double t = std::min(profile.at(f), 1.0 - 1e-12);
    return c.weight(f) * std::log(1.0 / (1.0 - t));
  };
  return integrate_cells(std::span<const double>(fs.data(), fs.size()), integrand);
}

struct FeasibilityReport {
  std::vector<double> lhs;
  std::vector<double> slack;     // B_BF - lhs, same order as the constraints
  bool feasible = true;
  double eps_slack_rel = 1e-6;   // feasible iff slack >= -eps * B_BF
};

inline FeasibilityReport feasibility_check(const std::vector<BodeFanoConstraint>& constraints,
                                           const TransmissionProfile& profile,
                                           double eps_slack_rel = 1e-6) {
  FeasibilityReport rep;
  rep.eps_slack_rel = eps_slack_rel;
  for (const auto& c : constraints) {
    double l;
    try {
      l = constraint_lhs(c, profile);
    } catch (const std::domain_error&) {
      l = std::numeric_limits<double>::infinity();  // divergent lhs: infeasible
    }
    rep.lhs.push_back(l);
    rep.slack.push_back(c.bound - l);
    if (!(c.bound - l >= -eps_slack_rel * c.bound)) rep.feasible = false;
  }
  return rep;
}

}  // namespace bfmatch
