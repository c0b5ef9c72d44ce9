// Rational scattering functions: pole/zero form, reflection-equation roots,
// and Taylor expansion of ln(1/S).
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfmatch/constants.hpp"
#include "bfmatch/polynomial.hpp"

namespace bfmatch {

struct SampledResponse {
  std::vector<double> frequencies;  // Hz, strictly increasing, > 0
  std::vector<cplx> values;

  void validate() const {
    if (frequencies.size() != values.size())
      throw std::invalid_argument("SampledResponse: length mismatch");
    for (size_t i = 0; i < frequencies.size(); ++i) {
      if (!(frequencies[i] > 0.0))
        throw std::invalid_argument("SampledResponse: frequencies must be positive");
      if (i > 0 && !(frequencies[i] > frequencies[i - 1]))
        throw std::invalid_argument("SampledResponse: frequencies must be increasing");
    }
  }
};

// S(s) = gain * prod(s - z) / prod(s - p), real-coefficient by construction:
// the zero and pole multisets must be closed under conjugation.
struct RationalFunction {
  std::vector<cplx> zeros;
  std::vector<cplx> poles;
  double gain = 1.0;

  Polynomial numerator() const { return Polynomial::from_roots(zeros, gain); }
  Polynomial denominator() const { return Polynomial::from_roots(poles, 1.0); }
};

inline cplx evaluate(const RationalFunction& fn, cplx s) {
  cplx num{fn.gain, 0.0};
  for (const cplx& z : fn.zeros) num *= (s - z);
  cplx den{1.0, 0.0};
  for (const cplx& p : fn.poles) den *= (s - p);
  if (den == cplx{0.0, 0.0}) throw std::domain_error("evaluate: s is a pole");
  return num / den;
}

inline cplx evaluate_at_frequency(const RationalFunction& fn, double f_hz) {
  return evaluate(fn, cplx{0.0, 2.0 * kPi * f_hz});
}

// g(s) = fn(-s).
inline RationalFunction flip(const RationalFunction& fn) {
  RationalFunction out;
  out.zeros.reserve(fn.zeros.size());
  out.poles.reserve(fn.poles.size());
  for (const cplx& z : fn.zeros) out.zeros.push_back(-z);
  for (const cplx& p : fn.poles) out.poles.push_back(-p);
  const int parity = static_cast<int>(fn.zeros.size() + fn.poles.size()) % 2;
  out.gain = parity ? -fn.gain : fn.gain;
  return out;
}

inline std::pair<std::vector<cplx>, std::vector<cplx>> poles_zeros(const RationalFunction& fn) {
  return {fn.zeros, fn.poles};
}

inline bool is_stable(const RationalFunction& fn) {
  return std::all_of(fn.poles.begin(), fn.poles.end(),
                     [](const cplx& p) { return p.real() < 0.0; });
}

// Max |S(j2*pi*f)| over a uniform sweep; passivity holds when <= 1 + tol.
inline double passivity_max(const RationalFunction& fn, double f_min, double f_max,
                            int points = 10001) {
  double m = 0.0;
  for (int i = 0; i < points; ++i) {
    const double f = f_min + (f_max - f_min) * static_cast<double>(i) / (points - 1);
    m = std::max(m, std::abs(evaluate_at_frequency(fn, f)));
  }
  return m;
}

// Taylor coefficients c_0..c_{count-1} of ln(1/fn(s)) about `center`.
// ln(1/fn) = -ln(gain) - sum_m ln(s - z_m) + sum_l ln(s - p_l), and the k-th
// derivative of ln(s - r) is (-1)^(k-1) (k-1)! / (s - r)^k.
inline std::vector<cplx> log_taylor_coefficients(const RationalFunction& fn, cplx center,
                                                 int count) {
  const cplx value = evaluate(fn, center);
  if (value == cplx{0.0, 0.0})
    throw std::domain_error("log_taylor_coefficients: fn(center) = 0");
  std::vector<cplx> c(static_cast<size_t>(std::max(count, 0)));
  if (count <= 0) return c;
  c[0] = std::log(1.0 / value);
  for (int k = 1; k < count; ++k) {
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;  // (-1)^(k-1)
    cplx acc{0.0, 0.0};
    for (const cplx& p : fn.poles) acc += 1.0 / std::pow(center - p, k);
    for (const cplx& z : fn.zeros) acc -= 1.0 / std::pow(center - z, k);
    c[k] = acc * (sign / static_cast<double>(k));
  }
  return c;
}

struct RootMultiplicity {
  cplx root;
  int multiplicity;
};

// Full structure of the reflection equation fn(-s) * fn(s) = 1.
struct ReflectionStructure {
  std::vector<RootMultiplicity> s_roots;      // finite roots, closed under s -> -s, conj
  std::vector<RootMultiplicity> w_roots;      // roots in w = s^2 (one per +/- pair)
  int infinity_deficiency = 0;                // missing w-degree (root-at-infinity count)
  double scale = 1.0;                         // argument scale used internally
};

// Solve fn(-s) fn(s) - 1 = 0. The numerator polynomial
//   P(s) = gain^2 N(s) N(-s) - D(s) D(-s)
// is even for any real-coefficient fn, so roots are found in w = s^2 at half
// degree; the +/- pairing is then exact by construction. Coefficients are
// argument-scaled by the largest pole/zero magnitude before root finding.
inline ReflectionStructure analyze_reflection(const RationalFunction& fn,
                                              double cluster_tol = 1e-6) {
  double alpha = 0.0;
  for (const cplx& p : fn.poles) alpha = std::max(alpha, std::abs(p));
  for (const cplx& z : fn.zeros) alpha = std::max(alpha, std::abs(z));
  if (alpha == 0.0) alpha = 1.0;

  RationalFunction scaled;
  scaled.gain = fn.gain;
  for (const cplx& z : fn.zeros) scaled.zeros.push_back(z / alpha);
  for (const cplx& p : fn.poles) scaled.poles.push_back(p / alpha);
  // Rescale gain so that scaled(u) = fn(alpha u): contributes alpha^(nz - np).
  const int dn = static_cast<int>(fn.zeros.size()) - static_cast<int>(fn.poles.size());
  scaled.gain *= std::pow(alpha, dn);

  // numerator() carries the gain, so n * n(-s) = gain^2 N(s) N(-s).
  const Polynomial n = scaled.numerator();
  const Polynomial d = scaled.denominator();
  Polynomial p_even = n * n.flip_argument() - d * d.flip_argument();
  p_even = p_even.pruned(1e-12);
  if (p_even.is_zero())
    throw std::domain_error("analyze_reflection: identically reflective load");

  // Exactness check: odd coefficients vanish analytically.
  const auto& pc = p_even.coefficients();
  const double pmax = p_even.max_abs_coeff();
  for (size_t i = 1; i < pc.size(); i += 2)
    if (std::abs(pc[i]) > 1e-8 * pmax)
      throw std::runtime_error("analyze_reflection: reflection polynomial not even");
  std::vector<double> q((pc.size() + 1) / 2, 0.0);
  for (size_t i = 0; i < pc.size(); i += 2) q[i / 2] = pc[i];
  const Polynomial qw(std::move(q));

  ReflectionStructure out;
  out.scale = alpha;
  const int expected_degree = static_cast<int>(std::max(fn.zeros.size(), fn.poles.size()));
  out.infinity_deficiency = expected_degree - qw.degree();

  // Cluster w-roots; tolerance is absolute in the unit-scaled w domain.
  std::vector<cplx> raw = qw.roots();
  std::vector<RootMultiplicity> clusters;
  for (const cplx& r : raw) {
    bool merged = false;
    for (auto& cl : clusters) {
      if (std::abs(r - cl.root) <= cluster_tol * (1.0 + std::abs(cl.root))) {
        // Running mean keeps the cluster centroid stable.
        cl.root = (cl.root * static_cast<double>(cl.multiplicity) + r) /
                  static_cast<double>(cl.multiplicity + 1);
        ++cl.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) clusters.push_back({r, 1});
  }
  for (auto& cl : clusters) {
    if (std::abs(cl.root) <= cluster_tol) cl.root = {0.0, 0.0};
    // Snap near-real w to the real axis (conjugate symmetry of P).
    if (std::abs(cl.root.imag()) <= cluster_tol * (1.0 + std::abs(cl.root)))
      cl.root = {cl.root.real(), 0.0};
  }

  for (const auto& cl : clusters) {
    const cplx w = cl.root * (alpha * alpha);
    out.w_roots.push_back({w, cl.multiplicity});
    if (w == cplx{0.0, 0.0}) {
      out.s_roots.push_back({{0.0, 0.0}, 2 * cl.multiplicity});
    } else {
      const cplx s = std::sqrt(w);  // principal branch, Re >= 0
      out.s_roots.push_back({s, cl.multiplicity});
      out.s_roots.push_back({-s, cl.multiplicity});
    }
  }
  return out;
}

inline std::vector<RootMultiplicity> reflection_equation_roots(const RationalFunction& fn) {
  return analyze_reflection(fn).s_roots;
}

}  // namespace bfmatch
