// Passive rational fitting of sampled scattering data
// (Sanathanan-Koerner iteration + stability/passivity enforcement).
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <stdexcept>
#include <vector>

#include "bfmatch/constants.hpp"
#include "bfmatch/polynomial.hpp"
#include "bfmatch/rational.hpp"

namespace bfmatch {

struct FitOptions {
  double eps_fit = 1e-3;        // max relative error target
  int sk_iterations = 30;       // weighted least-squares refinement passes
  double cancel_tol = 1e-3;     // pole/zero cancellation radius, relative to |pole|
  double passivity_margin = 1e-12;
};

struct FitResult {
  RationalFunction fn;
  double max_rel_error = 0.0;   // max |fit - sample| / max |sample|
  int order = 0;
  bool target_met = false;
};

class OrderTooLowError : public std::runtime_error {
 public:
  explicit OrderTooLowError(FitResult best)
      : std::runtime_error("fit_rational: order too low for requested tolerance"),
        best_effort(std::move(best)) {}
  FitResult best_effort;
};

namespace detail {

inline double fit_error(const RationalFunction& fn, const SampledResponse& data) {
  double max_mag = 0.0;
  for (const cplx& v : data.values) max_mag = std::max(max_mag, std::abs(v));
  if (max_mag == 0.0) max_mag = 1.0;
  double err = 0.0;
  for (size_t i = 0; i < data.frequencies.size(); ++i) {
    const cplx fit = evaluate_at_frequency(fn, data.frequencies[i]);
    err = std::max(err, std::abs(fit - data.values[i]) / max_mag);
  }
  return err;
}

// Convert SK coefficient vectors (ascending, in the scaled variable u = s/w0)
// into pole/zero/gain form in physical s.
inline RationalFunction pz_from_coefficients(std::vector<double> num, std::vector<double> den,
                                             double w0) {
  auto trim = [](std::vector<double>& c) {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::abs(v));
    while (c.size() > 1 && std::abs(c.back()) < 1e-10 * m) c.pop_back();
  };
  trim(num);
  trim(den);
  const Polynomial pn{std::vector<double>(num)};
  const Polynomial pd{std::vector<double>(den)};
  RationalFunction fn;
  for (const cplx& r : pn.roots()) fn.zeros.push_back(r * w0);
  for (const cplx& r : pd.roots()) fn.poles.push_back(r * w0);
  const int m = pn.degree();
  const int n = pd.degree();
  fn.gain = (num[m] / den[n]) * std::pow(w0, static_cast<double>(n - m));
  return fn;
}

inline void enforce_stability(RationalFunction& fn) {
  for (cplx& p : fn.poles)
    if (p.real() >= 0.0) p = cplx{-std::abs(p.real()), p.imag()};
  // A pole exactly on the axis would break strict stability; nudge it left.
  for (cplx& p : fn.poles)
    if (p.real() == 0.0) p = cplx{-1e-9 * (1.0 + std::abs(p)), p.imag()};
}

inline void enforce_passivity(RationalFunction& fn, double f_lo, double f_hi, double margin) {
  const double m = passivity_max(fn, f_lo, f_hi);
  const double cap = 1.0 - margin;
  if (m > cap) fn.gain *= cap / m;
}

// Cancel pole/zero pairs closer than tol * |pole| (overfitting guard).
inline void cancel_close_pairs(RationalFunction& fn, double tol) {
  std::vector<bool> zdrop(fn.zeros.size(), false), pdrop(fn.poles.size(), false);
  for (size_t i = 0; i < fn.poles.size(); ++i) {
    if (pdrop[i]) continue;
    for (size_t j = 0; j < fn.zeros.size(); ++j) {
      if (zdrop[j]) continue;
      if (std::abs(fn.poles[i] - fn.zeros[j]) < tol * std::abs(fn.poles[i])) {
        pdrop[i] = zdrop[j] = true;
        break;
      }
    }
  }
  RationalFunction out;
  out.gain = fn.gain;
  for (size_t j = 0; j < fn.zeros.size(); ++j)
    if (!zdrop[j]) out.zeros.push_back(fn.zeros[j]);
  for (size_t i = 0; i < fn.poles.size(); ++i)
    if (!pdrop[i]) out.poles.push_back(fn.poles[i]);
  fn = std::move(out);
}

}  // namespace detail

// Fit a proper rational function of denominator degree <= order to sampled
// one-port data. Throws OrderTooLowError (with best effort attached) when the
// tolerance is unreachable at the given order.
inline FitResult fit_rational(const SampledResponse& data, int order, FitOptions opt = {}) {
  data.validate();
  const int m = static_cast<int>(data.frequencies.size());
  if (order < 1) throw std::invalid_argument("fit_rational: order must be >= 1");
  if (m < 2 * order + 2) throw std::invalid_argument("fit_rational: not enough samples");

  const double w0 = 2.0 * kPi * std::sqrt(data.frequencies.front() * data.frequencies.back());
  std::vector<cplx> u(m);
  for (int i = 0; i < m; ++i) u[i] = cplx{0.0, 2.0 * kPi * data.frequencies[i] / w0};

  const int n_num = order + 1;        // a_0..a_order
  const int n_den = order;            // b_1..b_order (b_0 = 1)
  const int n_unknown = n_num + n_den;

  std::vector<double> weights(m, 1.0);
  std::vector<double> best_num, best_den;
  double best_err = std::numeric_limits<double>::infinity();

  double max_mag = 0.0;
  for (const cplx& v : data.values) max_mag = std::max(max_mag, std::abs(v));
  if (max_mag == 0.0) max_mag = 1.0;

  for (int pass = 0; pass < opt.sk_iterations; ++pass) {
    Eigen::MatrixXd A(2 * m, n_unknown);
    Eigen::VectorXd b(2 * m);
    for (int i = 0; i < m; ++i) {
      const double w = weights[i];
      cplx up = 1.0;
      for (int k = 0; k < n_num; ++k) {
        A(2 * i, k) = w * up.real();
        A(2 * i + 1, k) = w * up.imag();
        up *= u[i];
      }
      up = u[i];
      for (int k = 0; k < n_den; ++k) {
        const cplx coef = -data.values[i] * up;
        A(2 * i, n_num + k) = w * coef.real();
        A(2 * i + 1, n_num + k) = w * coef.imag();
        up *= u[i];
      }
      b(2 * i) = w * data.values[i].real();
      b(2 * i + 1) = w * data.values[i].imag();
    }
    Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);

    std::vector<double> num(x.data(), x.data() + n_num);
    std::vector<double> den(n_den + 1);
    den[0] = 1.0;
    for (int k = 0; k < n_den; ++k) den[k + 1] = x(n_num + k);

    // Evaluate the raw quotient and refresh SK weights.
    double err = 0.0;
    for (int i = 0; i < m; ++i) {
      cplx nv{0.0, 0.0}, dv{0.0, 0.0};
      cplx up = 1.0;
      for (int k = 0; k < n_num; ++k) {
        nv += num[k] * up;
        up *= u[i];
      }
      up = 1.0;
      for (int k = 0; k <= n_den; ++k) {
        dv += den[k] * up;
        up *= u[i];
      }
      weights[i] = 1.0 / std::max(std::abs(dv), 1e-12);
      err = std::max(err, std::abs(nv / dv - data.values[i]) / max_mag);
    }
    if (err < best_err) {
      best_err = err;
      best_num = num;
      best_den = den;
    }
  }

  FitResult res;
  res.fn = detail::pz_from_coefficients(best_num, best_den, w0);
  detail::enforce_stability(res.fn);
  detail::enforce_passivity(res.fn, std::min(1e6, data.frequencies.front() / 10.0),
                            4.0 * data.frequencies.back(), opt.passivity_margin);
  detail::cancel_close_pairs(res.fn, opt.cancel_tol);
  res.max_rel_error = detail::fit_error(res.fn, data);
  res.order = order;
  res.target_met = res.max_rel_error <= opt.eps_fit;
  if (!res.target_met) throw OrderTooLowError(std::move(res));
  return res;
}

}  // namespace bfmatch
