// Numerical integration: adaptive Gauss-Kronrod 15(7) and grid-composite rules.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace bfmatch {

namespace detail {

// Gauss-Kronrod 15-point nodes/weights on [-1, 1]; the embedded 7-point
// Gauss rule uses the odd-indexed nodes.
inline constexpr std::array<double, 8> kGk15Nodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr std::array<double, 8> kGk15Weights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> kGauss7Weights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct GkResult {
  double integral;
  double error;
};

template <class F>
GkResult gk15(const F& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double ik = 0.0;
  double ig = 0.0;
  for (int i = 0; i < 7; ++i) {
    const double x = kGk15Nodes[i] * h;
    const double fsum = f(mid - x) + f(mid + x);
    ik += kGk15Weights[i] * fsum;
    if (i % 2 == 1) ig += kGauss7Weights[i / 2] * fsum;
  }
  const double fc = f(mid);
  ik += kGk15Weights[7] * fc;
  ig += kGauss7Weights[3] * fc;
  ik *= h;
  ig *= h;
  return {ik, std::abs(ik - ig)};
}

}  // namespace detail

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_segments = 4000;
};

// Adaptive Gauss-Kronrod integration of f over [a, b].
template <class F>
double integrate(const F& f, double a, double b, QuadratureOptions opt = {}) {
  if (!(b > a)) return 0.0;
  struct Seg {
    double a, b, integral, error;
  };
  std::vector<Seg> segs;
  auto first = detail::gk15(f, a, b);
  segs.push_back({a, b, first.integral, first.error});
  int splits = 0;
  while (splits < opt.max_segments) {
    double total = 0.0, err = 0.0;
    size_t worst = 0;
    double worst_err = -1.0;
    for (size_t i = 0; i < segs.size(); ++i) {
      total += segs[i].integral;
      err += segs[i].error;
      if (segs[i].error > worst_err) {
        worst_err = segs[i].error;
        worst = i;
      }
    }
    if (err <= opt.abs_tol + opt.rel_tol * std::abs(total)) return total;
    const Seg s = segs[worst];
    const double m = 0.5 * (s.a + s.b);
    if (!(m > s.a && m < s.b)) return total;  // interval at machine resolution
    auto left = detail::gk15(f, s.a, m);
    auto right = detail::gk15(f, m, s.b);
    segs[worst] = {s.a, m, left.integral, left.error};
    segs.push_back({m, s.b, right.integral, right.error});
    ++splits;
  }
  double total = 0.0;
  for (const auto& s : segs) total += s.integral;
  return total;
}

// Composite 4-point Gauss-Legendre over the cells of a fixed grid.
// Exact for smooth integrands sampled on dense grids; the grid cells are the
// natural panels for integrands built from interpolated profile samples.
template <class F>
double integrate_cells(std::span<const double> grid, const F& f) {
  static constexpr std::array<double, 2> xs = {0.3399810435848563, 0.8611363115940526};
  static constexpr std::array<double, 2> ws = {0.6521451548625461, 0.3478548451374538};
  if (grid.size() < 2) return 0.0;
  double total = 0.0;
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    const double h = 0.5 * (grid[i + 1] - grid[i]);
    const double m = 0.5 * (grid[i + 1] + grid[i]);
    double cell = 0.0;
    for (int k = 0; k < 2; ++k)
      cell += ws[k] * (f(m - xs[k] * h) + f(m + xs[k] * h));
    total += cell * h;
  }
  return total;
}

inline double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("trapezoid: size mismatch");
  double total = 0.0;
  for (size_t i = 0; i + 1 < x.size(); ++i)
    total += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
  return total;
}

}  // namespace bfmatch
