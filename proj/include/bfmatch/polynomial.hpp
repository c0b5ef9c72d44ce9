// Real-coefficient polynomial algebra and companion-matrix root finding.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <complex>
#include <stdexcept>
#include <vector>

#include "bfmatch/constants.hpp"

namespace bfmatch {

// Coefficients are stored in ascending order: c[0] + c[1]*s + c[2]*s^2 + ...
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  explicit Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    strip_leading_zeros();
  }
  static Polynomial constant(double c) { return Polynomial({c}); }
  static Polynomial identity() { return Polynomial({0.0, 1.0}); }

  const std::vector<double>& coefficients() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }
  double max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  cplx operator()(cplx s) const {
    cplx acc{0.0, 0.0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
    return acc;
  }
  double operator()(double s) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
    return acc;
  }

  Polynomial derivative() const {
    if (degree() == 0) return constant(0.0);
    std::vector<double> d(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
  }

  // p(-s): negate odd-order coefficients.
  Polynomial flip_argument() const {
    std::vector<double> c = coeffs_;
    for (size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
    return Polynomial(std::move(c));
  }

  // p(alpha * s): scale coefficient i by alpha^i.
  Polynomial scale_argument(double alpha) const {
    std::vector<double> c = coeffs_;
    double p = 1.0;
    for (size_t i = 0; i < c.size(); ++i) {
      c[i] *= p;
      p *= alpha;
    }
    return Polynomial(std::move(c));
  }

  Polynomial operator*(const Polynomial& rhs) const {
    std::vector<double> c(coeffs_.size() + rhs.coeffs_.size() - 1, 0.0);
    for (size_t i = 0; i < coeffs_.size(); ++i)
      for (size_t j = 0; j < rhs.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * rhs.coeffs_[j];
    return Polynomial(std::move(c));
  }
  Polynomial operator+(const Polynomial& rhs) const {
    std::vector<double> c(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
    for (size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
    for (size_t i = 0; i < rhs.coeffs_.size(); ++i) c[i] += rhs.coeffs_[i];
    return Polynomial(std::move(c));
  }
  Polynomial operator-(const Polynomial& rhs) const {
    std::vector<double> c(std::max(coeffs_.size(), rhs.coeffs_.size()), 0.0);
    for (size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
    for (size_t i = 0; i < rhs.coeffs_.size(); ++i) c[i] -= rhs.coeffs_[i];
    return Polynomial(std::move(c));
  }
  Polynomial operator*(double k) const {
    std::vector<double> c = coeffs_;
    for (double& v : c) v *= k;
    return Polynomial(std::move(c));
  }

  // Drop coefficients below rel_tol * max|c| (both leading and interior noise).
  Polynomial pruned(double rel_tol) const {
    const double thr = rel_tol * max_abs_coeff();
    std::vector<double> c = coeffs_;
    for (double& v : c)
      if (std::abs(v) < thr) v = 0.0;
    return Polynomial(std::move(c));
  }

  // Build a real polynomial from a conjugate-closed complex root multiset.
  // Roots with |Im| <= pair_tol * (1 + |root|) are treated as real.
  static Polynomial from_roots(const std::vector<cplx>& roots, double leading = 1.0,
                               double pair_tol = 1e-9) {
    Polynomial p = constant(leading);
    std::vector<cplx> pending;
    for (const cplx& r : roots) {
      if (std::abs(r.imag()) <= pair_tol * (1.0 + std::abs(r))) {
        p = p * Polynomial({-r.real(), 1.0});
      } else {
        pending.push_back(r);
      }
    }
    // Pair complex roots with their conjugates into real quadratics.
    std::vector<bool> used(pending.size(), false);
    for (size_t i = 0; i < pending.size(); ++i) {
      if (used[i]) continue;
      const cplx r = pending[i];
      size_t best = pending.size();
      double best_d = std::numeric_limits<double>::infinity();
      for (size_t j = i + 1; j < pending.size(); ++j) {
        if (used[j]) continue;
        double d = std::abs(pending[j] - std::conj(r));
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (best == pending.size() || best_d > 1e-6 * (1.0 + std::abs(r)))
        throw std::invalid_argument("from_roots: root multiset is not conjugate-closed");
      used[i] = used[best] = true;
      p = p * Polynomial({std::norm(r), -2.0 * r.real(), 1.0});
    }
    return p;
  }

  // All complex roots via scaled companion-matrix eigenvalues.
  // Exact zero leading (low-order) coefficients are deflated as roots at 0.
  std::vector<cplx> roots() const {
    std::vector<double> c = coeffs_;
    std::vector<cplx> out;
    while (c.size() > 1 && c.front() == 0.0) {
      out.emplace_back(0.0, 0.0);
      c.erase(c.begin());
    }
    int n = static_cast<int>(c.size()) - 1;
    if (n <= 0) return out;
    // Geometric-mean magnitude scaling keeps the companion matrix well conditioned
    // for the SI-unit coefficient spreads seen here (|c| ratios ~ 1e80).
    double alpha = 1.0;
    if (c.front() != 0.0 && c.back() != 0.0)
      alpha = std::pow(std::abs(c.front() / c.back()), 1.0 / static_cast<double>(n));
    alpha = std::clamp(alpha, 1e-150, 1e150);
    std::vector<double> q(c.size());
    double p = 1.0;
    for (size_t i = 0; i < c.size(); ++i) {
      q[i] = c[i] * p;
      p *= alpha;
    }
    const double lead = q.back();
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -q[i] / lead;
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw std::runtime_error("roots: eigensolver failed");
    for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i) * alpha);
    return out;
  }

 private:
  void strip_leading_zeros() {
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
  }
  std::vector<double> coeffs_;
};

}  // namespace bfmatch
