// Sampled transmission-coefficient profiles T(f) and interpolation helpers.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace bfmatch {

enum class Strategy { optimal, frequency_flat, conjugate_match, ladder, ideal, no_match };

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::optimal: return "optimal";
    case Strategy::frequency_flat: return "frequency_flat";
    case Strategy::conjugate_match: return "conjugate_match";
    case Strategy::ladder: return "ladder";
    case Strategy::ideal: return "ideal";
    case Strategy::no_match: return "no_match";
  }
  return "?";
}

// Piecewise-linear interpolation on a strictly increasing grid; zero outside.
inline double interp_at(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (xs.empty() || x < xs.front() || x > xs.back()) return 0.0;
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return ys.front();
  if (it == xs.end()) return ys.back();
  const size_t i = static_cast<size_t>(it - xs.begin());
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] * (1.0 - t) + ys[i] * t;
}

struct TransmissionProfile {
  std::vector<double> frequencies;  // Hz, strictly increasing (the support)
  std::vector<double> values;       // T(f) in [0, 1]
  Strategy provenance = Strategy::optimal;

  double at(double f) const { return interp_at(frequencies, values, f); }

  void validate() const {
    if (frequencies.size() != values.size())
      throw std::invalid_argument("TransmissionProfile: length mismatch");
    if (frequencies.size() < 2)
      throw std::invalid_argument("TransmissionProfile: need at least 2 samples");
    for (size_t i = 0; i < frequencies.size(); ++i) {
      if (i > 0 && !(frequencies[i] > frequencies[i - 1]))
        throw std::invalid_argument("TransmissionProfile: frequencies must be increasing");
      if (!(values[i] >= 0.0 && values[i] <= 1.0))
        throw std::invalid_argument("TransmissionProfile: T out of [0, 1]");
    }
  }
};

}  // namespace bfmatch
