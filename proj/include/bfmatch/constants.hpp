// Physical and numerical constants shared across the library.
#pragma once

#include <complex>
#include <numbers>

namespace bfmatch {

using cplx = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kLn2 = std::numbers::ln2;
inline constexpr cplx kJ{0.0, 1.0};

// Default passivity tolerance on the imaginary axis.
inline constexpr double kPassivityTol = 1e-9;

}  // namespace bfmatch
