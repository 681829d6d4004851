#pragma once

// Physical constants (CODATA-2018) and unit helpers. All model code works in
// angular frequencies (rad/s); user-facing files carry ordinary Hz and are
// converted exactly once at parse time.

namespace sbcool::constants {

inline constexpr double hbar = 1.054571817e-34;             // J s
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

// Ordinary frequency <-> angular frequency
inline constexpr double angular(double hz) { return two_pi * hz; }
inline constexpr double ordinary(double rad_per_s) { return rad_per_s / two_pi; }

}  // namespace sbcool::constants
