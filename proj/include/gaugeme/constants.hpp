#pragma once

namespace gaugeme::constants {

// 2018 CODATA / exact SI values.
inline constexpr double elementary_charge = 1.602176634e-19;  // C (exact)
inline constexpr double speed_of_light = 299792458.0;         // m/s (exact)
inline constexpr double hbar = 1.054571817e-34;               // J s
inline constexpr double epsilon0 = 8.8541878128e-12;          // F/m
inline constexpr double pi = 3.14159265358979323846;

} // namespace gaugeme::constants
