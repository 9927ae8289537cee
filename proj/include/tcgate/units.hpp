#pragma once

#include <numbers>

// Internal unit system: angular frequency in rad/us, time in us, flux in Phi0.
namespace tcg::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// The only place where cyclic frequencies become angular ones.
constexpr double from_mhz(double f_mhz) { return two_pi * f_mhz; }
constexpr double from_ghz(double f_ghz) { return from_mhz(1e3 * f_ghz); }
constexpr double from_khz(double f_khz) { return from_mhz(1e-3 * f_khz); }

constexpr double to_mhz(double omega) { return omega / two_pi; }
constexpr double to_khz(double omega) { return 1e3 * omega / two_pi; }

}  // namespace tcg::units
