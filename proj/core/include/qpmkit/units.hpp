#pragma once

#include <numbers>

namespace qpm {

inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Angular frequency [rad/s] of light with the given vacuum wavelength [m].
inline double omega_from_vacuum_wavelength(double lambda) {
  return two_pi * speed_of_light / lambda;
}

/// Vacuum wavelength [m] for the given angular frequency [rad/s].
inline double vacuum_wavelength_from_omega(double omega) {
  return two_pi * speed_of_light / omega;
}

}  // namespace qpm
