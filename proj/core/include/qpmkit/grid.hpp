#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qpm {

/// n evenly spaced points from a to b inclusive. Requires n >= 2.
std::vector<double> linspace(double a, double b, std::size_t n);

/// Evenly spaced grid on [-half_range, half_range] that is symmetric by
/// construction: axis[i] == -axis[n-1-i] exactly. Requires n >= 2.
std::vector<double> symmetric_linspace(double half_range, std::size_t n);

/// Trapezoidal quadrature weights for an arbitrary strictly increasing axis.
std::vector<double> trapezoid_weights(std::span<const double> axis);

/// Trapezoidal integral of samples y over axis x.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace qpm
