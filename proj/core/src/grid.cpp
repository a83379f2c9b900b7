#include "qpmkit/grid.hpp"

#include <stdexcept>

namespace qpm {

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n < 2) throw std::invalid_argument("linspace: need at least 2 points");
  if (!(b > a)) throw std::invalid_argument("linspace: need b > a");
  std::vector<double> x(n);
  const double step = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = a + step * static_cast<double>(i);
  x.back() = b;
  return x;
}

std::vector<double> symmetric_linspace(double half_range, std::size_t n) {
  if (n < 2) throw std::invalid_argument("symmetric_linspace: need at least 2 points");
  if (!(half_range > 0)) throw std::invalid_argument("symmetric_linspace: need half_range > 0");
  std::vector<double> x(n);
  const double step = 2.0 * half_range / static_cast<double>(n - 1);
  // Mirror so x[i] == -x[n-1-i] holds exactly in floating point.
  for (std::size_t i = 0; i < n / 2; ++i) {
    const double v = half_range - step * static_cast<double>(i);
    x[n - 1 - i] = v;
    x[i] = -v;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  return x;
}

std::vector<double> trapezoid_weights(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("trapezoid_weights: need at least 2 points");
  std::vector<double> w(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = x[i + 1] - x[i];
    if (!(h > 0)) throw std::invalid_argument("trapezoid_weights: grid must be increasing");
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("trapezoid: size mismatch");
  const auto w = trapezoid_weights(x);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * y[i];
  return sum;
}

}  // namespace qpm
