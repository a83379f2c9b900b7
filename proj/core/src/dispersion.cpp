#include "qpmkit/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qpmkit/units.hpp"

namespace qpm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void LinearizedGvm::validate() const {
  require(std::isfinite(kp_prime) && std::isfinite(ki_prime) && std::isfinite(ks_prime),
          "dispersion: inverse group velocities must be finite");
  require(kp_prime > 0 && ki_prime > 0 && ks_prime > 0,
          "dispersion: inverse group velocities must be positive");
  require(mu_p > 0 && mu_i > 0 && mu_s > 0,
          "dispersion: center frequencies must be positive");
  require(std::abs(mu_i + mu_s - mu_p) <= 1e-9 * mu_p,
          "dispersion: center frequencies must satisfy mu_i + mu_s = mu_p");
  require(std::isfinite(delta_k0), "dispersion: delta_k0 must be finite");
}

WavevectorTable::WavevectorTable(std::vector<double> omega, std::vector<double> k)
    : omega_(std::move(omega)), k_(std::move(k)) {
  require(omega_.size() == k_.size(), "wavevector table: column length mismatch");
  require(omega_.size() >= 4, "wavevector table: needs at least 4 samples");
  for (std::size_t i = 0; i < omega_.size(); ++i) {
    require(std::isfinite(omega_[i]) && std::isfinite(k_[i]),
            "wavevector table: samples must be finite");
    if (i > 0)
      require(omega_[i] > omega_[i - 1], "wavevector table: omega must be strictly increasing");
  }

  // Natural cubic spline: tridiagonal solve for the second derivatives.
  const std::size_t n = omega_.size();
  m_.assign(n, 0.0);
  std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
  diag[0] = diag[n - 1] = 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = omega_[i] - omega_[i - 1];
    const double h1 = omega_[i + 1] - omega_[i];
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((k_[i + 1] - k_[i]) / h1 - (k_[i] - k_[i - 1]) / h0);
  }
  // Forward elimination (lower entry of row i is h0, zero in the natural rows).
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = omega_[i] - omega_[i - 1];
    const double lower = (i == 1) ? 0.0 : h0;
    const double factor = lower / diag[i - 1];
    diag[i] -= factor * upper[i - 1];
    rhs[i] -= factor * rhs[i - 1];
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
  }
}

WavevectorTable WavevectorTable::from_stream(std::istream& in, const std::string& name) {
  std::vector<double> omega, k;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double w, kk;
    if (!(row >> w)) continue;  // blank or comment-only line
    if (!(row >> kk)) {
      throw std::invalid_argument("wavevector table " + name + ": line " +
                                  std::to_string(line_no) + " needs two columns");
    }
    double extra;
    if (row >> extra) {
      throw std::invalid_argument("wavevector table " + name + ": line " +
                                  std::to_string(line_no) + " has more than two columns");
    }
    omega.push_back(w);
    k.push_back(kk);
  }
  return WavevectorTable(std::move(omega), std::move(k));
}

WavevectorTable WavevectorTable::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("wavevector table: cannot open " + path);
  return from_stream(in, path);
}

double WavevectorTable::operator()(double omega) const {
  if (omega < omega_.front() || omega > omega_.back()) {
    throw std::domain_error("wavevector table: omega outside sampled domain");
  }
  auto it = std::upper_bound(omega_.begin(), omega_.end(), omega);
  std::size_t hi = std::min<std::size_t>(it - omega_.begin(), omega_.size() - 1);
  if (hi == 0) hi = 1;
  const std::size_t lo = hi - 1;
  const double h = omega_[hi] - omega_[lo];
  const double a = (omega_[hi] - omega) / h;
  const double b = (omega - omega_[lo]) / h;
  return a * k_[lo] + b * k_[hi] +
         ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * h * h / 6.0;
}

void TabulatedDispersion::validate() const {
  require(mu_p > 0 && mu_i > 0 && mu_s > 0,
          "dispersion: center frequencies must be positive");
  require(std::abs(mu_i + mu_s - mu_p) <= 1e-9 * mu_p,
          "dispersion: center frequencies must satisfy mu_i + mu_s = mu_p");
  auto inside = [](const WavevectorTable& t, double mu) {
    return mu > t.min_omega() && mu < t.max_omega();
  };
  require(inside(pump, mu_p) && inside(idler, mu_i) && inside(signal, mu_s),
          "dispersion: center frequencies must lie inside the sampled tables");
}

void QpmGrating::validate() const {
  require(period > 0, "grating: period must be positive");
  require(order >= 1, "grating: order must be >= 1");
}

double phase_mismatch(const DispersionModel& model, double omega_i, double omega_s,
                      double omega_p) {
  require(omega_i > 0 && omega_s > 0 && omega_p > 0,
          "phase_mismatch: frequencies must be positive");
  return std::visit(
      overloaded{
          [&](const LinearizedGvm& m) {
            m.validate();
            return m.delta_k0 + m.kp_prime * (omega_p - m.mu_p) -
                   m.ki_prime * (omega_i - m.mu_i) - m.ks_prime * (omega_s - m.mu_s);
          },
          [&](const TabulatedDispersion& t) {
            t.validate();
            return t.pump(omega_p) - t.idler(omega_i) - t.signal(omega_s);
          },
      },
      model);
}

double qpm_period(double delta_k, int order) {
  require(order >= 1, "qpm_period: order must be >= 1");
  if (delta_k == 0.0) {
    throw std::domain_error("qpm_period: delta_k = 0 needs no grating (degenerate)");
  }
  return order * two_pi / delta_k;
}

namespace {

// Central difference on the interpolant; the step stays well inside the table.
double table_derivative(const WavevectorTable& t, double mu) {
  const double span = t.max_omega() - t.min_omega();
  double h = span * 1e-4;
  h = std::min({h, (mu - t.min_omega()) * 0.5, (t.max_omega() - mu) * 0.5});
  if (h <= 0) throw std::domain_error("dispersion: center frequency too close to table edge");
  return (t(mu + h) - t(mu - h)) / (2.0 * h);
}

struct GroupSlopes {
  double kp, ki, ks;
};

GroupSlopes group_slopes(const DispersionModel& model) {
  return std::visit(
      overloaded{
          [](const LinearizedGvm& m) {
            m.validate();
            return GroupSlopes{m.kp_prime, m.ki_prime, m.ks_prime};
          },
          [](const TabulatedDispersion& t) {
            t.validate();
            return GroupSlopes{table_derivative(t.pump, t.mu_p),
                               table_derivative(t.idler, t.mu_i),
                               table_derivative(t.signal, t.mu_s)};
          },
      },
      model);
}

}  // namespace

double gvm_condition_residual(const DispersionModel& model) {
  const auto s = group_slopes(model);
  return s.kp - 0.5 * (s.ks + s.ki);
}

double group_velocity_difference(const DispersionModel& model) {
  const auto s = group_slopes(model);
  return s.ks - s.ki;
}

LinearizedGvm linearize(const TabulatedDispersion& tab) {
  tab.validate();
  LinearizedGvm lin;
  lin.kp_prime = table_derivative(tab.pump, tab.mu_p);
  lin.ki_prime = table_derivative(tab.idler, tab.mu_i);
  lin.ks_prime = table_derivative(tab.signal, tab.mu_s);
  lin.mu_p = tab.mu_p;
  lin.mu_i = tab.mu_i;
  lin.mu_s = tab.mu_s;
  lin.delta_k0 = tab.pump(tab.mu_p) - tab.idler(tab.mu_i) - tab.signal(tab.mu_s);
  return lin;
}

}  // namespace qpm
