#include "qpmkit/interference.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>

#include "qpmkit/format.hpp"
#include "qpmkit/grid.hpp"

namespace qpm {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void InterferencePattern::validate() const {
  require(delays.size() == p_coincidence.size(), "pattern: delay/probability size mismatch");
  require(delays.size() >= 16, "pattern: needs at least 16 delays");
  for (std::size_t i = 1; i < delays.size(); ++i) {
    require(delays[i] > delays[i - 1], "pattern: delays must be strictly increasing");
  }
  require(visibility >= 0.0 && visibility <= 1.0, "pattern: visibility must be in [0, 1]");
  const double lo = 0.5 * (1.0 - visibility) - 1e-9;
  const double hi = 0.5 * (1.0 + visibility) + 1e-9;
  for (double p : p_coincidence) {
    require(p >= lo && p <= hi, "pattern: probability outside the visibility bounds");
  }
  require(std::abs(p_coincidence.front() - 0.5) <= 1e-3 &&
              std::abs(p_coincidence.back() - 0.5) <= 1e-3,
          "pattern: delay window too short, edges have not relaxed to 1/2");
}

double InterferencePattern::max_p() const {
  return *std::max_element(p_coincidence.begin(), p_coincidence.end());
}

double InterferencePattern::min_p() const {
  return *std::min_element(p_coincidence.begin(), p_coincidence.end());
}

SpectralCurve cw_omega_curve(const PmfModel& pmf, double gv_delta, double delta_k0,
                             double detuning, std::span<const double> omega_grid) {
  require(gv_delta != 0.0 && std::isfinite(gv_delta),
          "cw curve: group-velocity difference must be nonzero");
  SpectralCurve curve;
  curve.axis.assign(omega_grid.begin(), omega_grid.end());
  curve.values.resize(omega_grid.size());
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    curve.values[i] = pmf.value(gv_delta * (omega_grid[i] + 0.5 * detuning) + delta_k0);
  }
  curve.axis_kind = AxisKind::Detuning;
  curve.validate();
  return curve;
}

std::vector<double> auto_omega_grid(const PmfModel& pmf, double gv_delta, double detuning,
                                    std::size_t points_per_lobe) {
  require(gv_delta != 0.0 && std::isfinite(gv_delta),
          "auto grid: group-velocity difference must be nonzero");
  require(points_per_lobe >= 2, "auto grid: need at least 2 points per lobe");
  const double lobe = pmf.lobe_half_width() / std::abs(gv_delta);  // half width in rad/s
  const double peak = std::norm(pmf.value(0.0));
  if (!(peak > 0)) throw std::domain_error("auto grid: PMF vanishes at dk = 0");

  // Assumes the curve peaks where the shifted argument vanishes (delta_k0 = 0);
  // callers with a residual mismatch supply their own grid.
  auto intensity = [&](double w) {
    return std::norm(pmf.value(gv_delta * (w + 0.5 * detuning)));
  };
  double half = 0.5 * std::abs(detuning) + 8.0 * lobe;
  const double step = 2.0 * lobe / static_cast<double>(points_per_lobe);
  for (int attempt = 0;; ++attempt) {
    if (attempt > 48) {
      throw std::domain_error("auto grid: curve intensity does not decay (flat PMF?)");
    }
    // Envelope estimate near the edges: the max over the outer tenth dodges
    // accidental zeros of oscillatory tails.
    double edge = 0.0;
    const int probes = std::max<int>(8, static_cast<int>(0.1 * half / step));
    for (int i = 0; i < probes; ++i) {
      edge = std::max(edge, intensity(half - i * step));
      edge = std::max(edge, intensity(-half + i * step));
    }
    if (edge <= 1e-6 * peak) break;
    half *= 1.5;
  }
  std::size_t n = static_cast<std::size_t>(std::ceil(2.0 * half / step)) + 1;
  if (n % 2 == 0) ++n;
  n = std::max<std::size_t>(n, 33);
  return symmetric_linspace(half, n);
}

std::vector<double> default_delays(double gv_delta, double crystal_length, std::size_t n,
                                   double span_factor) {
  require(gv_delta != 0.0, "delays: group-velocity difference must be nonzero");
  require(crystal_length > 0, "delays: crystal length must be positive");
  require(n >= 16, "delays: need at least 16 points");
  require(span_factor > 0, "delays: span factor must be positive");
  return symmetric_linspace(span_factor * 0.5 * std::abs(gv_delta) * crystal_length, n);
}

InterferencePattern hom_pattern_cw(const SpectralCurve& curve, double visibility,
                                   double detuning, std::span<const double> delays) {
  curve.validate();
  require(visibility >= 0.0 && visibility <= 1.0, "hom: visibility must be in [0, 1]");
  require(delays.size() >= 16, "hom: need at least 16 delays");
  const std::size_t n = curve.axis.size();
  const double span = curve.axis.back() - curve.axis.front();
  for (std::size_t i = 0; i < n; ++i) {
    require(std::abs(curve.axis[i] + curve.axis[n - 1 - i]) <= 1e-9 * span,
            "hom: curve axis must be symmetric about zero");
  }

  const auto w = trapezoid_weights(curve.axis);
  double i0 = 0.0;
  std::vector<std::complex<double>> c(n);  // Phi(W) Phi*(-W), weighted
  for (std::size_t i = 0; i < n; ++i) {
    i0 += w[i] * std::norm(curve.values[i]);
    c[i] = w[i] * curve.values[i] * std::conj(curve.values[n - 1 - i]);
  }
  if (!(i0 > 1e-300)) throw std::domain_error("hom: curve intensity is zero everywhere");

  InterferencePattern pattern;
  pattern.delays.assign(delays.begin(), delays.end());
  pattern.p_coincidence.resize(delays.size());
  pattern.visibility = visibility;
  pattern.detuning = detuning;
  for (std::size_t t = 0; t < delays.size(); ++t) {
    std::complex<double> overlap = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      overlap += c[i] * std::exp(std::complex<double>(0.0, -2.0 * curve.axis[i] * delays[t]));
    }
    pattern.p_coincidence[t] = 0.5 * (1.0 - visibility * overlap.real() / i0);
  }
  return pattern;
}

BeatScan beating_scan(const std::function<SpectralCurve(double)>& make_curve,
                      std::span<const double> detunings, double visibility,
                      std::span<const double> delays) {
  require(static_cast<bool>(make_curve), "beat scan: missing curve builder");
  require(!detunings.empty(), "beat scan: empty detuning list");
  BeatScan scan;
  scan.detunings.assign(detunings.begin(), detunings.end());
  scan.global_max_p = -1.0;
  for (double det : detunings) {
    auto pattern = hom_pattern_cw(make_curve(det), visibility, det, delays);
    const double mp = pattern.max_p();
    scan.max_p.push_back(mp);
    if (mp > scan.global_max_p) {
      scan.global_max_p = mp;
      scan.argmax_detuning = det;
    }
    scan.patterns.push_back(std::move(pattern));
  }
  return scan;
}

std::vector<double> beat_detunings(double lobe_half_width_omega, std::size_t count,
                                   double max_half_widths) {
  require(count >= 2, "beat detunings: need at least 2 values");
  require(max_half_widths > 0, "beat detunings: span must be positive");
  require(lobe_half_width_omega > 0 && std::isfinite(lobe_half_width_omega),
          "beat detunings: lobe half-width must be positive and finite");
  return linspace(0.0, 2.0 * max_half_widths * lobe_half_width_omega, count);
}

InterferencePattern hom_pattern_pulsed(const JsaGrid& jsa, double visibility,
                                       std::span<const double> delays) {
  jsa.validate();
  require(visibility >= 0.0 && visibility <= 1.0, "hom: visibility must be in [0, 1]");
  require(delays.size() >= 16, "hom: need at least 16 delays");
  const std::size_t n = jsa.omega_i.size();
  require(jsa.omega_s.size() == n, "hom: pulsed pattern needs square axes");
  const double span = jsa.omega_i.back() - jsa.omega_i.front();
  const double h = span / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    require(std::abs(jsa.omega_i[i] - jsa.omega_s[i]) <= 1e-9 * span,
            "hom: pulsed pattern needs identical axes");
    const double ideal = jsa.omega_i.front() + h * static_cast<double>(i);
    require(std::abs(jsa.omega_i[i] - ideal) <= 1e-9 * span,
            "hom: pulsed pattern needs a uniform axis");
  }

  const auto w = trapezoid_weights(jsa.omega_i);
  // Collapse the double sum over (w1, w2) onto the index difference d: the
  // phase e^{-i (w1 - w2) tau} depends only on d on a uniform axis.
  std::vector<std::complex<double>> byd(2 * n - 1, 0.0);
  double norm_total = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const auto re = static_cast<Eigen::Index>(r);
      const auto ce = static_cast<Eigen::Index>(c);
      const double ww = w[r] * w[c];
      norm_total += ww * std::norm(jsa.values(re, ce));
      byd[r - c + n - 1] += ww * jsa.values(re, ce) * std::conj(jsa.values(ce, re));
    }
  }
  if (!(norm_total > 1e-300)) throw std::domain_error("hom: amplitude is zero everywhere");

  InterferencePattern pattern;
  pattern.delays.assign(delays.begin(), delays.end());
  pattern.p_coincidence.resize(delays.size());
  pattern.visibility = visibility;
  for (std::size_t t = 0; t < delays.size(); ++t) {
    std::complex<double> overlap = 0.0;
    for (std::size_t d = 0; d < byd.size(); ++d) {
      const double freq = h * (static_cast<double>(d) - static_cast<double>(n - 1));
      overlap += byd[d] * std::exp(std::complex<double>(0.0, -freq * delays[t]));
    }
    pattern.p_coincidence[t] = 0.5 * (1.0 - visibility * overlap.real() / norm_total);
  }
  return pattern;
}

namespace {

// Least-squares fit of p = 1/2 (1 - V shape(tau/width)): V solves in closed
// form per width, the width by a dense scan plus golden-section polish.
template <typename Shape>
DipFit fit_dip(const InterferencePattern& pattern, Shape shape) {
  require(pattern.delays.size() == pattern.p_coincidence.size() && pattern.delays.size() >= 16,
          "dip fit: malformed pattern");
  const double tau_max = std::max(std::abs(pattern.delays.front()),
                                  std::abs(pattern.delays.back()));
  require(tau_max > 0, "dip fit: degenerate delay axis");

  auto sse_at = [&](double width, double* v_out) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < pattern.delays.size(); ++i) {
      const double s = shape(pattern.delays[i] / width);
      num += (0.5 - pattern.p_coincidence[i]) * s;
      den += s * s;
    }
    const double v = den > 0 ? 2.0 * num / den : 0.0;
    double sse = 0.0;
    for (std::size_t i = 0; i < pattern.delays.size(); ++i) {
      const double model = 0.5 * (1.0 - v * shape(pattern.delays[i] / width));
      const double r = pattern.p_coincidence[i] - model;
      sse += r * r;
    }
    if (v_out) *v_out = v;
    return sse;
  };

  const int steps = 2000;
  double best_width = tau_max, best_sse = sse_at(tau_max, nullptr);
  for (int i = 1; i <= steps; ++i) {
    const double width = tau_max * static_cast<double>(i) / steps;
    const double sse = sse_at(width, nullptr);
    if (sse < best_sse) {
      best_sse = sse;
      best_width = width;
    }
  }
  double lo = std::max(best_width - tau_max / steps, tau_max / (4.0 * steps));
  double hi = best_width + tau_max / steps;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 80; ++it) {
    const double a = hi - golden * (hi - lo);
    const double b = lo + golden * (hi - lo);
    if (sse_at(a, nullptr) < sse_at(b, nullptr)) {
      hi = b;
    } else {
      lo = a;
    }
  }
  best_width = 0.5 * (lo + hi);

  DipFit fit;
  fit.width = best_width;
  fit.sse = sse_at(best_width, &fit.visibility);
  return fit;
}

}  // namespace

DipFit fit_triangle_dip(const InterferencePattern& pattern) {
  return fit_dip(pattern, [](double u) { return std::max(0.0, 1.0 - std::abs(u)); });
}

DipFit fit_gaussian_dip(const InterferencePattern& pattern) {
  return fit_dip(pattern, [](double u) { return std::exp(-0.5 * u * u); });
}

void write_pattern_csv(std::ostream& out, const InterferencePattern& pattern) {
  require(pattern.delays.size() == pattern.p_coincidence.size(), "pattern: size mismatch");
  out << "# detuning [rad/s]: " << format_sci(pattern.detuning)
      << ", visibility: " << format_sci(pattern.visibility) << "\n";
  out << "tau,p\n";
  for (std::size_t i = 0; i < pattern.delays.size(); ++i) {
    out << format_sci(pattern.delays[i]) << "," << format_sci(pattern.p_coincidence[i]) << "\n";
  }
}

}  // namespace qpm
