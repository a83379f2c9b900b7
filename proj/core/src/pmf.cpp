#include "qpmkit/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "qpmkit/format.hpp"

namespace qpm {

double sinc(double x) {
  // Below this threshold 1 - x^2/6 is exact to double precision.
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

void SpectralCurve::validate() const {
  if (axis.size() != values.size()) {
    throw std::invalid_argument("spectral curve: axis/value size mismatch");
  }
  if (axis.size() < 16) throw std::invalid_argument("spectral curve: needs at least 16 points");
  for (std::size_t i = 1; i < axis.size(); ++i) {
    if (!(axis[i] > axis[i - 1])) {
      throw std::invalid_argument("spectral curve: axis must be strictly increasing");
    }
  }
}

SpectralCurve SpectralCurve::peak_normalized() const {
  validate();
  double peak = 0.0;
  for (const auto& v : values) peak = std::max(peak, std::abs(v));
  if (!(peak > 0)) throw std::domain_error("spectral curve: cannot normalize an all-zero curve");
  SpectralCurve out = *this;
  for (auto& v : out.values) v /= peak;
  out.normalization = Normalization::PeakNormalized;
  return out;
}

std::vector<double> SpectralCurve::magnitudes() const {
  std::vector<double> m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m[i] = std::abs(values[i]);
  return m;
}

std::complex<double> pmf_point_from_profile(const NonlinearityProfile& profile, double dk) {
  std::complex<double> sum = 0.0;
  for (const auto& s : profile.segments) {
    if (s.level == 0.0) continue;
    const double w = s.z_end - s.z_start;
    const double zc = 0.5 * (s.z_start + s.z_end);
    sum += s.level * w * sinc(0.5 * dk * w) * std::exp(std::complex<double>(0.0, -dk * zc));
  }
  return sum;
}

namespace {

SpectralCurve finish_curve(SpectralCurve curve, Normalization norm) {
  curve.validate();
  if (norm == Normalization::PeakNormalized) return curve.peak_normalized();
  return curve;
}

}  // namespace

SpectralCurve pmf_from_profile(const NonlinearityProfile& profile,
                               std::span<const double> dk_grid, Normalization norm) {
  profile.validate();
  SpectralCurve curve;
  curve.axis.assign(dk_grid.begin(), dk_grid.end());
  curve.values.resize(dk_grid.size());
  for (std::size_t i = 0; i < dk_grid.size(); ++i) {
    curve.values[i] = pmf_point_from_profile(profile, dk_grid[i]);
  }
  return finish_curve(std::move(curve), norm);
}

std::complex<double> pmf_point_from_domains(const DomainSequence& seq, double dk,
                                            DomainPmfForm form) {
  // Per domain the boundary pair collapses to the numerically stable form
  //   s_j (e^{-i dk z_j} - e^{-i dk z_{j-1}}) = s_j * (-2i sin(dk w/2)) e^{-i dk zc}.
  std::complex<double> sum = 0.0;
  double z = seq.origin;
  for (const auto& d : seq.domains) {
    const double zc = z + 0.5 * d.width;
    const double half = 0.5 * dk * d.width;
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, -dk * zc));
    if (form == DomainPmfForm::BoundarySum) {
      sum += static_cast<double>(d.sign) * std::complex<double>(0.0, -2.0 * std::sin(half)) * phase;
    } else {
      sum += static_cast<double>(d.sign) * d.width * sinc(half) * phase;
    }
    z += d.width;
  }
  return sum;
}

SpectralCurve pmf_from_domains(const DomainSequence& seq, std::span<const double> dk_grid,
                               DomainPmfForm form, Normalization norm) {
  seq.validate();
  SpectralCurve curve;
  curve.axis.assign(dk_grid.begin(), dk_grid.end());
  curve.values.resize(dk_grid.size());
  for (std::size_t i = 0; i < dk_grid.size(); ++i) {
    curve.values[i] = pmf_point_from_domains(seq, dk_grid[i], form);
  }
  return finish_curve(std::move(curve), norm);
}

SpectralCurve pmf_gaussian(std::span<const double> dk_grid, double l_eff, double gamma) {
  if (!(l_eff > 0)) throw std::invalid_argument("gaussian pmf: l_eff must be positive");
  if (!(gamma > 0)) throw std::invalid_argument("gaussian pmf: gamma must be positive");
  SpectralCurve curve;
  curve.axis.assign(dk_grid.begin(), dk_grid.end());
  curve.values.resize(dk_grid.size());
  for (std::size_t i = 0; i < dk_grid.size(); ++i) {
    const double x = 0.5 * dk_grid[i] * l_eff;
    curve.values[i] = std::exp(-gamma * x * x);
  }
  curve.normalization = Normalization::PeakNormalized;
  curve.validate();
  return curve;
}

double sinc_half_amplitude_root() {
  // sinc decreases monotonically from 1 through 1/2 on (0, pi).
  double lo = 1.0, hi = 3.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (sinc(mid) > 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double gamma_from_fwhm_match() {
  const double x = sinc_half_amplitude_root();
  return std::log(2.0) / (x * x);
}

CurveMetrics curve_metrics(const SpectralCurve& curve) {
  curve.validate();
  const auto mag = curve.magnitudes();
  const std::size_t peak_idx =
      static_cast<std::size_t>(std::max_element(mag.begin(), mag.end()) - mag.begin());
  const double peak = mag[peak_idx];
  if (!(peak > 0)) throw std::domain_error("curve metrics: all-zero curve");

  CurveMetrics out;
  out.peak_position = curve.axis[peak_idx];

  // Half crossing of f (amplitude or intensity) on either side of the peak,
  // linearly interpolated; throws if the grid does not bracket the crossing.
  auto crossing = [&](const std::vector<double>& f, bool rightward) {
    const double half = 0.5 * f[peak_idx];
    std::size_t i = peak_idx;
    while (true) {
      const std::size_t j = rightward ? i + 1 : i - 1;
      if ((rightward && j >= f.size()) || (!rightward && i == 0)) {
        throw std::domain_error("curve metrics: grid too narrow to bracket the half crossing");
      }
      if (f[j] <= half) {
        const double t = (f[i] - half) / (f[i] - f[j]);
        return curve.axis[i] + t * (curve.axis[j] - curve.axis[i]);
      }
      i = j;
    }
  };
  std::vector<double> intensity(mag.size());
  for (std::size_t i = 0; i < mag.size(); ++i) intensity[i] = mag[i] * mag[i];
  out.fwhm_amplitude = crossing(mag, true) - crossing(mag, false);
  out.fwhm_intensity = crossing(intensity, true) - crossing(intensity, false);

  // Strongest interior local maximum of |value|^2 away from the main peak.
  double side = 0.0;
  for (std::size_t i = 1; i + 1 < mag.size(); ++i) {
    if (i == peak_idx) continue;
    if (mag[i] >= mag[i - 1] && mag[i] >= mag[i + 1] && mag[i] < peak) {
      side = std::max(side, mag[i] * mag[i]);
    }
  }
  out.first_sidelobe_intensity = side / (peak * peak);
  return out;
}

void write_curve_csv(std::ostream& out, const SpectralCurve& curve) {
  curve.validate();
  out << "# axis: " << (curve.axis_kind == AxisKind::DeltaK ? "delta_k [rad/m]" : "detuning [rad/s]")
      << ", normalization: "
      << (curve.normalization == Normalization::PeakNormalized ? "peak" : "raw") << "\n";
  out << "axis,re,im,abs,abs2\n";
  for (std::size_t i = 0; i < curve.axis.size(); ++i) {
    const auto v = curve.values[i];
    out << format_sci(curve.axis[i]) << "," << format_sci(v.real()) << "," << format_sci(v.imag())
        << "," << format_sci(std::abs(v)) << "," << format_sci(std::norm(v)) << "\n";
  }
}

}  // namespace qpm
