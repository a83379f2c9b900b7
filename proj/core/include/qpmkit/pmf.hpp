#pragma once

#include <complex>
#include <iosfwd>
#include <span>
#include <vector>

#include "qpmkit/poling.hpp"

namespace qpm {

/// sin(x)/x with the removable singularity filled in.
double sinc(double x);

enum class AxisKind { DeltaK, Detuning };  // rad/m vs rad/s
enum class Normalization { Raw, PeakNormalized };

/// Complex spectral amplitude sampled on a strictly increasing axis of at
/// least 16 points. Peak-normalized curves have max |value| == 1.
struct SpectralCurve {
  std::vector<double> axis;
  std::vector<std::complex<double>> values;
  AxisKind axis_kind = AxisKind::DeltaK;
  Normalization normalization = Normalization::Raw;

  void validate() const;
  SpectralCurve peak_normalized() const;
  std::vector<double> magnitudes() const;
};

/// Phase-matching function of a piecewise-constant profile, evaluated in
/// closed form per segment:
///   PMF(dk) = sum_s level_s * w_s * sinc(dk*w_s/2) * exp(-i*dk*z_center_s)
/// The constant spectral prefactor (sqrt(2*pi) etc.) is dropped throughout;
/// only relative magnitudes and shapes are meaningful.
std::complex<double> pmf_point_from_profile(const NonlinearityProfile& profile, double dk);
SpectralCurve pmf_from_profile(const NonlinearityProfile& profile,
                               std::span<const double> dk_grid,
                               Normalization norm = Normalization::Raw);

/// Domain-level evaluation conventions.
///   BoundarySum:   sum_j s_j (e^{-i dk z_j} - e^{-i dk z_{j-1}}), the bare
///                  boundary sum; magnitude differs from the transform by the
///                  slowly varying 1/dk envelope.
///   ExactIntegral: the boundary sum divided by (-i dk), i.e. the exact
///                  Fourier transform of the domain pattern, with the dk -> 0
///                  limit (width * e^{-i dk z_center} per domain) built in.
/// Both are evaluated at the full (unshifted) dk; to view the curve around a
/// QPM peak, evaluate at dk = dk_p + 2*pi/Lambda and plot against dk_p.
enum class DomainPmfForm { BoundarySum, ExactIntegral };

std::complex<double> pmf_point_from_domains(const DomainSequence& seq, double dk,
                                            DomainPmfForm form = DomainPmfForm::ExactIntegral);
SpectralCurve pmf_from_domains(const DomainSequence& seq, std::span<const double> dk_grid,
                               DomainPmfForm form = DomainPmfForm::ExactIntegral,
                               Normalization norm = Normalization::Raw);

/// Reference Gaussian phase-matching amplitude exp(-gamma*(dk*l_eff/2)^2).
SpectralCurve pmf_gaussian(std::span<const double> dk_grid, double l_eff, double gamma);

/// Positive root of sinc(x) = 1/2, by bisection to 1e-12 (about 1.8955).
double sinc_half_amplitude_root();

/// gamma = ln(2) / x^2 at that root: the Gaussian exp(-gamma*x^2) then has the
/// same amplitude FWHM as sinc(x). About 0.19292.
double gamma_from_fwhm_match();

struct CurveMetrics {
  double peak_position = 0.0;          // axis value at max |value|
  double fwhm_amplitude = 0.0;         // of |value|
  double fwhm_intensity = 0.0;         // of |value|^2
  double first_sidelobe_intensity = 0.0;  // strongest secondary |value|^2 max / peak, 0 if none
};

/// Half crossings located by linear interpolation between bracketing samples.
/// Missing crossings on either side raise a grid-too-narrow error.
CurveMetrics curve_metrics(const SpectralCurve& curve);

/// CSV export: comment header with axis tag and normalization, then columns
/// axis, re, im, abs, abs2. 12 significant digits, locale-independent.
void write_curve_csv(std::ostream& out, const SpectralCurve& curve);

}  // namespace qpm
