#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "qpmkit/biphoton.hpp"
#include "qpmkit/pmf.hpp"

namespace qpm {

/// Coincidence probability versus relative delay for one interferometer
/// setting. p is bounded by [ (1-V)/2, (1+V)/2 ] and must relax to the 0.5
/// baseline at the delay-window edges (checked to 1e-3).
struct InterferencePattern {
  std::vector<double> delays;  // s
  std::vector<double> p_coincidence;
  double visibility = 1.0;
  double detuning = 0.0;  // rad/s, center-frequency offset w_i - w_s

  void validate() const;
  double max_p() const;
  double min_p() const;
};

/// Reduced spectral amplitude of a continuous-wave-pumped pair source on a
/// symmetric detuning grid: Phi(W) = PMF(gv_delta*(W + detuning/2) + delta_k0)
/// where W is the single-photon offset (w_i = mu + detuning/2 + W,
/// w_s = mu - detuning/2 - W). A nonzero detuning recenters the curve.
SpectralCurve cw_omega_curve(const PmfModel& pmf, double gv_delta, double delta_k0,
                             double detuning, std::span<const double> omega_grid);

/// Symmetric grid sized so the curve intensity has decayed below 1e-6 of its
/// peak at the edges, at >= points_per_lobe samples per central-lobe width.
std::vector<double> auto_omega_grid(const PmfModel& pmf, double gv_delta,
                                    double detuning, std::size_t points_per_lobe = 8);

/// Delay grid covering the full correlation support of a crystal of the given
/// length: the pattern is exactly 0.5 outside |tau| = gv_delta*length/2.
std::vector<double> default_delays(double gv_delta, double crystal_length,
                                   std::size_t n = 801, double span_factor = 2.0);

/// Hong-Ou-Mandel coincidence probability under continuous-wave pumping:
///   p(tau) = 1/2 * [ 1 - V * Re( I(tau) / I0 ) ]
///   I(tau) = integral Phi(W) Phi*(-W) e^{-2 i W tau} dW,   I0 = integral |Phi|^2 dW
/// by trapezoidal quadrature on the (symmetric) grid of `curve`. The curve is
/// used verbatim; any detuning must already be baked into its centering, and
/// `detuning` is recorded on the pattern for bookkeeping.
InterferencePattern hom_pattern_cw(const SpectralCurve& curve, double visibility,
                                   double detuning, std::span<const double> delays);

struct BeatScan {
  std::vector<double> detunings;
  std::vector<InterferencePattern> patterns;
  std::vector<double> max_p;  // per detuning
  double global_max_p = 0.0;
  double argmax_detuning = 0.0;
};

/// Sweep of HOM patterns over center-frequency detunings. `make_curve` builds
/// the reduced amplitude for a given detuning (see cw_omega_curve).
BeatScan beating_scan(const std::function<SpectralCurve(double)>& make_curve,
                      std::span<const double> detunings, double visibility,
                      std::span<const double> delays);

/// Detuning list for a beat scan: `count` values evenly spaced so the PMF
/// center shift (= detuning/2 on the omega axis) runs from 0 to
/// max_half_widths central-lobe half-widths. `lobe_half_width_omega` is the
/// lobe half-width converted to rad/s (lobe in rad/m divided by |gv_delta|).
std::vector<double> beat_detunings(double lobe_half_width_omega, std::size_t count = 21,
                                   double max_half_widths = 6.0);

/// Pulsed-pump generalization on a square JSA grid (identical axes):
///   p(tau) = 1/2 * [ 1 - V * Re( sum f(w1,w2) f*(w2,w1) e^{-i (w1-w2) tau} w1w2 / N ) ]
/// with N = sum |f|^2 w1w2. Errors on non-square or non-uniform axes.
InterferencePattern hom_pattern_pulsed(const JsaGrid& jsa, double visibility,
                                       std::span<const double> delays);

/// Least-squares fit of p(tau) = 1/2 (1 - V * shape(tau/width)); sse is the
/// sum of squared residuals over all delay samples.
struct DipFit {
  double visibility = 0.0;
  double width = 0.0;  // s; triangle: base half width, gaussian: std dev
  double sse = 0.0;
};

DipFit fit_triangle_dip(const InterferencePattern& pattern);
DipFit fit_gaussian_dip(const InterferencePattern& pattern);

/// CSV export: comment header with detuning and visibility, columns tau, p.
void write_pattern_csv(std::ostream& out, const InterferencePattern& pattern);

}  // namespace qpm
