#pragma once

#include <span>
#include <vector>

#include "qpmkit/pmf.hpp"
#include "qpmkit/poling.hpp"

namespace qpm {

enum class TargetKind { Gaussian, Triangle, Tophat, Uniform };

/// Design target, defined either in z space (the nonlinearity envelope) or in
/// dk space (the desired phase-matching amplitude); the two are a Fourier
/// pair and both are exposed with peak value 1.
///
///   Gaussian: chi(z) = exp(-(z/l_eff)^2 / gamma), PMF(dk) = exp(-gamma*(dk*l_eff/2)^2)
///   Triangle: PMF(dk) = max(0, 1 - |dk|/a), a = width/2;  chi(z) = sinc^2(a*z/2)
///   Tophat:   PMF(dk) = 1 for |dk| <= a, a = width/2;     chi(z) = sinc(a*z) (signed)
///   Uniform:  chi(z) = 1 for |z| <= width/2;              PMF(dk) = sinc(dk*width/2)
struct TargetShape {
  TargetKind kind = TargetKind::Gaussian;
  double width = 0.0;  // Gaussian: l_eff [m]; Triangle/Tophat: full PMF width [rad/m]; Uniform: length [m]
  double gamma = 0.0;  // Gaussian only; 0 means use gamma_from_fwhm_match()

  static TargetShape gaussian(double l_eff, double gamma = 0.0);
  static TargetShape triangle(double pmf_base_width);
  static TargetShape tophat(double pmf_width);
  static TargetShape uniform(double length);

  void validate() const;
  double gamma_or_default() const;

  double value(double z) const;       // z-space target, peak 1
  double pmf_value(double dk) const;  // dk-space target, peak 1

  /// Scale of the central PMF lobe: first zero of the matching sinc (Gaussian
  /// and Uniform) or the half width of the defined support (Triangle, Tophat).
  double pmf_lobe_half_width() const;
};

std::vector<double> target_shape_samples(const TargetShape& target,
                                         std::span<const double> z_grid);

/// Evaluation grid used for all reported design metrics: 4096 points spanning
/// +/- 6 central-lobe half widths of the target PMF.
std::vector<double> standard_dk_grid(const TargetShape& target);

struct DesignSpec {
  TargetShape target;
  double lambda_qpm = 0.0;  // m
  int m_min = 1;
  int m_max = 6;            // <= 16
  double length_budget = 0.0;  // m
  bool allow_negative = false;

  void validate() const;
};

struct DesignReport {
  std::vector<PolingSection> sections;
  double total_length = 0.0;
  double pmf_l2_error = 0.0;               // peak-normalized L2 vs target on the standard grid
  double pmf_l2_error_before_refine = 0.0;
  double first_sidelobe_intensity = 0.0;
  double yield_vs_uniform = 0.0;           // vs a uniform crystal of the same total length
  int refinement_moves = 0;
};

/// Discretely poled approximation of the target:
///  1. scale the target so its peak is 1/m_min;
///  2. admissible levels are {+/- 1/m : m_min <= m <= m_max} and 0;
///  3. walk outward from the center on the coherence-length grid, assigning
///     the nearest admissible level (ties resolve to the smaller |level|);
///  4. round each run down to whole periods, minimum two; runs that cannot
///     meet the minimum are merged into their neighbor;
///  5. stop past the last point where |target| >= 1/(2*m_max), or at the
///     length budget;
///  6. coordinate descent on section period counts (one period per move,
///     mirrored to keep symmetric layouts symmetric), accepting only moves
///     that lower the peak-normalized PMF L2 error on the standard grid.
DesignReport design_profile(const DesignSpec& spec);

/// Metrics of an existing layout against a target, same conventions as above.
DesignReport evaluate_design(std::span<const PolingSection> sections,
                             const TargetShape& target, double lambda_qpm);

}  // namespace qpm
