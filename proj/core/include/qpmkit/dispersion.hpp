#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace qpm {

/// Phase mismatch linearized around the field center frequencies:
///   dk(w_i, w_s, w_p) = delta_k0 + kp'*(w_p - mu_p) - ki'*(w_i - mu_i) - ks'*(w_s - mu_s)
/// The k' coefficients are inverse group velocities in s/m. Valid only within
/// the expansion window around (mu_p, mu_i, mu_s); the caller owns that window.
struct LinearizedGvm {
  double kp_prime = 0.0;  // s/m
  double ki_prime = 0.0;  // s/m
  double ks_prime = 0.0;  // s/m
  double mu_p = 0.0;      // rad/s
  double mu_i = 0.0;      // rad/s
  double mu_s = 0.0;      // rad/s
  double delta_k0 = 0.0;  // rad/m, residual mismatch at the center frequencies

  void validate() const;  // throws std::invalid_argument
};

/// Sampled wavevector magnitude k(omega) with natural cubic-spline
/// interpolation. Evaluation outside the sampled domain is a hard error.
class WavevectorTable {
 public:
  /// omega strictly increasing, at least 4 samples.
  WavevectorTable(std::vector<double> omega, std::vector<double> k);

  /// Two whitespace-separated columns (omega [rad/s], k [rad/m]); '#' starts a comment.
  static WavevectorTable from_stream(std::istream& in, const std::string& name = "<stream>");
  static WavevectorTable from_file(const std::string& path);

  double operator()(double omega) const;  // throws std::domain_error outside the table
  double min_omega() const { return omega_.front(); }
  double max_omega() const { return omega_.back(); }
  std::size_t size() const { return omega_.size(); }

 private:
  std::vector<double> omega_;
  std::vector<double> k_;
  std::vector<double> m_;  // spline second derivatives
};

struct TabulatedDispersion {
  WavevectorTable pump;
  WavevectorTable idler;
  WavevectorTable signal;
  double mu_p = 0.0;  // rad/s
  double mu_i = 0.0;  // rad/s
  double mu_s = 0.0;  // rad/s

  void validate() const;  // centers must lie strictly inside each table
};

using DispersionModel = std::variant<LinearizedGvm, TabulatedDispersion>;

/// Quasi-phase-matching grating: sign-flip period [m] and poling order.
struct QpmGrating {
  double period = 0.0;  // m
  int order = 1;

  void validate() const;
  double coherence_length() const { return period / 2.0; }
};

/// dk = k_p - k_i - k_s evaluated per model. All omegas must be positive.
double phase_mismatch(const DispersionModel& model, double omega_i, double omega_s,
                      double omega_p);

/// Grating period satisfying delta_k = order * 2*pi / period exactly.
/// delta_k == 0 is a degenerate-phase-matching error.
double qpm_period(double delta_k, int order);

/// kp' - (ks' + ki')/2 at the center frequencies. Zero means the pump group
/// velocity sits halfway between the daughter-photon group velocities.
double gvm_condition_residual(const DispersionModel& model);

/// ks' - ki' at the center frequencies (signal/idler group-velocity mismatch).
double group_velocity_difference(const DispersionModel& model);

/// First-order expansion of a tabulated model around its center frequencies,
/// derivatives by central differences on the interpolant.
LinearizedGvm linearize(const TabulatedDispersion& tab);

}  // namespace qpm
