#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "qpmkit/dispersion.hpp"
#include "qpmkit/poling.hpp"

namespace qpm {

struct Monochromatic {
  double mu_p = 0.0;  // rad/s
};

/// Gaussian spectral envelope exp(-(w - mu_p)^2 / (2 sigma_p^2)).
struct GaussianPulse {
  double mu_p = 0.0;     // rad/s
  double sigma_p = 0.0;  // rad/s, amplitude standard deviation

  void validate() const;
};

using PumpEnvelope = std::variant<Monochromatic, GaussianPulse>;

/// Pump amplitude spectral std dev from an intensity-FWHM wavelength
/// bandwidth: sigma_p = (2*pi*c*dlambda/lambda^2) / (2*sqrt(ln 2)).
double pump_sigma_from_wavelength_fwhm(double lambda0, double fwhm_lambda);

/// One-dimensional phase-matching amplitude as a function of dk, plus the
/// scale of its central lobe (used to size default grids).
class PmfModel {
 public:
  virtual ~PmfModel() = default;
  virtual std::complex<double> value(double dk) const = 0;
  virtual double lobe_half_width() const = 0;  // rad/m
};

/// sinc(dk*L/2): uniform crystal of length L.
class SincPmf final : public PmfModel {
 public:
  explicit SincPmf(double length);
  std::complex<double> value(double dk) const override;
  double lobe_half_width() const override;
  double length() const { return length_; }

 private:
  double length_;
};

/// exp(-gamma*(dk*l_eff/2)^2); lobe scale taken from the FWHM-matched sinc.
class GaussianPmf final : public PmfModel {
 public:
  GaussianPmf(double l_eff, double gamma);
  std::complex<double> value(double dk) const override;
  double lobe_half_width() const override;

 private:
  double l_eff_;
  double gamma_;
};

/// Closed-form transform of a piecewise-constant nonlinearity profile.
class ProfilePmf final : public PmfModel {
 public:
  explicit ProfilePmf(NonlinearityProfile profile);
  std::complex<double> value(double dk) const override;
  double lobe_half_width() const override;
  const NonlinearityProfile& profile() const { return profile_; }

 private:
  NonlinearityProfile profile_;
};

/// PMF identically 1 (spectrally unconstrained source).
class FlatPmf final : public PmfModel {
 public:
  explicit FlatPmf(double nominal_lobe_half_width);
  std::complex<double> value(double dk) const override;
  double lobe_half_width() const override;

 private:
  double lobe_;
};

struct JsaAxes {
  std::vector<double> omega_i;  // rad/s, strictly increasing
  std::vector<double> omega_s;
};

/// Square axes centered on (mu_i, mu_s) sized to cover +/- diag_sigmas pump
/// standard deviations along the energy diagonal and +/- antidiag_lobes PMF
/// central-lobe half widths across it.
JsaAxes default_jsa_axes(const GaussianPulse& pump, const LinearizedGvm& disp,
                         double pmf_lobe_half_width_dk, std::size_t n,
                         double diag_sigmas = 5.0, double antidiag_lobes = 8.0);

/// Joint spectral amplitude f(w_i, w_s) on a rectangular grid; values are
/// normalized so that sum |f|^2 dw_i dw_s = 1 (trapezoid weights).
struct JsaGrid {
  std::vector<double> omega_i;  // rows
  std::vector<double> omega_s;  // cols
  Eigen::MatrixXcd values;

  void validate() const;
};

enum class CoveragePolicy { Strict, Permissive };

/// f = pump(w_i + w_s) * PMF(dk(w_i, w_s, w_i + w_s)), then normalized.
/// Strict mode errors when the axes cover less than 4 pump standard
/// deviations along the energy diagonal.
JsaGrid build_jsa(const GaussianPulse& pump, const PmfModel& pmf,
                  const DispersionModel& dispersion, const JsaAxes& axes,
                  CoveragePolicy policy = CoveragePolicy::Strict);

struct SchmidtResult {
  std::vector<double> coefficients;  // lambda_k, descending, sum to 1
  double purity = 0.0;               // sum lambda_k^2
  double schmidt_number = 0.0;       // 1 / purity
};

/// Schmidt decomposition via the quadrature-weighted Gram matrix eigenvalues.
SchmidtResult schmidt_decompose(const JsaGrid& jsa);

/// Group-velocity-matched crystal length sqrt(8) / (sqrt(gamma) * sigma_p * |gv_diff|)
/// at which the gamma-matched Gaussian JSA becomes separable.
double gvm_length(double sigma_p, double gv_diff, double gamma);

struct MarginalSpectra {
  std::vector<double> omega_i;
  std::vector<double> density_i;  // integrates to 1
  std::vector<double> omega_s;
  std::vector<double> density_s;
};

MarginalSpectra marginal_spectra(const JsaGrid& jsa);

/// Long-format CSV: columns omega_i, omega_s, re, im.
void write_jsa_csv(std::ostream& out, const JsaGrid& jsa);

}  // namespace qpm
