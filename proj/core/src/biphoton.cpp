#include "qpmkit/biphoton.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "qpmkit/format.hpp"
#include "qpmkit/grid.hpp"
#include "qpmkit/pmf.hpp"
#include "qpmkit/units.hpp"

namespace qpm {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void GaussianPulse::validate() const {
  require(std::isfinite(mu_p) && mu_p > 0, "pump: center frequency must be positive");
  require(std::isfinite(sigma_p) && sigma_p > 0, "pump: sigma_p must be positive");
}

double pump_sigma_from_wavelength_fwhm(double lambda0, double fwhm_lambda) {
  require(lambda0 > 0 && fwhm_lambda > 0, "pump: wavelengths must be positive");
  // |dw/dlambda| = 2*pi*c/lambda^2 converts the intensity FWHM to rad/s; a
  // Gaussian intensity FWHM is 2*sqrt(ln 2) amplitude standard deviations.
  const double fwhm_omega = two_pi * speed_of_light * fwhm_lambda / (lambda0 * lambda0);
  return fwhm_omega / (2.0 * std::sqrt(std::log(2.0)));
}

SincPmf::SincPmf(double length) : length_(length) {
  require(length > 0, "sinc pmf: length must be positive");
}

std::complex<double> SincPmf::value(double dk) const { return sinc(0.5 * dk * length_); }

double SincPmf::lobe_half_width() const { return two_pi / length_; }

GaussianPmf::GaussianPmf(double l_eff, double gamma) : l_eff_(l_eff), gamma_(gamma) {
  require(l_eff > 0, "gaussian pmf: l_eff must be positive");
  require(gamma > 0, "gaussian pmf: gamma must be positive");
}

std::complex<double> GaussianPmf::value(double dk) const {
  const double x = 0.5 * dk * l_eff_;
  return std::exp(-gamma_ * x * x);
}

double GaussianPmf::lobe_half_width() const { return two_pi / l_eff_; }

ProfilePmf::ProfilePmf(NonlinearityProfile profile) : profile_(std::move(profile)) {
  profile_.validate();
}

std::complex<double> ProfilePmf::value(double dk) const {
  return pmf_point_from_profile(profile_, dk);
}

double ProfilePmf::lobe_half_width() const { return two_pi / profile_.total_length(); }

FlatPmf::FlatPmf(double nominal_lobe_half_width) : lobe_(nominal_lobe_half_width) {
  require(lobe_ > 0, "flat pmf: nominal lobe half width must be positive");
}

std::complex<double> FlatPmf::value(double) const { return 1.0; }

double FlatPmf::lobe_half_width() const { return lobe_; }

JsaAxes default_jsa_axes(const GaussianPulse& pump, const LinearizedGvm& disp,
                         double pmf_lobe_half_width_dk, std::size_t n, double diag_sigmas,
                         double antidiag_lobes) {
  pump.validate();
  disp.validate();
  require(pmf_lobe_half_width_dk > 0, "jsa axes: lobe half width must be positive");
  require(n >= 16, "jsa axes: need at least 16 points per axis");
  require(diag_sigmas > 0 && antidiag_lobes > 0, "jsa axes: spans must be positive");
  // The pump confines w_i + w_s, the PMF confines the anti-diagonal detuning
  // v = (w_i - w_s)/... with dk ~ gv slope; convert the lobe width back to a
  // frequency half width via the signal/idler slope difference.
  const double gv_diff = std::abs(group_velocity_difference(disp));
  if (!(gv_diff > 0)) {
    throw std::domain_error("jsa axes: group-velocity matched dispersion needs explicit axes");
  }
  const double lobe_freq = 2.0 * pmf_lobe_half_width_dk / gv_diff;
  const double half = 0.5 * diag_sigmas * pump.sigma_p + 0.5 * antidiag_lobes * lobe_freq;
  JsaAxes axes;
  axes.omega_i = symmetric_linspace(half, n);
  axes.omega_s = axes.omega_i;
  for (auto& w : axes.omega_i) w += disp.mu_i;
  for (auto& w : axes.omega_s) w += disp.mu_s;
  return axes;
}

void JsaGrid::validate() const {
  require(omega_i.size() >= 16 && omega_s.size() >= 16, "jsa: needs at least 16x16 points");
  require(values.rows() == static_cast<Eigen::Index>(omega_i.size()) &&
              values.cols() == static_cast<Eigen::Index>(omega_s.size()),
          "jsa: value matrix does not match axes");
  for (std::size_t i = 1; i < omega_i.size(); ++i) {
    require(omega_i[i] > omega_i[i - 1], "jsa: omega_i must be strictly increasing");
  }
  for (std::size_t i = 1; i < omega_s.size(); ++i) {
    require(omega_s[i] > omega_s[i - 1], "jsa: omega_s must be strictly increasing");
  }
}

JsaGrid build_jsa(const GaussianPulse& pump, const PmfModel& pmf,
                  const DispersionModel& dispersion, const JsaAxes& axes,
                  CoveragePolicy policy) {
  pump.validate();
  require(!axes.omega_i.empty() && !axes.omega_s.empty(), "jsa: empty axes");

  if (policy == CoveragePolicy::Strict) {
    // Coverage of w_i + w_s - mu_p along the energy diagonal.
    const double lo = axes.omega_i.front() + axes.omega_s.front() - pump.mu_p;
    const double hi = axes.omega_i.back() + axes.omega_s.back() - pump.mu_p;
    if (lo > -4.0 * pump.sigma_p || hi < 4.0 * pump.sigma_p) {
      throw std::domain_error(
          "jsa: axes cover less than 4 pump standard deviations along the diagonal");
    }
  }

  JsaGrid jsa;
  jsa.omega_i = axes.omega_i;
  jsa.omega_s = axes.omega_s;
  jsa.values.resize(static_cast<Eigen::Index>(axes.omega_i.size()),
                    static_cast<Eigen::Index>(axes.omega_s.size()));
  const double inv_two_sigma2 = 1.0 / (2.0 * pump.sigma_p * pump.sigma_p);
  for (std::size_t r = 0; r < axes.omega_i.size(); ++r) {
    for (std::size_t c = 0; c < axes.omega_s.size(); ++c) {
      const double omega_p = axes.omega_i[r] + axes.omega_s[c];
      const double d = omega_p - pump.mu_p;
      const double pump_amp = std::exp(-d * d * inv_two_sigma2);
      const double dk = phase_mismatch(dispersion, axes.omega_i[r], axes.omega_s[c], omega_p);
      jsa.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          pump_amp * pmf.value(dk);
    }
  }
  jsa.validate();

  const auto wi = trapezoid_weights(jsa.omega_i);
  const auto ws = trapezoid_weights(jsa.omega_s);
  double total = 0.0;
  for (std::size_t r = 0; r < wi.size(); ++r) {
    for (std::size_t c = 0; c < ws.size(); ++c) {
      total += wi[r] * ws[c] *
               std::norm(jsa.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    }
  }
  if (!(total > 1e-300)) {
    throw std::domain_error("jsa: amplitude is zero everywhere on the grid");
  }
  jsa.values /= std::sqrt(total);
  return jsa;
}

SchmidtResult schmidt_decompose(const JsaGrid& jsa) {
  jsa.validate();
  const auto wi = trapezoid_weights(jsa.omega_i);
  const auto ws = trapezoid_weights(jsa.omega_s);

  // B = diag(sqrt(wi)) F diag(sqrt(ws)) discretizes the integral kernel; the
  // eigenvalues of B^H B are the squared Schmidt coefficients.
  Eigen::MatrixXcd b = jsa.values;
  for (Eigen::Index r = 0; r < b.rows(); ++r) {
    b.row(r) *= std::sqrt(wi[static_cast<std::size_t>(r)]);
  }
  for (Eigen::Index c = 0; c < b.cols(); ++c) {
    b.col(c) *= std::sqrt(ws[static_cast<std::size_t>(c)]);
  }

  const Eigen::MatrixXcd gram = b.adjoint() * b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::domain_error("schmidt: eigenvalue decomposition failed");
  }

  Eigen::VectorXd ev = solver.eigenvalues();
  double total = 0.0;
  for (Eigen::Index k = 0; k < ev.size(); ++k) total += std::max(ev[k], 0.0);
  if (!(total > 1e-300)) throw std::domain_error("schmidt: degenerate all-zero amplitude");

  SchmidtResult result;
  result.coefficients.reserve(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index k = ev.size() - 1; k >= 0; --k) {  // ascending -> descending
    result.coefficients.push_back(std::max(ev[k], 0.0) / total);
  }
  for (double lambda : result.coefficients) result.purity += lambda * lambda;
  result.schmidt_number = 1.0 / result.purity;
  return result;
}

double gvm_length(double sigma_p, double gv_diff, double gamma) {
  require(sigma_p > 0, "gvm length: sigma_p must be positive");
  require(gamma > 0, "gvm length: gamma must be positive");
  if (gv_diff == 0.0) {
    throw std::domain_error("gvm length: zero group-velocity difference needs infinite length");
  }
  return std::sqrt(8.0) / (std::sqrt(gamma) * sigma_p * std::abs(gv_diff));
}

MarginalSpectra marginal_spectra(const JsaGrid& jsa) {
  jsa.validate();
  const auto wi = trapezoid_weights(jsa.omega_i);
  const auto ws = trapezoid_weights(jsa.omega_s);
  MarginalSpectra out;
  out.omega_i = jsa.omega_i;
  out.omega_s = jsa.omega_s;
  out.density_i.assign(jsa.omega_i.size(), 0.0);
  out.density_s.assign(jsa.omega_s.size(), 0.0);
  for (std::size_t r = 0; r < jsa.omega_i.size(); ++r) {
    for (std::size_t c = 0; c < jsa.omega_s.size(); ++c) {
      const double a2 =
          std::norm(jsa.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
      out.density_i[r] += ws[c] * a2;
      out.density_s[c] += wi[r] * a2;
    }
  }
  return out;
}

void write_jsa_csv(std::ostream& out, const JsaGrid& jsa) {
  jsa.validate();
  out << "# joint spectral amplitude, axes in rad/s\n";
  out << "omega_i,omega_s,re,im\n";
  for (std::size_t r = 0; r < jsa.omega_i.size(); ++r) {
    for (std::size_t c = 0; c < jsa.omega_s.size(); ++c) {
      const auto v = jsa.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      out << format_sci(jsa.omega_i[r]) << "," << format_sci(jsa.omega_s[c]) << ","
          << format_sci(v.real()) << "," << format_sci(v.imag()) << "\n";
    }
  }
}

}  // namespace qpm
