#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "qpmkit/grid.hpp"
#include "qpmkit/pmf.hpp"
#include "qpmkit/poling.hpp"
#include "qpmkit/units.hpp"

using namespace qpm;
using std::numbers::pi;

namespace {

NonlinearityProfile uniform_profile(double length, double level = 1.0) {
  return NonlinearityProfile{{{-length / 2.0, length / 2.0, level}}};
}

}  // namespace

TEST_CASE("sinc basics") {
  CHECK(sinc(0.0) == doctest::Approx(1.0));
  CHECK(sinc(1e-9) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sinc(pi) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sinc(0.5) == doctest::Approx(std::sin(0.5) / 0.5).epsilon(1e-14));
}

TEST_CASE("uniform crystal gives a real sinc with the documented zeros") {
  const double length = 10.0e-3;
  const auto profile = uniform_profile(length);

  CHECK(std::abs(pmf_point_from_profile(profile, 0.0) - length) < 1e-15);
  for (double dk : {100.0, 500.0, 1234.5, -321.0}) {
    const auto value = pmf_point_from_profile(profile, dk);
    CHECK(value.real() == doctest::Approx(length * sinc(dk * length / 2.0)).epsilon(1e-12));
    CHECK(std::abs(value.imag()) < 1e-12 * length);
  }
  // First zero at dk = 2*pi/L.
  CHECK(std::abs(pmf_point_from_profile(profile, two_pi / length)) < 1e-12 * length);
}

TEST_CASE("dk = 0 integrates the profile area") {
  NonlinearityProfile profile{{{-2.0e-3, -0.5e-3, 1.0},
                               {-0.5e-3, 1.0e-3, -0.25},
                               {1.0e-3, 2.0e-3, 0.5}}};
  const double area = 1.5e-3 * 1.0 + 1.5e-3 * (-0.25) + 1.0e-3 * 0.5;
  CHECK(pmf_point_from_profile(profile, 0.0).real() == doctest::Approx(area).epsilon(1e-12));
}

TEST_CASE("segment contributions add linearly") {
  const ProfileSegment a{-1.0e-3, 0.2e-3, 0.7};
  const ProfileSegment b{0.2e-3, 1.1e-3, -0.4};
  const NonlinearityProfile pa{{a}}, pb{{b}}, both{{a, b}};
  for (double dk : {0.0, 250.0, -900.0, 4.0e3}) {
    const auto sum = pmf_point_from_profile(pa, dk) + pmf_point_from_profile(pb, dk);
    const auto joint = pmf_point_from_profile(both, dk);
    CHECK(std::abs(joint - sum) < 1e-15);
  }

  // Homogeneity in the level.
  const NonlinearityProfile scaled{{{a.z_start, a.z_end, 0.5 * a.level}}};
  for (double dk : {0.0, 777.0}) {
    CHECK(std::abs(pmf_point_from_profile(scaled, dk) -
                   0.5 * pmf_point_from_profile(pa, dk)) < 1e-15);
  }
}

TEST_CASE("translating the profile only rotates the phase") {
  const double shift = 0.37e-3;
  NonlinearityProfile base{{{-1.0e-3, -0.2e-3, 1.0}, {-0.2e-3, 0.8e-3, -0.5}}};
  NonlinearityProfile moved = base;
  for (auto& s : moved.segments) {
    s.z_start += shift;
    s.z_end += shift;
  }
  for (double dk : {150.0, -620.0, 2.5e3}) {
    const auto expected =
        pmf_point_from_profile(base, dk) * std::exp(std::complex<double>(0.0, -dk * shift));
    const auto got = pmf_point_from_profile(moved, dk);
    CHECK(std::abs(got - expected) < 1e-12 * std::abs(expected) + 1e-18);
    CHECK(std::abs(std::abs(got) - std::abs(pmf_point_from_profile(base, dk))) < 1e-15);
  }
}

TEST_CASE("real profiles have conjugate-symmetric spectra") {
  NonlinearityProfile profile{{{0.0, 0.4e-3, 1.0}, {0.4e-3, 1.3e-3, -1.0 / 3.0}}};
  const auto grid = symmetric_linspace(2.0e4, 257);
  const auto curve = pmf_from_profile(profile, grid);
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto mirrored = std::conj(curve.values[n - 1 - i]);
    CHECK(std::abs(curve.values[i] - mirrored) < 1e-12 * std::abs(curve.values[i]) + 1e-18);
  }
}

TEST_CASE("domain transform limits and the two-domain checkpoint") {
  DomainSequence seq;
  seq.coherence_length = 5.0e-6;
  seq.origin = 0.0;
  seq.domains = {{1, 5.0e-6}};
  CHECK(std::abs(pmf_point_from_domains(seq, 0.0) -
                 std::complex<double>(5.0e-6, 0.0)) < 1e-18);

  // One +w / -w pair driven at dk = pi/w: |PMF| = (2/pi) * total length.
  const double w = 5.0e-6;
  seq.domains = {{1, w}, {-1, w}};
  const double dk = pi / w;
  const double got = std::abs(pmf_point_from_domains(seq, dk, DomainPmfForm::ExactIntegral));
  CHECK(got == doctest::Approx((2.0 / pi) * 2.0 * w).epsilon(1e-12));

  // The boundary sum is the exact integral times (-i dk): same magnitude
  // pattern up to the envelope.
  const auto boundary = pmf_point_from_domains(seq, dk, DomainPmfForm::BoundarySum);
  const auto exact = pmf_point_from_domains(seq, dk, DomainPmfForm::ExactIntegral);
  CHECK(std::abs(boundary - exact * std::complex<double>(0.0, -dk)) < 1e-12 * std::abs(boundary));
}

TEST_CASE("domain and profile views of a uniform grating agree near the peak") {
  const double lambda = 10.85e-6;
  const std::vector<PolingSection> sections = {PolingSection::make(1, 256, 1)};
  const auto profile = sections_to_profile(sections, lambda);
  const auto seq = sections_to_domains(sections, lambda);
  const double length = profile.total_length();
  const double dk_qpm = two_pi / lambda;

  // Central lobe of the QPM-shifted response, both curves peak-normalized.
  const auto envelope = symmetric_linspace(two_pi / length, 401);
  std::vector<double> shifted(envelope.size());
  for (std::size_t i = 0; i < envelope.size(); ++i) shifted[i] = envelope[i] + dk_qpm;

  const auto domain_curve = pmf_from_domains(seq, shifted, DomainPmfForm::ExactIntegral,
                                             Normalization::PeakNormalized);
  const auto boundary_curve = pmf_from_domains(seq, shifted, DomainPmfForm::BoundarySum,
                                               Normalization::PeakNormalized);
  const auto mags_a = domain_curve.magnitudes();
  const auto mags_b = boundary_curve.magnitudes();
  double worst = 0.0;
  for (std::size_t i = 0; i < mags_a.size(); ++i) {
    worst = std::max(worst, std::abs(mags_a[i] - mags_b[i]));
  }
  CHECK(worst < 0.01);
}

TEST_CASE("gaussian reference amplitude") {
  const double l_eff = 24.2e-3;
  const double gamma = 0.193;
  const double dk_e = 2.0 / (l_eff * std::sqrt(gamma));  // amplitude falls to 1/e here
  auto grid = linspace(-2.0 * dk_e, 0.9 * dk_e, 16);
  grid.push_back(dk_e);
  const auto curve = pmf_gaussian(grid, l_eff, gamma);
  CHECK(std::abs(pmf_gaussian(linspace(0.0, dk_e, 17), l_eff, gamma).values[0]) ==
        doctest::Approx(1.0));
  CHECK(std::abs(curve.values.back()) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("width matching constants") {
  const double root = sinc_half_amplitude_root();
  CHECK(root == doctest::Approx(1.895494267034).epsilon(1e-6));
  CHECK(sinc(root) == doctest::Approx(0.5).epsilon(1e-10));

  const double gamma = gamma_from_fwhm_match();
  CHECK(gamma == doctest::Approx(0.1929).epsilon(0.0005 / 0.1929));
  CHECK(std::exp(-gamma * root * root) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("matched gaussian shares the sinc amplitude FWHM") {
  const double length = 10.0e-3;
  const auto grid = symmetric_linspace(6.0 * two_pi / length, 4097);
  const auto sinc_curve = pmf_from_profile(uniform_profile(length), grid);
  const auto gauss_curve = pmf_gaussian(grid, length, gamma_from_fwhm_match());
  const auto ms = curve_metrics(sinc_curve);
  const auto mg = curve_metrics(gauss_curve);
  CHECK(mg.fwhm_amplitude == doctest::Approx(ms.fwhm_amplitude).epsilon(1e-4));
}

TEST_CASE("curve metrics reproduce the sinc constants") {
  const double length = 10.0e-3;
  const auto grid = symmetric_linspace(6.0 * two_pi / length, 8193);
  const auto curve = pmf_from_profile(uniform_profile(length), grid);
  const auto m = curve_metrics(curve);

  CHECK(std::abs(m.peak_position) < 1e-2 * two_pi / length);
  CHECK(m.fwhm_amplitude == doctest::Approx(2.0 * 1.895494267034 * 2.0 / length).epsilon(1e-3));
  // Intensity FWHM of sinc^2: 2 * 1.391557 * (2/L).
  CHECK(m.fwhm_intensity == doctest::Approx(4.0 * 1.39155737825151 / length).epsilon(1e-3));
  CHECK(m.first_sidelobe_intensity == doctest::Approx(0.0472).epsilon(0.002 / 0.0472));

  const auto gauss = pmf_gaussian(grid, length, gamma_from_fwhm_match());
  CHECK(curve_metrics(gauss).first_sidelobe_intensity == doctest::Approx(0.0));

  // A window narrower than the half maximum cannot locate the crossings.
  const auto tight = symmetric_linspace(0.1 * two_pi / length, 33);
  const auto clipped = pmf_from_profile(uniform_profile(length), tight);
  CHECK_THROWS_AS(curve_metrics(clipped), std::domain_error);
}

TEST_CASE("sampled gaussian profile transforms back to the gaussian spectrum") {
  // chi(z) = exp(-z^2/(gamma*l_eff^2)) sampled as 1024 slabs out to 4 sigma;
  // its transform must match the closed-form spectrum to 1e-3 of the peak.
  const double l_eff = 10.0e-3;
  const double gamma = gamma_from_fwhm_match();
  const double sigma_z = l_eff * std::sqrt(gamma / 2.0);
  const double half = 4.0 * sigma_z;
  const int slabs = 1024;

  NonlinearityProfile profile;
  for (int i = 0; i < slabs; ++i) {
    const double z0 = -half + 2.0 * half * i / slabs;
    const double z1 = -half + 2.0 * half * (i + 1) / slabs;
    const double zc = 0.5 * (z0 + z1);
    profile.segments.push_back({z0, z1, std::exp(-zc * zc / (gamma * l_eff * l_eff))});
  }
  profile.validate();

  const auto grid = symmetric_linspace(3.0 * two_pi / l_eff, 1001);
  const auto sampled = pmf_from_profile(profile, grid, Normalization::PeakNormalized);
  const auto reference = pmf_gaussian(grid, l_eff, gamma);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    worst = std::max(worst, std::abs(std::abs(sampled.values[i]) - std::abs(reference.values[i])));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("curve validation and csv export") {
  SpectralCurve bad;
  bad.axis = {0.0, 1.0};
  bad.values = {{1.0, 0.0}, {0.5, 0.0}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // fewer than 16 samples

  const auto grid = linspace(-1000.0, 1000.0, 64);
  const auto curve = pmf_from_profile(uniform_profile(1.0e-3), grid);
  CHECK_NOTHROW(curve.validate());

  const auto normalized = curve.peak_normalized();
  double peak = 0.0;
  for (const auto& v : normalized.values) peak = std::max(peak, std::abs(v));
  CHECK(peak == doctest::Approx(1.0).epsilon(1e-12));

  std::ostringstream a, b;
  write_curve_csv(a, curve);
  write_curve_csv(b, curve);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("delta_k") != std::string::npos);
}
