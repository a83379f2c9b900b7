#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "qpmkit/designer.hpp"
#include "qpmkit/grid.hpp"
#include "qpmkit/pmf.hpp"
#include "qpmkit/poling.hpp"
#include "qpmkit/units.hpp"

using namespace qpm;
using std::numbers::pi;

namespace {

DesignSpec paper_style_10mm() {
  DesignSpec spec;
  spec.target = TargetShape::gaussian(5.67e-3);
  spec.lambda_qpm = 10.85e-6;
  spec.m_min = 1;
  spec.m_max = 6;
  spec.length_budget = 10.0e-3;
  return spec;
}

}  // namespace

TEST_CASE("target shapes evaluate both representations") {
  const auto g = TargetShape::gaussian(24.2e-3);
  CHECK(g.value(0.0) == doctest::Approx(1.0));
  const double gamma = g.gamma_or_default();
  CHECK(g.value(24.2e-3 * std::sqrt(gamma)) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(g.pmf_value(0.0) == doctest::Approx(1.0));
  const double dk_e = 2.0 / (24.2e-3 * std::sqrt(gamma));
  CHECK(g.pmf_value(dk_e) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  const auto t = TargetShape::triangle(2000.0);
  CHECK(t.pmf_value(0.0) == doctest::Approx(1.0));
  CHECK(t.pmf_value(500.0) == doctest::Approx(0.5));
  CHECK(t.pmf_value(1000.0) == doctest::Approx(0.0));
  CHECK(t.pmf_value(1500.0) == doctest::Approx(0.0));

  // Tophat in dk space is a signed sinc in z: sign changes at multiples of
  // pi / (half width).
  const auto h = TargetShape::tophat(2000.0);
  CHECK(h.pmf_value(999.0) == doctest::Approx(1.0));
  CHECK(h.pmf_value(1001.0) == doctest::Approx(0.0));
  const double node = pi / 1000.0;
  CHECK(h.value(0.999 * node) > 0.0);
  CHECK(h.value(1.001 * node) < 0.0);
  CHECK(h.value(1.999 * node) < 0.0);
  CHECK(h.value(2.001 * node) > 0.0);

  const auto u = TargetShape::uniform(10.0e-3);
  CHECK(u.value(4.9e-3) == doctest::Approx(1.0));
  CHECK(u.value(5.1e-3) == doctest::Approx(0.0));
  CHECK(u.pmf_value(two_pi / 10.0e-3) == doctest::Approx(0.0).epsilon(1e-10));

  CHECK_THROWS_AS(TargetShape::gaussian(0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(TargetShape::tophat(-1.0).validate(), std::invalid_argument);
}

TEST_CASE("standard metric grid covers six lobes symmetrically") {
  const auto target = TargetShape::uniform(10.0e-3);
  const auto grid = standard_dk_grid(target);
  REQUIRE(grid.size() == 4096);
  const double lobe = target.pmf_lobe_half_width();
  CHECK(lobe == doctest::Approx(two_pi / 10.0e-3).epsilon(1e-12));
  CHECK(grid.front() == doctest::Approx(-6.0 * lobe).epsilon(1e-12));
  CHECK(grid.back() == doctest::Approx(6.0 * lobe).epsilon(1e-12));
  CHECK(std::is_sorted(grid.begin(), grid.end()));
}

TEST_CASE("design spec validation") {
  auto spec = paper_style_10mm();
  CHECK_NOTHROW(spec.validate());

  auto bad = spec;
  bad.m_min = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.m_max = 17;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.m_min = 4;
  bad.m_max = 2;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = spec;
  bad.lambda_qpm = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  // A budget that cannot hold a fabricable center section is rejected.
  auto tiny = spec;
  tiny.length_budget = 1.9 * tiny.lambda_qpm;
  CHECK_THROWS_AS(design_profile(tiny), std::domain_error);

  // Tophat targets need negative sections.
  auto hat = spec;
  hat.target = TargetShape::tophat(2.0 * two_pi / 5.67e-3);
  hat.allow_negative = false;
  CHECK_THROWS_AS(design_profile(hat), std::domain_error);
}

TEST_CASE("degenerate uniform target quantizes to a single full-strength section") {
  DesignSpec spec;
  const double lambda = 10.0e-6;
  const double length = 200 * lambda;
  spec.target = TargetShape::uniform(length);
  spec.lambda_qpm = lambda;
  spec.m_min = 1;
  spec.m_max = 1;
  spec.length_budget = length;

  const auto report = design_profile(spec);
  REQUIRE(report.sections.size() == 1);
  CHECK(report.sections[0].order == 1);
  CHECK(report.sections[0].polarity == 1);
  CHECK(report.total_length == doctest::Approx(length).epsilon(1e-9));
  // The realized PMF is the target itself; only grid discretization remains.
  CHECK(report.pmf_l2_error < 1e-3);

  const auto echo = evaluate_design(report.sections, spec.target, lambda);
  CHECK(echo.yield_vs_uniform == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gaussian design stays within budget and uses admissible symmetric sections") {
  const auto spec = paper_style_10mm();
  const auto report = design_profile(spec);

  CHECK(report.total_length <= spec.length_budget * (1.0 + 1e-12));
  REQUIRE(report.sections.size() >= 3);

  for (const auto& s : report.sections) {
    CHECK_NOTHROW(s.validate());
    CHECK(s.order >= spec.m_min);
    CHECK(s.order <= spec.m_max);
    CHECK(s.num_domains >= 4);  // at least two full periods
    if (s.order % 2 == 0) CHECK(s.num_domains % 2 == 0);
    CHECK(s.duty_cycle == doctest::Approx(PolingSection::canonical_duty(s.order)));
    CHECK(s.polarity == 1);  // gaussian target never goes negative
  }

  // Symmetric target, symmetric layout.
  const std::size_t n = report.sections.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    const auto& a = report.sections[i];
    const auto& b = report.sections[n - 1 - i];
    CHECK(a.order == b.order);
    CHECK(a.num_domains == b.num_domains);
    CHECK(a.polarity == b.polarity);
  }

  // Strongest drive in the middle: orders decrease toward the center.
  const auto& mid = report.sections[n / 2];
  CHECK(mid.order == 1);
  for (std::size_t i = 0; i + 1 < n / 2; ++i) {
    CHECK(report.sections[i].order >= report.sections[i + 1].order);
  }
}

TEST_CASE("refinement never worsens the objective") {
  const auto report = design_profile(paper_style_10mm());
  CHECK(report.pmf_l2_error <= report.pmf_l2_error_before_refine + 1e-15);
  CHECK(report.refinement_moves >= 0);

  auto wide = paper_style_10mm();
  wide.target = TargetShape::gaussian(24.2e-3);
  wide.m_min = 2;
  wide.m_max = 16;
  wide.length_budget = 60.0e-3;
  const auto wide_report = design_profile(wide);
  CHECK(wide_report.pmf_l2_error <= wide_report.pmf_l2_error_before_refine + 1e-15);
}

TEST_CASE("apodized design suppresses the sinc sidelobes") {
  const auto report = design_profile(paper_style_10mm());
  CHECK(report.first_sidelobe_intensity <= 0.005);
  CHECK(report.first_sidelobe_intensity < 0.1 * 0.0472);
}

TEST_CASE("tophat design emits negative sections") {
  DesignSpec spec;
  spec.target = TargetShape::tophat(2.0 * two_pi / 5.67e-3);
  spec.lambda_qpm = 10.85e-6;
  spec.m_min = 1;
  spec.m_max = 6;
  spec.length_budget = 10.0e-3;
  spec.allow_negative = true;

  const auto report = design_profile(spec);
  const bool has_negative =
      std::any_of(report.sections.begin(), report.sections.end(),
                  [](const PolingSection& s) { return s.polarity < 0; });
  CHECK(has_negative);
}

TEST_CASE("evaluating a plain grating against its own sinc target is exact") {
  const double lambda = 10.85e-6;
  const int periods = 461;  // about 5 mm
  const std::vector<PolingSection> sections = {PolingSection::make(1, 2 * periods, 1)};
  const double length = periods * lambda;
  const auto report = evaluate_design(sections, TargetShape::uniform(length), lambda);
  CHECK(report.pmf_l2_error < 1e-3);
  CHECK(report.yield_vs_uniform == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(report.first_sidelobe_intensity == doctest::Approx(0.0472).epsilon(0.002 / 0.0472));
}

TEST_CASE("designed crystal trades yield for purity against the same-length uniform") {
  const auto spec = paper_style_10mm();
  const auto report = design_profile(spec);

  // Against a uniform crystal of the same (designed) total length.
  CHECK(report.yield_vs_uniform > 0.0);
  CHECK(report.yield_vs_uniform < 1.0);

  // Against the full 10 mm uniform crystal the budget allows.
  const auto designed_profile = sections_to_profile(report.sections, spec.lambda_qpm);
  const NonlinearityProfile uniform_10mm{{{-5.0e-3, 5.0e-3, 1.0}}};
  const auto grid = standard_dk_grid(spec.target);
  const double yield = profile_yield_ratio(designed_profile, uniform_10mm, grid);
  CHECK(yield >= 0.30);
  CHECK(yield <= 0.40);
}
