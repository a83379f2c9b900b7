#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "qpmkit/grid.hpp"
#include "qpmkit/pmf.hpp"
#include "qpmkit/poling.hpp"
#include "qpmkit/units.hpp"

using namespace qpm;

TEST_CASE("canonical duty cycles") {
  CHECK(PolingSection::canonical_duty(1) == doctest::Approx(0.5));
  CHECK(PolingSection::canonical_duty(3) == doctest::Approx(0.5));
  CHECK(PolingSection::canonical_duty(15) == doctest::Approx(0.5));
  CHECK(PolingSection::canonical_duty(2) == doctest::Approx(0.25));
  CHECK(PolingSection::canonical_duty(4) == doctest::Approx(0.375));
  CHECK(PolingSection::canonical_duty(6) == doctest::Approx(5.0 / 12.0));
  CHECK(PolingSection::canonical_duty(16) == doctest::Approx(15.0 / 32.0));
}

TEST_CASE("section validation") {
  CHECK_THROWS_AS(PolingSection::make(0, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(PolingSection::make(1, 1, 1), std::invalid_argument);   // below one period
  CHECK_THROWS_AS(PolingSection::make(2, 3, 1), std::invalid_argument);   // even order pairs up
  CHECK_THROWS_AS(PolingSection::make(1, 4, 0), std::invalid_argument);   // polarity is +-1
  CHECK_NOTHROW(PolingSection::make(1, 2, -1));
  CHECK_NOTHROW(PolingSection::make(6, 2, 1));

  auto s = PolingSection::make(3, 4, 1);
  s.duty_cycle = 0.3;  // only the canonical duty is fabricable here
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("section width and level") {
  const double lambda = 10.0e-6;
  const auto a = PolingSection::make(1, 4, 1);
  CHECK(a.width(lambda) == doctest::Approx(20.0e-6).epsilon(1e-12));
  CHECK(a.level() == doctest::Approx(1.0));

  const auto b = PolingSection::make(3, 2, -1);
  CHECK(b.width(lambda) == doctest::Approx(30.0e-6).epsilon(1e-12));
  CHECK(b.level() == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("sections to profile: levels, widths, centering") {
  const double lambda = 10.0e-6;
  std::vector<PolingSection> sections = {PolingSection::make(1, 4, 1)};
  auto profile = sections_to_profile(sections, lambda);
  REQUIRE(profile.segments.size() == 1);
  CHECK(profile.segments[0].level == doctest::Approx(1.0));
  CHECK(profile.total_length() == doctest::Approx(20.0e-6).epsilon(1e-12));
  CHECK(profile.z_min() == doctest::Approx(-10.0e-6).epsilon(1e-12));
  CHECK(profile.z_max() == doctest::Approx(10.0e-6).epsilon(1e-12));

  sections.push_back(PolingSection::make(3, 2, -1));
  profile = sections_to_profile(sections, lambda, 0.0);  // explicit left edge
  REQUIRE(profile.segments.size() == 2);
  CHECK(profile.segments[0].z_start == doctest::Approx(0.0));
  CHECK(profile.segments[0].z_end == doctest::Approx(20.0e-6).epsilon(1e-12));
  CHECK(profile.segments[1].z_end == doctest::Approx(50.0e-6).epsilon(1e-12));
  CHECK(profile.segments[1].level == doctest::Approx(-1.0 / 3.0));
  CHECK_NOTHROW(profile.validate());

  const std::vector<PolingSection> empty;
  CHECK_THROWS_AS(sections_to_profile(empty, lambda), std::invalid_argument);
}

TEST_CASE("sections to domains: first-order section alternates every half period") {
  const double lambda = 10.0e-6;
  const std::vector<PolingSection> sections = {PolingSection::make(1, 6, 1)};
  const auto seq = sections_to_domains(sections, lambda);
  REQUIRE(seq.domains.size() == 6);
  CHECK(seq.coherence_length == doctest::Approx(5.0e-6));
  int sign = 1;
  for (const auto& d : seq.domains) {
    CHECK(d.sign == sign);
    CHECK(d.width == doctest::Approx(5.0e-6).epsilon(1e-12));
    sign = -sign;
  }
  CHECK(seq.total_length() == doctest::Approx(30.0e-6).epsilon(1e-12));
  CHECK_NOTHROW(seq.validate());
}

TEST_CASE("sections to domains: odd order stretches runs, polarity sets the first sign") {
  const double lambda = 10.0e-6;
  const std::vector<PolingSection> sections = {PolingSection::make(3, 4, -1)};
  const auto seq = sections_to_domains(sections, lambda);
  REQUIRE(seq.domains.size() == 4);
  int sign = -1;
  for (const auto& d : seq.domains) {
    CHECK(d.sign == sign);
    CHECK(d.width == doctest::Approx(15.0e-6).epsilon(1e-12));
    sign = -sign;
  }
  CHECK(seq.total_length() == doctest::Approx(60.0e-6).epsilon(1e-12));
}

TEST_CASE("sections to domains: even order alternates short and long runs") {
  // Order 6 tiles as 5 and 7 coherence lengths; the duty cycle of the pair
  // is 5/12 of the 6-period span.
  const double lambda = 10.0e-6;
  const std::vector<PolingSection> sections = {PolingSection::make(6, 2, 1)};
  const auto seq = sections_to_domains(sections, lambda);
  REQUIRE(seq.domains.size() == 2);
  CHECK(seq.domains[0].sign == 1);
  CHECK(seq.domains[0].width == doctest::Approx(25.0e-6).epsilon(1e-12));
  CHECK(seq.domains[1].sign == -1);
  CHECK(seq.domains[1].width == doctest::Approx(35.0e-6).epsilon(1e-12));
  const double duty = seq.domains[0].width / seq.total_length();
  CHECK(duty == doctest::Approx(5.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("profile and domain views agree on geometry") {
  const double lambda = 10.85e-6;
  std::mt19937 rng(77001u);
  std::uniform_int_distribution<int> order_dist(1, 8);
  std::uniform_int_distribution<int> pair_dist(1, 20);
  std::uniform_int_distribution<int> pol_dist(0, 1);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<PolingSection> sections;
    const int count = 1 + trial % 5;
    for (int i = 0; i < count; ++i) {
      const int order = order_dist(rng);
      int n = 2 * pair_dist(rng);  // even counts satisfy every order
      sections.push_back(PolingSection::make(order, n, pol_dist(rng) ? 1 : -1));
    }
    const auto profile = sections_to_profile(sections, lambda);
    const auto seq = sections_to_domains(sections, lambda);
    CHECK(profile.total_length() == doctest::Approx(seq.total_length()).epsilon(1e-12));
    CHECK(profile.z_min() == doctest::Approx(seq.origin).epsilon(1e-9));

    // Every domain is an integer number of coherence lengths.
    const double lc = lambda / 2.0;
    for (const auto& d : seq.domains) {
      const double cells = d.width / lc;
      CHECK(std::abs(cells - std::round(cells)) < 1e-9);
    }
  }
}

TEST_CASE("order-m sections concentrate 2/(pi m) of the drive at the first-order peak") {
  const double lambda = 10.0e-6;
  const double dk_peak = two_pi / lambda;
  for (int order : {1, 2, 3, 6}) {
    const std::vector<PolingSection> sections = {PolingSection::make(order, 16, 1)};
    const auto seq = sections_to_domains(sections, lambda);
    const double length = seq.total_length();
    const double got =
        std::abs(pmf_point_from_domains(seq, dk_peak, DomainPmfForm::ExactIntegral));
    const double expected = (2.0 / std::numbers::pi) * length / order;
    CHECK(got == doctest::Approx(expected).epsilon(0.05));
  }
}

TEST_CASE("yield ratio: identical profiles give 1, halving length halves the yield") {
  const double length = 2.0e-3;
  const NonlinearityProfile full{{{-length / 2, length / 2, 1.0}}};
  const NonlinearityProfile half{{{-length / 4, length / 4, 1.0}}};

  // Wide grid so the sinc tails contribute negligibly.
  const auto grid = symmetric_linspace(40.0 * two_pi / length, 16384);
  CHECK(profile_yield_ratio(full, full, grid) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(profile_yield_ratio(half, full, grid) == doctest::Approx(0.5).epsilon(1e-2));

  // Quadratic in the level: scaling chi by 1/2 scales the yield by 1/4.
  const NonlinearityProfile weak{{{-length / 2, length / 2, 0.5}}};
  CHECK(profile_yield_ratio(weak, full, grid) == doctest::Approx(0.25).epsilon(1e-12));

  const NonlinearityProfile dead{{{-length / 2, length / 2, 0.0}}};
  CHECK_THROWS_AS(profile_yield_ratio(full, dead, grid), std::domain_error);
}

TEST_CASE("section files round-trip") {
  SectionFile file;
  file.lambda_qpm = 10.85e-6;
  file.sections = {PolingSection::make(1, 40, 1), PolingSection::make(2, 8, -1),
                   PolingSection::make(6, 24, 1)};

  std::ostringstream out;
  save_sections(out, file);
  std::istringstream in(out.str());
  const auto back = load_sections(in, "roundtrip");

  CHECK(back.lambda_qpm == doctest::Approx(file.lambda_qpm).epsilon(1e-10));
  REQUIRE(back.sections.size() == file.sections.size());
  for (std::size_t i = 0; i < file.sections.size(); ++i) {
    CHECK(back.sections[i].order == file.sections[i].order);
    CHECK(back.sections[i].num_domains == file.sections[i].num_domains);
    CHECK(back.sections[i].polarity == file.sections[i].polarity);
    CHECK(back.sections[i].duty_cycle ==
          doctest::Approx(file.sections[i].duty_cycle).epsilon(1e-10));
  }

  // Saving twice produces identical bytes.
  std::ostringstream again;
  save_sections(again, file);
  CHECK(again.str() == out.str());
}

TEST_CASE("section file parse errors carry line numbers") {
  auto load = [](const std::string& text) {
    std::istringstream in(text);
    return load_sections(in, "test");
  };

  CHECK_THROWS_AS(load("section 1 4 0.5 +1\n"), std::invalid_argument);  // missing lambda
  CHECK_THROWS_AS(load("lambda_qpm 1e-5\nlambda_qpm 1e-5\nsection 1 4 0.5 +1\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(load("lambda_qpm 1e-5\nbogus 1 2\n"), std::invalid_argument);
  CHECK_THROWS_AS(load("lambda_qpm 1e-5\nsection 1 4 0.5 +1 extra\n"), std::invalid_argument);
  CHECK_THROWS_AS(load("lambda_qpm 1e-5\n"), std::invalid_argument);  // no sections

  try {
    load("lambda_qpm 1e-5\n# comment\nsection 1 4 0.5 nope\n");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    CHECK(what.find("line 3") != std::string::npos);
  }

  // Comments and blank lines are fine.
  CHECK_NOTHROW(load("# header\nlambda_qpm 1e-5\n\nsection 1 4 0.5 +1  # tail\n"));
}
