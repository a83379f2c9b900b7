#include <benchmark/benchmark.h>

#include <vector>

#include "qpmkit/biphoton.hpp"
#include "qpmkit/designer.hpp"
#include "qpmkit/dispersion.hpp"
#include "qpmkit/grid.hpp"
#include "qpmkit/interference.hpp"
#include "qpmkit/pmf.hpp"
#include "qpmkit/poling.hpp"
#include "qpmkit/units.hpp"

using namespace qpm;

namespace {

constexpr double kMuP = 2390420770696514.0;  // 788 nm pump

LinearizedGvm bench_dispersion() {
  LinearizedGvm d;
  d.kp_prime = 6.0e-9;
  d.ki_prime = 5.895670788177049e-9;
  d.ks_prime = 6.104329211822951e-9;
  d.mu_p = kMuP;
  d.mu_i = kMuP / 2.0;
  d.mu_s = kMuP / 2.0;
  return d;
}

GaussianPulse bench_pump() {
  return GaussianPulse{kMuP, pump_sigma_from_wavelength_fwhm(788e-9, 0.7e-9)};
}

DesignSpec bench_spec() {
  DesignSpec spec;
  spec.target = TargetShape::gaussian(5.67e-3);
  spec.lambda_qpm = 10.85e-6;
  spec.m_min = 1;
  spec.m_max = 6;
  spec.length_budget = 10.0e-3;
  return spec;
}

const DesignReport& bench_design() {
  static const DesignReport report = design_profile(bench_spec());
  return report;
}

}  // namespace

static void BM_PmfFromProfile(benchmark::State& state) {
  const auto profile = sections_to_profile(bench_design().sections, 10.85e-6);
  const auto grid = standard_dk_grid(bench_spec().target);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pmf_from_profile(profile, grid));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
}
BENCHMARK(BM_PmfFromProfile);

static void BM_PmfFromDomains(benchmark::State& state) {
  const auto seq = sections_to_domains(bench_design().sections, 10.85e-6);
  auto grid = standard_dk_grid(bench_spec().target);
  for (auto& dk : grid) dk += two_pi / 10.85e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pmf_from_domains(seq, grid));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
}
BENCHMARK(BM_PmfFromDomains);

static void BM_BuildJsa(benchmark::State& state) {
  const auto pump = bench_pump();
  const auto disp = bench_dispersion();
  const double gamma = gamma_from_fwhm_match();
  const SincPmf pmf(gvm_length(pump.sigma_p, disp.ks_prime - disp.ki_prime, gamma));
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto axes = default_jsa_axes(pump, disp, pmf.lobe_half_width(), n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_jsa(pump, pmf, disp, axes));
  }
}
BENCHMARK(BM_BuildJsa)->Arg(128)->Arg(256)->Arg(512);

static void BM_SchmidtDecompose(benchmark::State& state) {
  const auto pump = bench_pump();
  const auto disp = bench_dispersion();
  const double gamma = gamma_from_fwhm_match();
  const SincPmf pmf(gvm_length(pump.sigma_p, disp.ks_prime - disp.ki_prime, gamma));
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto jsa = build_jsa(pump, pmf, disp, default_jsa_axes(pump, disp, pmf.lobe_half_width(), n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(schmidt_decompose(jsa));
  }
}
BENCHMARK(BM_SchmidtDecompose)->Arg(128)->Arg(256)->Arg(512);

static void BM_HomPattern(benchmark::State& state) {
  const double length = 10.0e-3;
  const double gv = 2.0865842364590086e-10;
  const SincPmf pmf(length);
  const auto grid = auto_omega_grid(pmf, gv, 0.0);
  const auto curve = cw_omega_curve(pmf, gv, 0.0, 0.0, grid);
  const auto delays = default_delays(gv, length);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hom_pattern_cw(curve, 1.0, 0.0, delays));
  }
}
BENCHMARK(BM_HomPattern);

static void BM_DesignProfile(benchmark::State& state) {
  const auto spec = bench_spec();
  for (auto _ : state) {
    benchmark::DoNotOptimize(design_profile(spec));
  }
}
BENCHMARK(BM_DesignProfile)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
