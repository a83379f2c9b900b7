#include "pipelines.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <memory>
#include <stdexcept>

#include "qpmkit/biphoton.hpp"
#include "qpmkit/designer.hpp"
#include "qpmkit/dispersion.hpp"
#include "qpmkit/format.hpp"
#include "qpmkit/grid.hpp"
#include "qpmkit/interference.hpp"
#include "qpmkit/pmf.hpp"
#include "qpmkit/poling.hpp"
#include "qpmkit/units.hpp"

namespace qpm::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& message) { throw std::invalid_argument(message); }

void write_text_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path.string());
  out << body;
}

void write_json(const std::filesystem::path& path, const ordered_json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

// All floating-point JSON fields are emitted as fixed-format strings so that
// identical configs produce byte-identical artifacts.
std::string num(double v) { return format_sci(v); }

// ---------------------------------------------------------------------------
// Config -> domain objects

TargetShape target_from_config(Config& config) {
  const std::string kind = config.get_string("target");
  if (kind == "gaussian") {
    return TargetShape::gaussian(config.get_length("target_l_eff"),
                                 config.get_number_or("target_gamma", 0.0));
  }
  if (kind == "triangle") {
    return TargetShape::triangle(
        parse_quantity(config.get_string("target_width"), Dimension::Wavenumber,
                       "config key 'target_width'"));
  }
  if (kind == "tophat") {
    return TargetShape::tophat(parse_quantity(config.get_string("target_width"),
                                              Dimension::Wavenumber,
                                              "config key 'target_width'"));
  }
  if (kind == "uniform") {
    return TargetShape::uniform(config.get_length("target_length"));
  }
  fail("config key 'target': unknown shape '" + kind + "'");
}

const char* target_name(TargetKind kind) {
  switch (kind) {
    case TargetKind::Gaussian: return "gaussian";
    case TargetKind::Triangle: return "triangle";
    case TargetKind::Tophat: return "tophat";
    case TargetKind::Uniform: return "uniform";
  }
  return "?";
}

// A crystal reference: "sections <path>", "uniform <length>", or
// "gaussian <l_eff> [gamma]" (reference PMF without a physical layout).
struct Crystal {
  std::optional<SectionFile> sections;
  double uniform_length = 0.0;
  double gaussian_l_eff = 0.0;
  double gaussian_gamma = 0.0;

  bool is_sections() const { return sections.has_value(); }
  bool is_uniform() const { return uniform_length > 0.0; }
  bool is_gaussian() const { return gaussian_l_eff > 0.0; }

  NonlinearityProfile profile() const {
    if (is_sections()) return sections_to_profile(sections->sections, sections->lambda_qpm);
    if (is_uniform()) {
      NonlinearityProfile p;
      p.segments.push_back({-0.5 * uniform_length, 0.5 * uniform_length, 1.0});
      return p;
    }
    fail("crystal: a gaussian reference has no nonlinearity profile");
  }

  std::unique_ptr<PmfModel> pmf() const {
    if (is_sections()) return std::make_unique<ProfilePmf>(profile());
    if (is_uniform()) return std::make_unique<SincPmf>(uniform_length);
    const double gamma = gaussian_gamma > 0 ? gaussian_gamma : gamma_from_fwhm_match();
    return std::make_unique<GaussianPmf>(gaussian_l_eff, gamma);
  }

  // Length scale used for delay windows and evaluation grids.
  double length() const {
    if (is_sections()) return profile().total_length();
    if (is_uniform()) return uniform_length;
    return gaussian_l_eff;
  }
};

Crystal crystal_from_config(Config& config, const std::string& key) {
  const auto tokens = split_tokens(config.get_string(key));
  const std::string context = "config key '" + key + "'";
  if (tokens.empty()) fail(context + ": empty crystal reference");
  Crystal crystal;
  if (tokens[0] == "sections") {
    if (tokens.size() != 2) fail(context + ": expected 'sections <path>'");
    crystal.sections = load_sections_file(tokens[1]);
    return crystal;
  }
  if (tokens[0] == "uniform") {
    if (tokens.size() != 3) fail(context + ": expected 'uniform <length> <unit>'");
    crystal.uniform_length =
        parse_quantity(tokens[1] + " " + tokens[2], Dimension::Length, context);
    if (!(crystal.uniform_length > 0)) fail(context + ": length must be positive");
    return crystal;
  }
  if (tokens[0] == "gaussian") {
    if (tokens.size() != 3 && tokens.size() != 4) {
      fail(context + ": expected 'gaussian <l_eff> <unit> [gamma]'");
    }
    crystal.gaussian_l_eff =
        parse_quantity(tokens[1] + " " + tokens[2], Dimension::Length, context);
    if (tokens.size() == 4) {
      crystal.gaussian_gamma = parse_quantity(tokens[3], Dimension::Scalar, context);
    }
    if (!(crystal.gaussian_l_eff > 0)) fail(context + ": l_eff must be positive");
    return crystal;
  }
  fail(context + ": unknown crystal kind '" + tokens[0] + "'");
}

double mu_p_from_config(Config& config) {
  if (config.has("mu_p")) return config.get_frequency("mu_p");
  return omega_from_vacuum_wavelength(config.get_length("pump_center"));
}

LinearizedGvm gvm_from_config(Config& config) {
  LinearizedGvm lin;
  lin.mu_p = mu_p_from_config(config);
  lin.mu_i = config.get_frequency_or("mu_i", 0.5 * lin.mu_p);
  lin.mu_s = config.get_frequency_or("mu_s", lin.mu_p - lin.mu_i);
  lin.kp_prime = config.get_slope("kp_prime");
  lin.ki_prime = config.get_slope("ki_prime");
  lin.ks_prime = config.get_slope("ks_prime");
  lin.delta_k0 = config.get_wavenumber_or("delta_k0", 0.0);
  lin.validate();
  return lin;
}

DispersionModel dispersion_from_config(Config& config) {
  const std::string kind = config.get_string_or("dispersion", "linearized");
  if (kind == "linearized") return gvm_from_config(config);
  const auto tokens = split_tokens(kind);
  if (tokens.size() == 4 && tokens[0] == "table") {
    TabulatedDispersion tab{WavevectorTable::from_file(tokens[1]),
                            WavevectorTable::from_file(tokens[2]),
                            WavevectorTable::from_file(tokens[3]),
                            0.0, 0.0, 0.0};
    tab.mu_p = mu_p_from_config(config);
    tab.mu_i = config.get_frequency_or("mu_i", 0.5 * tab.mu_p);
    tab.mu_s = config.get_frequency_or("mu_s", tab.mu_p - tab.mu_i);
    tab.validate();
    return tab;
  }
  fail("config key 'dispersion': expected 'linearized' or 'table <pump> <idler> <signal>'");
}

GaussianPulse pump_from_config(Config& config, double mu_p) {
  GaussianPulse pump;
  pump.mu_p = mu_p;
  if (config.has("pump_sigma")) {
    pump.sigma_p = config.get_frequency("pump_sigma");
  } else {
    const double lambda0 = vacuum_wavelength_from_omega(mu_p);
    pump.sigma_p = pump_sigma_from_wavelength_fwhm(lambda0,
                                                   config.get_length("pump_bandwidth_fwhm"));
  }
  pump.validate();
  return pump;
}

// ---------------------------------------------------------------------------
// Shared pieces

void write_csv_file(const std::filesystem::path& path, const SpectralCurve& curve) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path.string());
  write_curve_csv(out, curve);
}

void write_pattern_file(const std::filesystem::path& path, const InterferencePattern& pattern) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path.string());
  write_pattern_csv(out, pattern);
}

ordered_json fit_json(const DipFit& fit) {
  ordered_json j;
  j["visibility"] = num(fit.visibility);
  j["width"] = num(fit.width);
  j["sse"] = num(fit.sse);
  return j;
}

struct HomSetup {
  std::unique_ptr<PmfModel> pmf;
  double gv_delta = 0.0;
  double delta_k0 = 0.0;
  double visibility = 1.0;
  std::vector<double> delays;
  std::size_t points_per_lobe = 8;
};

HomSetup hom_setup_from_config(Config& config) {
  HomSetup setup;
  const Crystal crystal = crystal_from_config(config, "crystal");
  setup.pmf = crystal.pmf();
  const DispersionModel dispersion = dispersion_from_config(config);
  setup.gv_delta = group_velocity_difference(dispersion);
  if (const auto* lin = std::get_if<LinearizedGvm>(&dispersion)) setup.delta_k0 = lin->delta_k0;
  setup.visibility = config.get_number_or("visibility", 1.0);
  setup.points_per_lobe = static_cast<std::size_t>(config.get_int_or("points_per_lobe", 8));
  setup.delays = default_delays(setup.gv_delta, crystal.length(),
                                static_cast<std::size_t>(config.get_int_or("delay_points", 801)),
                                config.get_number_or("delay_span_factor", 2.0));
  return setup;
}

// ---------------------------------------------------------------------------
// Subcommands

}  // namespace

void run_design(Config& config, const std::filesystem::path& out_dir) {
  DesignSpec spec;
  spec.target = target_from_config(config);
  spec.lambda_qpm = config.get_length("lambda_qpm");
  spec.m_min = static_cast<int>(config.get_int_or("m_min", 1));
  spec.m_max = static_cast<int>(config.get_int_or("m_max", 6));
  spec.length_budget = config.get_length("length_budget");
  spec.allow_negative =
      config.get_bool_or("allow_negative", spec.target.kind == TargetKind::Tophat);
  spec.validate();
  config.finish();

  const DesignReport report = design_profile(spec);

  std::ofstream sections_out(out_dir / "sections.txt");
  if (!sections_out) fail("cannot write " + (out_dir / "sections.txt").string());
  save_sections(sections_out, SectionFile{spec.lambda_qpm, report.sections});

  ordered_json j;
  j["target"] = target_name(spec.target.kind);
  j["target_width"] = num(spec.target.width);
  j["lambda_qpm"] = num(spec.lambda_qpm);
  j["m_min"] = spec.m_min;
  j["m_max"] = spec.m_max;
  j["length_budget"] = num(spec.length_budget);
  j["allow_negative"] = spec.allow_negative;
  j["section_count"] = report.sections.size();
  j["total_length"] = num(report.total_length);
  j["pmf_l2_error"] = num(report.pmf_l2_error);
  j["pmf_l2_error_before_refine"] = num(report.pmf_l2_error_before_refine);
  j["first_sidelobe_intensity"] = num(report.first_sidelobe_intensity);
  j["yield_vs_uniform"] = num(report.yield_vs_uniform);
  j["refinement_moves"] = report.refinement_moves;
  write_json(out_dir / "design_report.json", j);
}

void run_pmf(Config& config, const std::filesystem::path& out_dir) {
  const Crystal crystal = crystal_from_config(config, "crystal");
  SectionFile file;
  if (crystal.is_sections()) {
    file = *crystal.sections;
  } else if (crystal.is_uniform()) {
    // Uniform crystals are realized as a single first-order section.
    file.lambda_qpm = config.get_length("lambda_qpm");
    const int periods = static_cast<int>(std::llround(crystal.uniform_length / file.lambda_qpm));
    if (periods < 1) fail("pmf: uniform crystal shorter than one poling period");
    file.sections.push_back(PolingSection::make(1, 2 * periods, 1));
  } else {
    fail("pmf: crystal must be 'sections <path>' or 'uniform <length>'");
  }
  const std::size_t points = static_cast<std::size_t>(config.get_int_or("pmf_points", 2048));
  const double lobes = config.get_number_or("pmf_lobes", 6.0);
  config.finish();

  const auto profile = sections_to_profile(file.sections, file.lambda_qpm);
  const double lobe_half_width = two_pi / profile.total_length();
  const auto dk_grid = symmetric_linspace(lobes * lobe_half_width, points);

  const auto profile_curve = pmf_from_profile(profile, dk_grid, Normalization::PeakNormalized);

  // The domain pattern concentrates its response around the QPM wavenumber
  // 2*pi/lambda; sampling there and plotting against the offset axis makes the
  // two models directly comparable.
  const auto domains = sections_to_domains(file.sections, file.lambda_qpm);
  std::vector<double> dk_shifted(dk_grid);
  for (auto& dk : dk_shifted) dk += two_pi / file.lambda_qpm;
  auto domain_curve = pmf_from_domains(domains, dk_shifted, DomainPmfForm::ExactIntegral,
                                       Normalization::PeakNormalized);
  domain_curve.axis = dk_grid;

  write_csv_file(out_dir / "pmf_profile.csv", profile_curve);
  write_csv_file(out_dir / "pmf_domains.csv", domain_curve);

  const CurveMetrics metrics = curve_metrics(profile_curve);
  double agreement = 0.0;
  for (std::size_t i = 0; i < dk_grid.size(); ++i) {
    if (std::abs(dk_grid[i]) > metrics.fwhm_amplitude) continue;
    agreement = std::max(agreement, std::abs(std::abs(profile_curve.values[i]) -
                                             std::abs(domain_curve.values[i])));
  }

  ordered_json j;
  j["lambda_qpm"] = num(file.lambda_qpm);
  j["total_length"] = num(profile.total_length());
  j["peak_position"] = num(metrics.peak_position);
  j["fwhm_amplitude"] = num(metrics.fwhm_amplitude);
  j["fwhm_intensity"] = num(metrics.fwhm_intensity);
  j["first_sidelobe_intensity"] = num(metrics.first_sidelobe_intensity);
  j["domain_agreement_max_abs_dev"] = num(agreement);
  write_json(out_dir / "pmf_metrics.json", j);
}

void run_hom(Config& config, const std::filesystem::path& out_dir) {
  HomSetup setup = hom_setup_from_config(config);
  const double detuning = config.get_frequency_or("detuning", 0.0);
  config.finish();

  const auto omega_grid =
      auto_omega_grid(*setup.pmf, setup.gv_delta, detuning, setup.points_per_lobe);
  const auto curve =
      cw_omega_curve(*setup.pmf, setup.gv_delta, setup.delta_k0, detuning, omega_grid);
  const auto pattern = hom_pattern_cw(curve, setup.visibility, detuning, setup.delays);
  pattern.validate();

  write_pattern_file(out_dir / "hom_pattern.csv", pattern);

  ordered_json j;
  j["visibility"] = num(setup.visibility);
  j["detuning"] = num(detuning);
  j["min_p"] = num(pattern.min_p());
  j["max_p"] = num(pattern.max_p());
  j["triangle_fit"] = fit_json(fit_triangle_dip(pattern));
  j["gaussian_fit"] = fit_json(fit_gaussian_dip(pattern));
  write_json(out_dir / "hom_summary.json", j);
}

void run_beat(Config& config, const std::filesystem::path& out_dir) {
  HomSetup setup = hom_setup_from_config(config);
  const std::size_t count = static_cast<std::size_t>(config.get_int_or("detuning_count", 21));
  const double half_widths = config.get_number_or("detuning_half_widths", 6.0);
  config.finish();

  const auto detunings = beat_detunings(
      setup.pmf->lobe_half_width() / std::abs(setup.gv_delta), count, half_widths);

  auto make_curve = [&](double det) {
    const auto grid = auto_omega_grid(*setup.pmf, setup.gv_delta, det, setup.points_per_lobe);
    return cw_omega_curve(*setup.pmf, setup.gv_delta, setup.delta_k0, det, grid);
  };
  const BeatScan scan = beating_scan(make_curve, detunings, setup.visibility, setup.delays);

  ordered_json j;
  j["visibility"] = num(setup.visibility);
  j["global_max_p"] = num(scan.global_max_p);
  j["argmax_detuning"] = num(scan.argmax_detuning);
  j["detunings"] = ordered_json::array();
  j["max_p"] = ordered_json::array();
  for (std::size_t k = 0; k < scan.patterns.size(); ++k) {
    j["detunings"].push_back(num(scan.detunings[k]));
    j["max_p"].push_back(num(scan.max_p[k]));
    char name[32];
    std::snprintf(name, sizeof name, "beat_pattern_%02zu.csv", k);
    write_pattern_file(out_dir / name, scan.patterns[k]);
  }
  write_json(out_dir / "beat_summary.json", j);
}

void run_purity(Config& config, const std::filesystem::path& out_dir) {
  const Crystal crystal = crystal_from_config(config, "crystal");
  const auto pmf = crystal.pmf();
  const DispersionModel dispersion = dispersion_from_config(config);
  const LinearizedGvm lin = std::holds_alternative<LinearizedGvm>(dispersion)
                                ? std::get<LinearizedGvm>(dispersion)
                                : linearize(std::get<TabulatedDispersion>(dispersion));
  const GaussianPulse pump = pump_from_config(config, lin.mu_p);
  const std::size_t n = static_cast<std::size_t>(config.get_int_or("grid_points", 512));
  const double diag_sigmas = config.get_number_or("diag_sigmas", 5.0);
  const double antidiag_lobes = config.get_number_or("antidiag_lobes", 8.0);
  const bool dump_jsa = config.get_bool_or("write_jsa", false);
  const long max_terms = config.get_int_or("schmidt_terms", 16);
  config.finish();

  const JsaAxes axes =
      default_jsa_axes(pump, lin, pmf->lobe_half_width(), n, diag_sigmas, antidiag_lobes);
  const JsaGrid jsa = build_jsa(pump, *pmf, dispersion, axes);
  const SchmidtResult schmidt = schmidt_decompose(jsa);

  if (dump_jsa) {
    std::ofstream out(out_dir / "jsa.csv");
    if (!out) fail("cannot write " + (out_dir / "jsa.csv").string());
    write_jsa_csv(out, jsa);
  }

  ordered_json j;
  j["grid_points"] = n;
  j["sigma_p"] = num(pump.sigma_p);
  j["purity"] = num(schmidt.purity);
  j["schmidt_number"] = num(schmidt.schmidt_number);
  j["coefficients"] = ordered_json::array();
  const std::size_t terms =
      std::min<std::size_t>(schmidt.coefficients.size(), static_cast<std::size_t>(max_terms));
  for (std::size_t k = 0; k < terms; ++k) {
    j["coefficients"].push_back(num(schmidt.coefficients[k]));
  }
  write_json(out_dir / "schmidt.json", j);
}

void run_yield(Config& config, const std::filesystem::path& out_dir) {
  const Crystal crystal = crystal_from_config(config, "crystal");
  const TargetShape target = target_from_config(config);
  SectionFile file;
  if (crystal.is_sections()) {
    file = *crystal.sections;
  } else if (crystal.is_uniform()) {
    file.lambda_qpm = config.get_length("lambda_qpm");
    const int periods = static_cast<int>(std::llround(crystal.uniform_length / file.lambda_qpm));
    if (periods < 1) fail("yield: uniform crystal shorter than one poling period");
    file.sections.push_back(PolingSection::make(1, 2 * periods, 1));
  } else {
    fail("yield: crystal must be 'sections <path>' or 'uniform <length>'");
  }
  const double reference_length = config.get_length_or("reference_length", 0.0);
  config.finish();

  const DesignReport report = evaluate_design(file.sections, target, file.lambda_qpm);

  ordered_json j;
  j["target"] = target_name(target.kind);
  j["total_length"] = num(report.total_length);
  j["yield_vs_uniform"] = num(report.yield_vs_uniform);
  if (reference_length > 0) {
    // Yield against a uniform crystal of a caller-chosen length instead of
    // one matching the layout's own total length.
    NonlinearityProfile reference;
    reference.segments.push_back({-0.5 * reference_length, 0.5 * reference_length, 1.0});
    const auto profile = sections_to_profile(file.sections, file.lambda_qpm);
    const auto grid = standard_dk_grid(target);
    j["reference_length"] = num(reference_length);
    j["yield_vs_reference"] = num(profile_yield_ratio(profile, reference, grid));
  }
  j["pmf_l2_error"] = num(report.pmf_l2_error);
  j["first_sidelobe_intensity"] = num(report.first_sidelobe_intensity);
  write_json(out_dir / "yield.json", j);
}

void run_compare(Config& config, const std::filesystem::path& out_dir) {
  const Crystal a = crystal_from_config(config, "crystal_a");
  const Crystal b = crystal_from_config(config, "crystal_b");
  const DispersionModel dispersion = dispersion_from_config(config);
  const double gv_delta = group_velocity_difference(dispersion);
  const double visibility = config.get_number_or("visibility", 1.0);
  const std::size_t points_per_lobe =
      static_cast<std::size_t>(config.get_int_or("points_per_lobe", 8));
  const std::size_t delay_points =
      static_cast<std::size_t>(config.get_int_or("delay_points", 801));
  const double span_factor = config.get_number_or("delay_span_factor", 2.0);
  const std::size_t count = static_cast<std::size_t>(config.get_int_or("detuning_count", 21));
  const double half_widths = config.get_number_or("detuning_half_widths", 6.0);
  const std::size_t pmf_points =
      static_cast<std::size_t>(config.get_int_or("pmf_points", 2048));
  const double pmf_lobes = config.get_number_or("pmf_lobes", 6.0);
  config.finish();

  auto side = [&](const Crystal& crystal, const std::filesystem::path& csv) {
    const auto pmf = crystal.pmf();
    const auto dk_grid =
        symmetric_linspace(pmf_lobes * pmf->lobe_half_width(), pmf_points);
    SpectralCurve curve;
    curve.axis = dk_grid;
    curve.values.resize(dk_grid.size());
    for (std::size_t i = 0; i < dk_grid.size(); ++i) curve.values[i] = pmf->value(dk_grid[i]);
    curve = curve.peak_normalized();
    write_csv_file(csv, curve);
    const CurveMetrics metrics = curve_metrics(curve);

    const auto delays = default_delays(gv_delta, crystal.length(), delay_points, span_factor);
    const auto zero_grid = auto_omega_grid(*pmf, gv_delta, 0.0, points_per_lobe);
    const auto zero_curve = cw_omega_curve(*pmf, gv_delta, 0.0, 0.0, zero_grid);
    const auto pattern = hom_pattern_cw(zero_curve, visibility, 0.0, delays);
    const auto detunings =
        beat_detunings(pmf->lobe_half_width() / std::abs(gv_delta), count, half_widths);
    auto make_curve = [&](double det) {
      const auto grid = auto_omega_grid(*pmf, gv_delta, det, points_per_lobe);
      return cw_omega_curve(*pmf, gv_delta, 0.0, det, grid);
    };
    const BeatScan scan = beating_scan(make_curve, detunings, visibility, delays);

    ordered_json j;
    j["length"] = num(crystal.length());
    j["fwhm_amplitude"] = num(metrics.fwhm_amplitude);
    j["fwhm_intensity"] = num(metrics.fwhm_intensity);
    j["first_sidelobe_intensity"] = num(metrics.first_sidelobe_intensity);
    j["dip_min_p"] = num(pattern.min_p());
    j["triangle_fit"] = fit_json(fit_triangle_dip(pattern));
    j["gaussian_fit"] = fit_json(fit_gaussian_dip(pattern));
    j["beat_max_p"] = num(scan.global_max_p);
    j["beat_argmax_detuning"] = num(scan.argmax_detuning);
    return j;
  };

  ordered_json j;
  j["visibility"] = num(visibility);
  j["a"] = side(a, out_dir / "pmf_a.csv");
  j["b"] = side(b, out_dir / "pmf_b.csv");
  write_json(out_dir / "compare.json", j);
}

}  // namespace qpm::cli
