#include "qpmkit/designer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qpmkit/grid.hpp"
#include "qpmkit/units.hpp"

namespace qpm {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

TargetShape TargetShape::gaussian(double l_eff, double gamma) {
  TargetShape t{TargetKind::Gaussian, l_eff, gamma};
  t.validate();
  return t;
}

TargetShape TargetShape::triangle(double pmf_base_width) {
  TargetShape t{TargetKind::Triangle, pmf_base_width, 0.0};
  t.validate();
  return t;
}

TargetShape TargetShape::tophat(double pmf_width) {
  TargetShape t{TargetKind::Tophat, pmf_width, 0.0};
  t.validate();
  return t;
}

TargetShape TargetShape::uniform(double length) {
  TargetShape t{TargetKind::Uniform, length, 0.0};
  t.validate();
  return t;
}

void TargetShape::validate() const {
  require(std::isfinite(width) && width > 0, "target shape: width must be positive");
  require(std::isfinite(gamma) && gamma >= 0, "target shape: gamma must be >= 0");
}

double TargetShape::gamma_or_default() const {
  return gamma > 0 ? gamma : gamma_from_fwhm_match();
}

double TargetShape::value(double z) const {
  switch (kind) {
    case TargetKind::Gaussian: {
      const double u = z / width;
      return std::exp(-u * u / gamma_or_default());
    }
    case TargetKind::Triangle: {
      const double s = sinc(0.25 * width * z);
      return s * s;
    }
    case TargetKind::Tophat:
      return sinc(0.5 * width * z);
    case TargetKind::Uniform:
      return std::abs(z) <= 0.5 * width ? 1.0 : 0.0;
  }
  throw std::logic_error("target shape: unknown kind");
}

double TargetShape::pmf_value(double dk) const {
  switch (kind) {
    case TargetKind::Gaussian: {
      const double x = 0.5 * dk * width;
      return std::exp(-gamma_or_default() * x * x);
    }
    case TargetKind::Triangle:
      return std::max(0.0, 1.0 - std::abs(dk) / (0.5 * width));
    case TargetKind::Tophat:
      return std::abs(dk) <= 0.5 * width ? 1.0 : 0.0;
    case TargetKind::Uniform:
      return sinc(0.5 * dk * width);
  }
  throw std::logic_error("target shape: unknown kind");
}

double TargetShape::pmf_lobe_half_width() const {
  switch (kind) {
    case TargetKind::Gaussian:
    case TargetKind::Uniform:
      return two_pi / width;  // first zero of sinc(dk*width/2)
    case TargetKind::Triangle:
    case TargetKind::Tophat:
      return 0.5 * width;
  }
  throw std::logic_error("target shape: unknown kind");
}

std::vector<double> target_shape_samples(const TargetShape& target,
                                         std::span<const double> z_grid) {
  target.validate();
  std::vector<double> out(z_grid.size());
  for (std::size_t i = 0; i < z_grid.size(); ++i) out[i] = target.value(z_grid[i]);
  return out;
}

std::vector<double> standard_dk_grid(const TargetShape& target) {
  target.validate();
  return symmetric_linspace(6.0 * target.pmf_lobe_half_width(), 4096);
}

void DesignSpec::validate() const {
  target.validate();
  require(lambda_qpm > 0, "design spec: lambda_qpm must be positive");
  require(m_min >= 1 && m_min <= m_max && m_max <= 16,
          "design spec: need 1 <= m_min <= m_max <= 16");
  require(length_budget > 0, "design spec: length_budget must be positive");
}

namespace {

// Relative L2 distance between the peak-normalized realized PMF and the
// dk-space target, on the standard grid shared by all design metrics.
struct PmfObjective {
  double lambda_qpm = 0.0;
  std::vector<double> grid;
  std::vector<double> target_values;
  double target_norm = 0.0;

  PmfObjective(const TargetShape& target, double lambda) : lambda_qpm(lambda) {
    grid = standard_dk_grid(target);
    target_values.resize(grid.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      target_values[i] = target.pmf_value(grid[i]);
      sum += target_values[i] * target_values[i];
    }
    target_norm = std::sqrt(sum);
  }

  double error(std::span<const PolingSection> sections) const {
    const auto profile = sections_to_profile(sections, lambda_qpm);
    const auto curve = pmf_from_profile(profile, grid, Normalization::PeakNormalized);
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      sum += std::norm(curve.values[i] - target_values[i]);
    }
    return std::sqrt(sum) / target_norm;
  }
};

struct Run {
  double level = 0.0;
  long cells = 0;  // coherence-length cells on the positive half axis
};

// Quantize the scaled target on coherence-length cell midpoints of the
// positive half axis; the layout is mirrored for the (symmetric) targets.
std::vector<Run> quantize_half_axis(const DesignSpec& spec) {
  const double lc = 0.5 * spec.lambda_qpm;
  const double threshold = 0.5 / spec.m_max;

  std::vector<double> levels{0.0};
  for (int m = spec.m_max; m >= spec.m_min; --m) {
    levels.push_back(1.0 / m);
    if (spec.allow_negative) levels.push_back(-1.0 / m);
  }

  const long max_cells = static_cast<long>(std::floor(spec.length_budget / spec.lambda_qpm));
  std::vector<double> q;
  long last_keep = -1;
  for (long j = 0; j < max_cells; ++j) {
    const double t = spec.target.value((j + 0.5) * lc) / spec.m_min;
    double best = levels.front();
    double best_dist = std::abs(t - best);
    // Levels are ordered by |level|, so ties resolve to the smaller magnitude.
    for (std::size_t k = 1; k < levels.size(); ++k) {
      const double d = std::abs(t - levels[k]);
      if (d < best_dist) {
        best = levels[k];
        best_dist = d;
      }
    }
    q.push_back(best);
    if (std::abs(t) >= threshold) last_keep = j;
  }
  if (last_keep < 0) {
    throw std::domain_error("design: target never reaches half the weakest level");
  }
  q.resize(static_cast<std::size_t>(last_keep + 1));
  while (!q.empty() && q.back() == 0.0) q.pop_back();

  std::vector<Run> runs;
  for (double level : q) {
    if (!runs.empty() && runs.back().level == level) {
      ++runs.back().cells;
    } else {
      runs.push_back({level, 1});
    }
  }

  // Zero runs are interior here (center and tail are nonzero); they cannot be
  // poled as sections, so split their cells between the two neighbours.
  std::vector<Run> filled;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].level != 0.0) {
      if (!filled.empty() && filled.back().level == runs[i].level) {
        filled.back().cells += runs[i].cells;
      } else {
        filled.push_back(runs[i]);
      }
      continue;
    }
    const long left = runs[i].cells / 2;
    if (!filled.empty()) filled.back().cells += left;
    if (i + 1 < runs.size()) runs[i + 1].cells += runs[i].cells - left;
  }
  return filled;
}

int order_of_level(double level) { return static_cast<int>(std::lround(1.0 / std::abs(level))); }

// Round runs down to whole sign-flip periods (2 domains, 2m cells), outward
// from the center, carrying the remainder cells into the next run. Fabricable
// sections need a width of at least 2*m*lambda (4 domains); runs too short
// for that merge forward the same way.
std::vector<PolingSection> sections_from_runs(const std::vector<Run>& runs) {
  const int m0 = order_of_level(runs[0].level);
  const long p0 = runs[0].cells / m0;  // center run spans both half axes
  if (p0 < 2) {
    throw std::domain_error("design: coherence-length grid too coarse for the target center");
  }
  const PolingSection center = PolingSection::make(m0, static_cast<int>(2 * p0),
                                                   runs[0].level > 0 ? 1 : -1);
  long carry = runs[0].cells - p0 * m0;

  std::vector<PolingSection> side;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    const long avail = carry + runs[i].cells;
    const int m = order_of_level(runs[i].level);
    const long p = avail / (2 * m);
    if (p >= 2) {
      side.push_back(
          PolingSection::make(m, static_cast<int>(2 * p), runs[i].level > 0 ? 1 : -1));
      carry = avail - p * 2 * m;
    } else {
      carry = avail;
    }
  }

  std::vector<PolingSection> all(side.rbegin(), side.rend());
  all.push_back(center);
  all.insert(all.end(), side.begin(), side.end());
  return all;
}

double sections_total_length(std::span<const PolingSection> sections, double lambda_qpm) {
  double total = 0.0;
  for (const auto& s : sections) total += s.width(lambda_qpm);
  return total;
}

// Coordinate descent on domain counts: each move adds or removes one full
// sign-flip period (two domains) from a section and its mirror partner,
// keeping symmetric layouts symmetric, and is kept only if the objective
// strictly decreases.
int refine_sections(std::vector<PolingSection>& sections, const PmfObjective& objective,
                    double length_budget, double& current_error) {
  int moves = 0;
  const std::size_t n = sections.size();
  for (int sweep = 0; sweep < 500; ++sweep) {
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t partner = n - 1 - i;
      if (partner < i) break;
      for (int delta : {2, -2}) {
        auto candidate = sections;
        candidate[i].num_domains += delta;
        if (partner != i) candidate[partner].num_domains += delta;
        if (candidate[i].num_domains < 4) continue;  // keep widths >= 2*m*lambda
        if (sections_total_length(candidate, objective.lambda_qpm) > length_budget) continue;
        const double e = objective.error(candidate);
        if (e < current_error) {
          sections = std::move(candidate);
          current_error = e;
          ++moves;
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
  return moves;
}

DesignReport report_metrics(std::vector<PolingSection> sections, const PmfObjective& objective) {
  DesignReport report;
  report.total_length = sections_total_length(sections, objective.lambda_qpm);
  report.pmf_l2_error = objective.error(sections);
  report.pmf_l2_error_before_refine = report.pmf_l2_error;

  const auto profile = sections_to_profile(sections, objective.lambda_qpm);
  const auto curve = pmf_from_profile(profile, objective.grid, Normalization::PeakNormalized);
  report.first_sidelobe_intensity = curve_metrics(curve).first_sidelobe_intensity;

  NonlinearityProfile uniform;
  uniform.segments.push_back({-0.5 * report.total_length, 0.5 * report.total_length, 1.0});
  report.yield_vs_uniform = profile_yield_ratio(profile, uniform, objective.grid);

  report.sections = std::move(sections);
  return report;
}

}  // namespace

DesignReport design_profile(const DesignSpec& spec) {
  spec.validate();
  if (spec.target.kind == TargetKind::Tophat && !spec.allow_negative) {
    throw std::domain_error("design: tophat target needs negative levels (allow_negative)");
  }
  if (spec.length_budget < 4.0 * spec.m_min * spec.lambda_qpm) {
    throw std::domain_error("design: length budget below 4*m_min*lambda_qpm is infeasible");
  }

  const PmfObjective objective(spec.target, spec.lambda_qpm);
  auto sections = sections_from_runs(quantize_half_axis(spec));

  double error = objective.error(sections);
  const double error_before = error;
  const int moves = refine_sections(sections, objective, spec.length_budget, error);

  DesignReport report = report_metrics(std::move(sections), objective);
  report.pmf_l2_error_before_refine = error_before;
  report.refinement_moves = moves;
  return report;
}

DesignReport evaluate_design(std::span<const PolingSection> sections, const TargetShape& target,
                             double lambda_qpm) {
  require(!sections.empty(), "evaluate design: empty section list");
  require(lambda_qpm > 0, "evaluate design: lambda_qpm must be positive");
  const PmfObjective objective(target, lambda_qpm);
  return report_metrics({sections.begin(), sections.end()}, objective);
}

}  // namespace qpm
