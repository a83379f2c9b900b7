#include "qpmkit/poling.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qpmkit/format.hpp"
#include "qpmkit/pmf.hpp"

namespace qpm {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

double PolingSection::canonical_duty(int order) {
  require(order >= 1, "poling section: order must be >= 1");
  if (order % 2 == 1) return 0.5;
  const int k = order / 2;  // runs of (2k-1) and (2k+1) coherence lengths
  return static_cast<double>(2 * k - 1) / (4 * k);
}

PolingSection PolingSection::make(int order, int num_domains, int polarity) {
  PolingSection s{order, num_domains, canonical_duty(order), polarity};
  s.validate();
  return s;
}

void PolingSection::validate() const {
  require(order >= 1, "poling section: order must be >= 1");
  require(num_domains >= 2, "poling section: needs at least 2 domains (one full period)");
  require(order % 2 == 1 || num_domains % 2 == 0,
          "poling section: even orders tile in domain pairs, so num_domains must be even");
  require(polarity == 1 || polarity == -1, "poling section: polarity must be +1 or -1");
  require(std::abs(duty_cycle - canonical_duty(order)) <= 1e-9,
          "poling section: duty cycle not realizable for this order");
}

double PolingSection::width(double lambda_qpm) const {
  return 0.5 * static_cast<double>(num_domains) * order * lambda_qpm;
}

double DomainSequence::total_length() const {
  double sum = 0.0;
  for (const auto& d : domains) sum += d.width;
  return sum;
}

void DomainSequence::validate() const {
  require(coherence_length > 0, "domain sequence: coherence length must be positive");
  require(!domains.empty(), "domain sequence: empty");
  for (const auto& d : domains) {
    require(d.sign == 1 || d.sign == -1, "domain sequence: sign must be +1 or -1");
    require(d.width > 0, "domain sequence: widths must be positive");
    const double units = d.width / coherence_length;
    require(std::abs(units - std::round(units)) <= 1e-6,
            "domain sequence: width not a multiple of the coherence length");
  }
}

double NonlinearityProfile::z_min() const {
  require(!segments.empty(), "profile: empty");
  return segments.front().z_start;
}

double NonlinearityProfile::z_max() const {
  require(!segments.empty(), "profile: empty");
  return segments.back().z_end;
}

double NonlinearityProfile::total_length() const { return z_max() - z_min(); }

void NonlinearityProfile::validate() const {
  require(!segments.empty(), "profile: empty");
  const double scale = total_length();
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    require(s.z_end > s.z_start, "profile: segment must have positive width");
    require(std::abs(s.level) <= 1.0 + 1e-12, "profile: |level| must be <= 1");
    if (i > 0) {
      require(std::abs(s.z_start - segments[i - 1].z_end) <= 1e-9 * scale,
              "profile: segments must be contiguous");
    }
  }
}

namespace {

double sections_total(std::span<const PolingSection> sections, double lambda_qpm) {
  require(!sections.empty(), "poling: empty section list");
  require(lambda_qpm > 0, "poling: lambda_qpm must be positive");
  double total = 0.0;
  for (const auto& s : sections) {
    s.validate();
    total += s.width(lambda_qpm);
  }
  return total;
}

}  // namespace

NonlinearityProfile sections_to_profile(std::span<const PolingSection> sections,
                                        double lambda_qpm, std::optional<double> z_left) {
  const double total = sections_total(sections, lambda_qpm);
  double z = z_left.value_or(-0.5 * total);
  NonlinearityProfile profile;
  profile.segments.reserve(sections.size());
  for (const auto& s : sections) {
    const double w = s.width(lambda_qpm);
    profile.segments.push_back({z, z + w, s.level()});
    z += w;
  }
  profile.validate();
  return profile;
}

DomainSequence sections_to_domains(std::span<const PolingSection> sections,
                                   double lambda_qpm, std::optional<double> z_left) {
  const double total = sections_total(sections, lambda_qpm);
  const double lc = lambda_qpm / 2.0;
  DomainSequence seq;
  seq.origin = z_left.value_or(-0.5 * total);
  seq.coherence_length = lc;
  for (const auto& s : sections) {
    // Run lengths in coherence lengths: (m, m) for odd m, (2k-1, 2k+1) for m = 2k.
    int first = s.order, second = s.order;
    if (s.order % 2 == 0) {
      first = s.order - 1;
      second = s.order + 1;
    }
    for (int d = 0; d < s.num_domains; ++d) {
      const bool even_slot = d % 2 == 0;
      seq.domains.push_back(
          {even_slot ? s.polarity : -s.polarity, (even_slot ? first : second) * lc});
    }
  }
  seq.validate();
  return seq;
}

double profile_yield_ratio(const NonlinearityProfile& a, const NonlinearityProfile& b,
                           std::span<const double> dk_grid) {
  a.validate();
  b.validate();
  require(dk_grid.size() >= 16, "yield ratio: grid too small");
  auto intensity_integral = [&](const NonlinearityProfile& p) {
    double sum = 0.0;
    double prev_dk = dk_grid.front();
    double prev_v = std::norm(pmf_point_from_profile(p, prev_dk));
    for (std::size_t i = 1; i < dk_grid.size(); ++i) {
      const double dk = dk_grid[i];
      require(dk > prev_dk, "yield ratio: grid must be strictly increasing");
      const double v = std::norm(pmf_point_from_profile(p, dk));
      sum += 0.5 * (v + prev_v) * (dk - prev_dk);
      prev_dk = dk;
      prev_v = v;
    }
    return sum;
  };
  const double denom = intensity_integral(b);
  if (!(denom > 1e-300)) {
    throw std::domain_error("yield ratio: reference profile has no phase-matching intensity");
  }
  return intensity_integral(a) / denom;
}

SectionFile load_sections(std::istream& in, const std::string& name) {
  SectionFile file;
  bool have_lambda = false;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("section file " + name + ": line " +
                                std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    std::string tag;
    if (!(row >> tag)) continue;
    if (tag == "lambda_qpm") {
      if (have_lambda) fail("duplicate lambda_qpm record");
      if (!(row >> file.lambda_qpm) || !(file.lambda_qpm > 0)) {
        fail("lambda_qpm needs one positive value in meters");
      }
      have_lambda = true;
    } else if (tag == "section") {
      PolingSection s;
      if (!(row >> s.order >> s.num_domains >> s.duty_cycle >> s.polarity)) {
        fail("section record needs: order num_domains duty_cycle polarity");
      }
      try {
        s.validate();
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
      file.sections.push_back(s);
    } else {
      fail("unknown record '" + tag + "'");
    }
    std::string extra;
    if (row >> extra) fail("trailing fields");
  }
  if (!have_lambda) throw std::invalid_argument("section file " + name + ": missing lambda_qpm");
  if (file.sections.empty()) {
    throw std::invalid_argument("section file " + name + ": no sections");
  }
  return file;
}

SectionFile load_sections_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("section file: cannot open " + path);
  return load_sections(in, path);
}

void save_sections(std::ostream& out, const SectionFile& file) {
  require(file.lambda_qpm > 0, "section file: lambda_qpm must be positive");
  require(!file.sections.empty(), "section file: no sections");
  out << "# discretely poled crystal layout\n";
  out << "# section fields: order num_domains duty_cycle polarity\n";
  out << "lambda_qpm " << format_sci(file.lambda_qpm) << "\n";
  for (const auto& s : file.sections) {
    s.validate();
    out << "section " << s.order << " " << s.num_domains << " " << format_sci(s.duty_cycle)
        << " " << (s.polarity > 0 ? "+1" : "-1") << "\n";
  }
}

void save_sections_file(const std::string& path, const SectionFile& file) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("section file: cannot write " + path);
  save_sections(out, file);
}

}  // namespace qpm
