#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qpm {

/// One constant-level stretch of a discretely poled crystal. A section of
/// order m contributes an effective nonlinearity of polarity/m and is built
/// from num_domains constant-sign domains averaging m coherence lengths each,
/// so its physical width is num_domains * m * Lambda / 2.
///
/// num_domains >= 2 keeps at least one full sign-flip period per section. An
/// even order m = 2k alternates domain runs of (2k-1) and (2k+1) coherence
/// lengths, which only tile in pairs, so even orders need an even count.
///
/// Duty cycle is the fraction of a sign-flip period carrying the section's
/// polarity sign. Odd orders realize exactly 1/2; an even order m = 2k
/// realizes the closest value on the coherence-length grid, (2k-1)/(4k).
struct PolingSection {
  int order = 1;        // m >= 1
  int num_domains = 2;  // constant-sign domains, >= 2; even for even orders
  double duty_cycle = 0.5;
  int polarity = 1;  // +1 or -1

  static double canonical_duty(int order);
  static PolingSection make(int order, int num_domains, int polarity);

  void validate() const;
  double level() const { return static_cast<double>(polarity) / order; }
  double width(double lambda_qpm) const;  // num_domains * order * lambda_qpm / 2
};

struct Domain {
  int sign = 1;        // +1 or -1
  double width = 0.0;  // m, an integer multiple of the coherence length
};

/// Explicit ferroelectric domain layout: signed domains laid end to end from
/// `origin`, every width an integer multiple of `coherence_length`.
struct DomainSequence {
  std::vector<Domain> domains;
  double origin = 0.0;
  double coherence_length = 0.0;

  double total_length() const;
  void validate() const;
};

struct ProfileSegment {
  double z_start = 0.0;
  double z_end = 0.0;
  double level = 0.0;  // |level| <= 1
};

/// Piecewise-constant effective nonlinearity chi(z)/chi_max. Segments are
/// contiguous and ordered left to right.
struct NonlinearityProfile {
  std::vector<ProfileSegment> segments;

  double z_min() const;
  double z_max() const;
  double total_length() const;
  void validate() const;
};

/// Section-level (local effective nonlinearity) view of a layout. The profile
/// is centered on z = 0 unless an explicit left edge is given.
NonlinearityProfile sections_to_profile(std::span<const PolingSection> sections,
                                        double lambda_qpm,
                                        std::optional<double> z_left = std::nullopt);

/// Domain-level view of the same layout. Each section starts on its polarity
/// sign; odd orders alternate in runs of m coherence lengths, an even order
/// m = 2k alternates in runs of (2k-1) and (2k+1) coherence lengths.
DomainSequence sections_to_domains(std::span<const PolingSection> sections,
                                   double lambda_qpm,
                                   std::optional<double> z_left = std::nullopt);

/// Ratio of spectrally integrated phase-matching intensity, integral |PMF_a|^2
/// over integral |PMF_b|^2, both on the shared delta-k grid. This is the
/// relative pair yield under broadband collection.
double profile_yield_ratio(const NonlinearityProfile& a, const NonlinearityProfile& b,
                           std::span<const double> dk_grid);

/// Section-list file: '#' comments, one "lambda_qpm <meters>" record, then one
/// "section <order> <num_domains> <duty_cycle> <polarity>" record per section.
struct SectionFile {
  double lambda_qpm = 0.0;
  std::vector<PolingSection> sections;
};

SectionFile load_sections(std::istream& in, const std::string& name = "<stream>");
SectionFile load_sections_file(const std::string& path);
void save_sections(std::ostream& out, const SectionFile& file);
void save_sections_file(const std::string& path, const SectionFile& file);

}  // namespace qpm
