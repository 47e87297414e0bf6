#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qshutter {

using cplx = std::complex<double>;

// Unit system: energies in eV, lengths in angstrom, times in fs.
inline constexpr double kHbar = 0.6582119569;           // eV fs
inline constexpr double kHbar2Over2Me = 3.80998;        // eV A^2, hbar^2 / (2 m_e)
inline constexpr double kDefaultMassFactor = 0.067;     // m*/m_e, GaAs-like
inline constexpr double kPi = 3.14159265358979323846;

/// Constants for a carrier of effective mass m* = mass_factor * m_e.
struct PhysicalConstants {
  double hbar = kHbar;
  double mass_factor = kDefaultMassFactor;
  double hbar2_over_2m = kHbar2Over2Me / kDefaultMassFactor;

  static PhysicalConstants for_mass(double mass_factor);

  /// E = hbar^2 k^2 / 2m, valid for complex k.
  cplx energy(cplx k) const { return hbar2_over_2m * k * k; }
  /// Principal branch k = sqrt(2mE)/hbar.
  cplx momentum(cplx energy) const { return std::sqrt(energy / hbar2_over_2m); }
  double momentum(double energy) const;
};

struct Segment {
  double width;   // A
  double height;  // eV
};

/// Piecewise-constant potential on [0, L]; zero outside.
class PotentialProfile {
 public:
  PotentialProfile(std::vector<Segment> segments, PhysicalConstants constants);

  std::span<const Segment> segments() const { return segments_; }
  const PhysicalConstants& constants() const { return constants_; }
  double length() const { return length_; }
  /// Left edge of segment i; offsets().back() == length().
  std::span<const double> offsets() const { return offsets_; }

  /// Height at x. Interior boundaries take the segment to the right.
  double potential_at(double x) const;
  /// Index of the segment containing x in [0, L]; L maps to the last segment.
  std::size_t segment_index(double x) const;

 private:
  std::vector<Segment> segments_;
  std::vector<double> offsets_;
  PhysicalConstants constants_;
  double length_ = 0.0;
};

/// Validates widths and builds the profile. Throws DomainError on empty or
/// non-positive input.
PotentialProfile build_profile(std::vector<Segment> segments,
                               double mass_factor = kDefaultMassFactor);

inline double potential_at(const PotentialProfile& profile, double x) {
  return profile.potential_at(x);
}

}  // namespace qshutter
