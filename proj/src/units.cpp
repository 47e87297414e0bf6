#include "qshutter/units.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qshutter/errors.hpp"

namespace qshutter {

PhysicalConstants PhysicalConstants::for_mass(double mass_factor) {
  if (!(mass_factor > 0.0) || !std::isfinite(mass_factor)) {
    throw DomainError("mass factor must be positive, got " + std::to_string(mass_factor));
  }
  PhysicalConstants c;
  c.mass_factor = mass_factor;
  c.hbar2_over_2m = kHbar2Over2Me / mass_factor;
  return c;
}

double PhysicalConstants::momentum(double energy) const {
  return std::sqrt(energy / hbar2_over_2m);
}

PotentialProfile::PotentialProfile(std::vector<Segment> segments, PhysicalConstants constants)
    : segments_(std::move(segments)), constants_(constants) {
  if (segments_.empty()) throw DomainError("potential profile needs at least one segment");
  offsets_.reserve(segments_.size() + 1);
  offsets_.push_back(0.0);
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!(s.width > 0.0) || !std::isfinite(s.width)) {
      throw DomainError("segment " + std::to_string(i) + " has non-positive width");
    }
    if (!std::isfinite(s.height)) {
      throw DomainError("segment " + std::to_string(i) + " has non-finite height");
    }
    length_ += s.width;
    offsets_.push_back(length_);
  }
}

std::size_t PotentialProfile::segment_index(double x) const {
  // first offset strictly greater than x, minus one
  auto it = std::upper_bound(offsets_.begin() + 1, offsets_.end() - 1, x);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

double PotentialProfile::potential_at(double x) const {
  if (x < 0.0 || x > length_) return 0.0;
  if (x == length_) return 0.0;
  return segments_[segment_index(x)].height;
}

PotentialProfile build_profile(std::vector<Segment> segments, double mass_factor) {
  return PotentialProfile(std::move(segments), PhysicalConstants::for_mass(mass_factor));
}

}  // namespace qshutter
