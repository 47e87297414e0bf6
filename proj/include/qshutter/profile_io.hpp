#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "qshutter/units.hpp"

namespace qshutter {

/// Plain-text profile description:
///
///     # comment
///     name = symmetric double barrier
///     mass_factor = 0.067
///     segment = 30 0.5      # width [A], height [eV]
///
/// Segments are listed left to right starting at x = 0. mass_factor is
/// optional and defaults to kDefaultMassFactor.
struct ProfileConfig {
  std::string name;
  PotentialProfile profile;
};

ProfileConfig parse_profile(std::istream& in);
ProfileConfig load_profile(const std::filesystem::path& path);

}  // namespace qshutter
