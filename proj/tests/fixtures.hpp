#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "qshutter/analysis.hpp"
#include "qshutter/dynamics.hpp"
#include "qshutter/resonances.hpp"
#include "qshutter/stationary.hpp"

namespace fixtures {

using namespace qshutter;

// Mass factor that reproduces the reference resonance tables; see README.
inline constexpr double kMass = 0.0669;

inline const PotentialProfile& symmetric() {
  static const auto p = build_profile({{30, 0.5}, {100, 0.0}, {30, 0.5}}, kMass);
  return p;
}

inline const PotentialProfile& asymmetric() {
  static const auto p = build_profile({{30, 0.3}, {50, 0.0}, {100, 0.3}}, kMass);
  return p;
}

inline const std::vector<ResonantState>& symmetric_poles() {
  static const auto poles = find_poles(symmetric(), 0.4);
  return poles;
}

inline const std::vector<ResonantState>& asymmetric_poles() {
  static const auto poles = find_poles(asymmetric(), 0.3);
  return poles;
}

struct Config {
  const char* label;
  const PotentialProfile* profile;
  const ResonantState* state;
  int n;
  double x;  // A, near the maximum of |phi|^2 in the well
};

inline std::vector<Config> reference_configs() {
  return {{"symmetric n=1", &symmetric(), &symmetric_poles()[0], 1, 80.0},
          {"symmetric n=2", &symmetric(), &symmetric_poles()[1], 2, 48.0},
          {"symmetric n=3", &symmetric(), &symmetric_poles()[2], 3, 80.0},
          {"asymmetric n=1", &asymmetric(), &asymmetric_poles()[0], 1, 55.0}};
}

/// Uniform grid fine enough to resolve the tail oscillation of period 2 pi / R_n.
inline std::vector<double> dense_taus(const ResonantState& s, double lo = 0.01, double hi = 50.0) {
  const double step = std::min(2.0 * kPi / s.sharpness() / 16.0, 0.01);
  return linear_grid(lo, hi, static_cast<int>(std::ceil((hi - lo) / step)) + 1);
}

inline BuildupSeries buildup(const Config& c, const std::vector<double>& taus) {
  const double e = c.state->energy();
  const auto sol = evolve_single_resonance(*c.profile, *c.state, e, c.x,
                                           lifetimes_to_fs(taus, *c.state));
  return normalize_buildup(sol, *c.state, *c.profile, e, c.x, c.n);
}

}  // namespace fixtures
