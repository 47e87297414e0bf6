#pragma once

#include <span>
#include <vector>

#include "qshutter/execution.hpp"
#include "qshutter/resonances.hpp"
#include "qshutter/units.hpp"

namespace qshutter {

enum class EvolutionMode { full, single_resonance };

/// Internal-region wavefunction after the reflecting shutter opens at t = 0.
/// Before that instant the wave e^{ikx} - e^{-ikx} fills x <= 0 and the
/// structure is empty, so every grid time is strictly positive.
struct TransientSolution {
  EvolutionMode mode = EvolutionMode::single_resonance;
  double energy = 0.0;    // eV
  double position = 0.0;  // A
  cplx phi{0.0};          // stationary phi(x, k)
  /// Resonance defining the lifetime unit of `taus`.
  double reference_width = 0.0;  // eV
  std::vector<double> times;     // fs
  std::vector<double> taus;      // t * Gamma_ref / hbar
  std::vector<cplx> psi;
  int pole_count = 0;
  /// |contribution of the last included pole| / |psi| at the final time.
  double convergence_diagnostic = 0.0;
  bool converged = true;
};

/// Components of |psi|^2 = |phi|^2 (1 - e^{-tau/2})^2 + Delta(tau).
struct BuildupDecomposition {
  std::vector<double> taus;
  std::vector<double> exponential_part;
  std::vector<double> remainder;  // Delta(tau)
  double phi_abs2 = 0.0;
};

/// Log-spaced grid of n points over [lo, hi]; n == 1 gives {lo}.
std::vector<double> log_grid(double lo, double hi, int n);
/// Uniform grid of n points over [lo, hi]; n == 1 gives {lo}.
std::vector<double> linear_grid(double lo, double hi, int n);
/// Lifetimes of `state` to fs.
std::vector<double> lifetimes_to_fs(std::span<const double> taus, const ResonantState& state);

inline constexpr double kDefaultTauMin = 0.01;
inline constexpr double kDefaultTauMax = 50.0;
inline constexpr int kDefaultTauPoints = 400;
inline constexpr double kDefaultConvergenceTolerance = 1e-8;

/// psi = phi M(0,k;t) - phi^* M(0,-k;t) - i T_n M(0,k_n;t) - i T_{-n} M(0,-k_n^*;t)
/// with T_n = 2k u_n(0) u_n(x) / (k^2 - k_n^2) and T_{-n} built from u_n^*.
TransientSolution evolve_single_resonance(const PotentialProfile& profile,
                                          const ResonantState& state, double energy,
                                          double position, std::span<const double> times_fs,
                                          Execution exec = Execution::parallel);

/// Pole expansion truncated to `poles` (each entering with k_n and -k_n^*).
/// Sets converged = false when the last pole's share at the final time
/// exceeds `tolerance`. `reference` selects the lifetime unit; by default the
/// pole whose eps_n is closest to the energy.
TransientSolution evolve_full(const PotentialProfile& profile,
                              std::span<const ResonantState> poles, double energy,
                              double position, std::span<const double> times_fs,
                              double tolerance = kDefaultConvergenceTolerance,
                              Execution exec = Execution::parallel, int reference = -1);

/// Energy below which poles are kept for the full expansion:
/// max(4E, E + 10 Gamma).
double default_pole_cutoff(double energy, double widest_width);

/// Delta(tau) = |psi|^2 - |phi|^2 (1 - e^{-tau/2})^2, in lifetimes of `state`.
/// Requires a single-resonance solution.
BuildupDecomposition buildup_decomposition(const TransientSolution& solution,
                                           const ResonantState& state);

}  // namespace qshutter
