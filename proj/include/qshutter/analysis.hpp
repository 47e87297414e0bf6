#pragma once

#include <vector>

#include "qshutter/dynamics.hpp"
#include "qshutter/resonances.hpp"

namespace qshutter {

/// Normalized buildup |psi(tau)/phi| in lifetimes of one resonance.
struct BuildupSeries {
  int resonance_index = 0;  // n, 1-based; 0 if unknown
  double sharpness = 0.0;   // R_n
  std::vector<double> tau;
  std::vector<double> ratio_abs;   // |psi/phi|
  std::vector<double> ratio_abs2;  // |psi/phi|^2
  std::vector<double> delta;       // |1 - |psi/phi||
};

struct OnsetReport {
  double tau0 = 0.0;  // fitted time constant [lifetimes]
  double fit_begin = 0.0;
  double fit_end = 0.0;
  double fit_slope = 0.0;     // d ln(1 - |psi/phi|) / d tau
  double fit_residual = 0.0;  // rms of the log fit
  double tau_onset = 0.0;
  double envelope_exponent = 0.0;  // Delta/|phi|^2 ~ tau^p after the onset; NaN if unresolved
};

struct DeltaCurve {
  std::vector<double> tau;
  std::vector<double> ln_delta;
  int dropped = 0;  // points with delta == 0
};

/// 1 - e^{-tau/2}.
double exponential_law(double tau);

/// Divides by phi(x, k) and converts t to tau = t Gamma_n / hbar. Throws
/// DomainError when |phi| < 1e-12 (x at a node).
BuildupSeries normalize_buildup(const TransientSolution& solution, const ResonantState& state,
                                const PotentialProfile& profile, double energy, double position,
                                int resonance_index = 0);

inline constexpr double kFitStart = 0.5;
inline constexpr double kFitEndMax = 6.0;
inline constexpr double kOnsetWindow = 0.5;
inline constexpr double kOnsetSlopeTolerance = 0.2;  // relative to -1/2
inline constexpr int kOnsetPersistence = 3;
inline constexpr double kFitResidualLimit = 0.05;

/// Least-squares fit of ln(1 - |psi/phi|) over [0.5, min(6, first slope
/// deviation)]; tau0 = -1/slope. Fills the tau0/fit fields only. Throws
/// DomainError when the series does not reach tau = 6 and ConvergenceError
/// when the log residual shows curvature.
OnsetReport fit_time_constant(const BuildupSeries& series);

/// (tau, ln delta), dropping exact zeros.
DeltaCurve delta_curve(const BuildupSeries& series);

/// Least-squares slope of ln delta over a centered window of `width`
/// lifetimes around every point of the curve (NaN with fewer than 3 points).
std::vector<double> local_slopes(const DeltaCurve& curve, double width = kOnsetWindow);

/// Slope of ln delta in consecutive windows of `width` starting at tau = 0.5;
/// pair of (window start, slope), NaN where a window holds fewer than 3 points.
std::vector<std::pair<double, double>> window_slopes(const DeltaCurve& curve,
                                                     double width = kOnsetWindow);

/// Crossover time: start of the first of three consecutive windows whose
/// slope differs from -1/2 by more than 20%. Also fits tau0 and the
/// post-onset envelope exponent. Throws NoOnsetError when the grid ends first.
OnsetReport detect_onset(const BuildupSeries& series);

/// Exponent p of max|Delta/|phi|^2| ~ tau^p, from window maxima over
/// [tau_begin, tau_end]; NaN with fewer than four windows.
double envelope_exponent(const BuildupSeries& series, double tau_begin, double tau_end,
                         double window);

}  // namespace qshutter
