#pragma once

#include <array>
#include <vector>

#include "qshutter/execution.hpp"
#include "qshutter/units.hpp"

namespace qshutter {

/// Resonant (Gamow) state at a fourth-quadrant pole k_n.
///
/// u_n obeys purely outgoing conditions, u' = -ik_n u at x = 0 and
/// u' = +ik_n u at x = L, and is normalized as
///   int_0^L u_n^2 dx + i [u_n(0)^2 + u_n(L)^2] / (2 k_n) = 1.
/// The third-quadrant partner k_{-n} = -k_n^* has u_{-n} = u_n^*.
class ResonantState {
 public:
  const PotentialProfile& profile() const { return profile_; }
  cplx pole() const { return pole_; }
  /// E_n = eps_n - i Gamma_n / 2 [eV].
  cplx complex_energy() const { return complex_energy_; }
  double energy() const { return complex_energy_.real(); }
  double width() const { return -2.0 * complex_energy_.imag(); }
  double lifetime() const { return profile_.constants().hbar / width(); }
  /// R_n = eps_n / Gamma_n.
  double sharpness() const { return energy() / width(); }

  cplx u(double x) const { return u_and_derivative(x)[0]; }
  std::array<cplx, 2> u_and_derivative(double x) const;
  cplx u_origin() const { return u_origin_; }
  cplx u_end() const { return u_end_; }

  /// |u'(L) - i k_n u(L)| / |k_n u(L)| before normalization.
  double boundary_residual() const { return boundary_residual_; }

 private:
  friend ResonantState gamow_state(const PotentialProfile& profile, cplx pole);
  ResonantState(PotentialProfile profile, cplx pole) : profile_(std::move(profile)), pole_(pole) {}

  PotentialProfile profile_;
  cplx pole_;
  cplx complex_energy_;
  cplx u_origin_, u_end_;
  double boundary_residual_ = 0.0;
  std::vector<std::array<cplx, 2>> at_offsets_;  // normalized (u, u') at segment starts
};

inline constexpr double kGamowResidualTolerance = 1e-8;
inline constexpr double kNormalizationTolerance = 1e-10;

/// Integrates at E_n with outgoing conditions and normalizes. Throws
/// ConvergenceError when the outgoing residual at x = L exceeds
/// kGamowResidualTolerance (k_n is not a pole).
ResonantState gamow_state(const PotentialProfile& profile, cplx pole);

/// int_0^L u^2 dx by adaptive Gauss-Kronrod, segment by segment.
cplx gamow_square_integral(const ResonantState& state);

struct PoleSearchOptions {
  int max_iterations = 100;
  double tolerance = 1e-12;  // |dk| in 1/A
  int scan_points = 0;       // 0: kScanPointsPerDecade
  /// Rectangle depth below the real axis, in units of k(E_max).
  double depth_factor = 1.0;
  Execution exec = Execution::parallel;
};

/// Newton refinement of a zero of pole_function. Throws ConvergenceError
/// after max_iterations.
cplx refine_pole(const PotentialProfile& profile, cplx seed,
                 const PoleSearchOptions& options = {});

struct SearchRectangle {
  double re_min, re_max;  // 1/A
  double im_min, im_max;  // 1/A, im_max = 0 is the real axis
};

SearchRectangle default_search_rectangle(const PotentialProfile& profile, double e_max,
                                         double depth_factor = 1.0);

/// Number of zeros of pole_function inside the rectangle (argument principle).
int winding_count(const PotentialProfile& profile, const SearchRectangle& rect);

/// Fourth-quadrant poles with eps_n <= e_max, sorted by eps_n, at most
/// max_poles of them. Seeds come from transmission_scan maxima; the count is
/// checked against winding_count, and a grid of extra seeds is tried before
/// giving up with ConvergenceError.
std::vector<ResonantState> find_poles(const PotentialProfile& profile, double e_max,
                                      int max_poles = 64, const PoleSearchOptions& options = {});

/// One-term resonant expression phi(x, k) ~ 2ik u_n(0) u_n(x) / (k^2 - k_n^2),
/// valid for sharp isolated resonances and E near eps_n.
cplx one_term_phi(const ResonantState& state, double energy, double x);

}  // namespace qshutter
