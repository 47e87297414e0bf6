#pragma once

#include <array>
#include <vector>

#include "qshutter/execution.hpp"
#include "qshutter/units.hpp"

namespace qshutter {

/// 2x2 matrix acting on column vectors.
struct Mat2 {
  cplx m11{1.0}, m12{0.0}, m21{0.0}, m22{1.0};

  cplx det() const { return m11 * m22 - m12 * m21; }
  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
  }
  std::array<cplx, 2> apply(const std::array<cplx, 2>& v) const {
    return {m11 * v[0] + m12 * v[1], m21 * v[0] + m22 * v[1]};
  }
};

/// Plane-wave transfer matrix. Amplitudes are (right-moving, left-moving)
/// coefficients of e^{+ik(x-a)} and e^{-ik(x-a)}, each side referenced to its
/// own boundary (a = 0 on the left, a = L on the right), so that
/// (C, D) = M (A, B). With that convention the matrix of a concatenated
/// profile A+B is M_B * M_A.
using TransferMatrix = Mat2;

/// Propagator of (psi, psi') across a flat segment of width d where
/// psi'' = -kappa2 psi. Entire in kappa2, so no branch choice is involved.
Mat2 segment_propagator(cplx kappa2, double d);

/// Propagator of (psi, psi') from x = 0 to x = L for momentum k.
Mat2 state_propagator(const PotentialProfile& profile, cplx k);

/// Requires k != 0.
TransferMatrix transfer_matrix(const PotentialProfile& profile, cplx k);

/// 2k * M22(k). Entire in k; its zeros with k != 0 are the S-matrix poles.
cplx pole_function(const PotentialProfile& profile, cplx k);

/// Propagates (psi, psi') given at x = 0 to position x in [0, L].
std::array<cplx, 2> propagate(const PotentialProfile& profile, cplx k,
                              std::array<cplx, 2> at_origin, double x);

/// Scattering state for unit-amplitude incidence from the left:
/// psi = e^{ikx} + r e^{-ikx} for x < 0 and t e^{ikx} for x > L.
class StationaryState {
 public:
  StationaryState(const PotentialProfile& profile, double energy);

  double energy() const { return energy_; }
  double momentum() const { return k_; }
  cplx transmission() const { return t_; }
  cplx reflection() const { return r_; }
  double transmission_probability() const { return std::norm(t_); }

  /// phi(x, k) for 0 <= x <= L. Throws DomainError outside.
  cplx phi(double x) const;
  /// (phi, dphi/dx) at x.
  std::array<cplx, 2> phi_and_derivative(double x) const;

 private:
  PotentialProfile profile_;
  double energy_;
  double k_;
  cplx r_, t_;
  std::vector<std::array<cplx, 2>> at_offsets_;  // (phi, phi') at each segment start
};

/// Convenience wrapper: phi(x, k) at energy E.
cplx stationary_wave(const PotentialProfile& profile, double energy, double x);

struct ScanPoint {
  double energy;
  double transmission;  // |t|^2
};

struct TransmissionScan {
  std::vector<ScanPoint> points;
  /// Refined peak energies of interior local maxima, ascending.
  std::vector<double> peaks;
};

/// Points per decade used when n_points == 0.
inline constexpr int kScanPointsPerDecade = 2000;

/// |t(E)|^2 on a log-spaced grid over [e_min, e_max]. Local maxima that stand
/// out of the rounding noise are refined by a bracketed Brent search and
/// returned as resonance seeds.
TransmissionScan transmission_scan(const PotentialProfile& profile, double e_min, double e_max,
                                   int n_points = 0, Execution exec = Execution::parallel);

}  // namespace qshutter
