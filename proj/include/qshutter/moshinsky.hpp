#pragma once

#include "qshutter/faddeeva.hpp"
#include "qshutter/units.hpp"

namespace qshutter {

/// Dimensionless argument y_q of the Moshinsky function M(0, q; t).
class MoshinskyArgument {
 public:
  /// Which momentum q the argument belongs to, for the lifetime-unit forms.
  /// `plus_k`/`minus_k` assume on-resonance incidence (E = eps_n).
  enum class Branch { plus_k, minus_k, plus_pole, minus_pole, plus_pole_conj, minus_pole_conj };

  explicit MoshinskyArgument(cplx y) : y_(y) {}

  /// y_q = -e^{-i pi/4} sqrt(m/2hbar) (hbar q/m) t^{1/2}, i.e.
  /// -e^{-i pi/4} q sqrt(hbar t / 2m), with t in fs and q in 1/A.
  static MoshinskyArgument physical(cplx q, double t_fs, const PhysicalConstants& constants);

  /// Same argument with time in lifetimes tau = t Gamma_n / hbar; depends on
  /// the resonance only through R_n = eps_n / Gamma_n:
  ///   y_{+-k_n}  = -+ e^{-i pi/4} [(R_n - i/2) tau]^{1/2}
  ///   y_{+-k_n*} = -+ e^{-i pi/4} [(R_n + i/2) tau]^{1/2}
  ///   y_{+-k}    = -+ e^{-i pi/4} [R_n tau]^{1/2}
  static MoshinskyArgument lifetime_units(Branch branch, double sharpness, double tau);

  cplx value() const { return y_; }

 private:
  cplx y_;
};

inline MoshinskyArgument moshinsky_argument_lifetime_units(MoshinskyArgument::Branch branch,
                                                           double sharpness, double tau) {
  return MoshinskyArgument::lifetime_units(branch, sharpness, tau);
}

/// M(y) = w(iy)/2. Evaluated directly when iy lies in the closed upper half
/// plane (Re y >= 0) and through the symmetry relation otherwise.
cplx moshinsky_m(MoshinskyArgument y);
ScaledComplex moshinsky_m_scaled(MoshinskyArgument y);

/// M(y) = e^{y^2} - M(-y), in scaled arithmetic. Well conditioned for
/// Re y <= 0; for Re y > 0 the two terms cancel to O(ulp(e^{y^2})).
ScaledComplex moshinsky_reflect(cplx y);

struct AsymptoticValue {
  cplx value;
  /// Modulus of the first omitted non-zero term.
  double error_estimate;
};

/// Coefficient a_j of M(y) ~ sum_j a_j / y^j, from w(z) ~ i/(sqrt(pi) z)
/// sum_m (2m-1)!!/(2z^2)^m at z = iy:
///   a_{2m+1} = (-1)^m (2m-1)!! / (2^{m+1} sqrt(pi)),  a_{2m} = 0.
double asymptotic_coefficient(int j);

inline constexpr double kAsymptoticMinModulus = 8.0;

/// Partial sum a_1/y + ... + a_n/y^n. Requires -pi/2 < arg y < pi/2 and
/// |y| >= min_modulus; throws DomainError otherwise.
AsymptoticValue moshinsky_asymptotic(cplx y, int n_terms,
                                     double min_modulus = kAsymptoticMinModulus);

}  // namespace qshutter
