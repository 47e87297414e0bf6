#include "qshutter/moshinsky.hpp"

#include <cmath>
#include <string>

#include "qshutter/errors.hpp"

namespace qshutter {

namespace {
constexpr cplx kI{0.0, 1.0};
const cplx kPhase = std::polar(1.0, -kPi / 4.0);  // e^{-i pi/4}
constexpr double kInvSqrtPi = 0.56418958354775628695;
}  // namespace

MoshinskyArgument MoshinskyArgument::physical(cplx q, double t_fs,
                                              const PhysicalConstants& constants) {
  if (t_fs < 0.0) throw DomainError("Moshinsky argument needs t >= 0");
  // hbar t / 2m = (hbar^2/2m) t / hbar
  const double length = std::sqrt(constants.hbar2_over_2m * t_fs / constants.hbar);
  return MoshinskyArgument(-kPhase * q * length);
}

MoshinskyArgument MoshinskyArgument::lifetime_units(Branch branch, double sharpness, double tau) {
  if (tau < 0.0) throw DomainError("Moshinsky argument needs tau >= 0");
  cplx root;
  double sign = 1.0;
  switch (branch) {
    case Branch::plus_k:
    case Branch::minus_k:
      root = std::sqrt(sharpness * tau);
      sign = branch == Branch::plus_k ? -1.0 : 1.0;
      break;
    case Branch::plus_pole:
    case Branch::minus_pole:
      root = std::sqrt(cplx(sharpness, -0.5) * tau);
      sign = branch == Branch::plus_pole ? -1.0 : 1.0;
      break;
    case Branch::plus_pole_conj:
    case Branch::minus_pole_conj:
      root = std::sqrt(cplx(sharpness, 0.5) * tau);
      sign = branch == Branch::plus_pole_conj ? -1.0 : 1.0;
      break;
  }
  return MoshinskyArgument(sign * kPhase * root);
}

ScaledComplex moshinsky_reflect(cplx y) {
  const ScaledComplex other = 0.5 * faddeeva_scaled(-kI * y);  // M(-y)
  return (exp_square(y, 1.0) - other).normalized();
}

ScaledComplex moshinsky_m_scaled(MoshinskyArgument arg) {
  const cplx y = arg.value();
  if (y.real() >= 0.0) return {0.5 * faddeeva(kI * y), 0.0};
  return moshinsky_reflect(y);
}

cplx moshinsky_m(MoshinskyArgument y) { return moshinsky_m_scaled(y).value(); }

double asymptotic_coefficient(int j) {
  if (j < 1) throw DomainError("asymptotic coefficients start at a_1");
  if (j % 2 == 0) return 0.0;
  const int m = (j - 1) / 2;
  double c = 0.5 * kInvSqrtPi;  // a_1
  for (int i = 1; i <= m; ++i) c *= -static_cast<double>(2 * i - 1) / 2.0;
  return c;
}

AsymptoticValue moshinsky_asymptotic(cplx y, int n_terms, double min_modulus) {
  if (n_terms < 1) throw DomainError("asymptotic expansion needs at least one term");
  const double arg = std::arg(y);
  if (!(std::abs(arg) < kPi / 2.0)) {
    throw DomainError("asymptotic expansion needs -pi/2 < arg(y) < pi/2, got " +
                      std::to_string(arg));
  }
  if (std::abs(y) < min_modulus) {
    throw DomainError("asymptotic expansion needs |y| >= " + std::to_string(min_modulus));
  }
  const cplx inv = 1.0 / y;
  cplx power = inv;
  cplx sum = 0.0;
  for (int j = 1; j <= n_terms; ++j) {
    sum += asymptotic_coefficient(j) * power;
    power *= inv;
  }
  int next = n_terms + 1;
  if (next % 2 == 0) {
    power *= inv;
    ++next;
  }
  return {sum, std::abs(asymptotic_coefficient(next) * power)};
}

}  // namespace qshutter
