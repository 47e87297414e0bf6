#include "qshutter/faddeeva.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qshutter/errors.hpp"

namespace qshutter {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kInvSqrtPi = 0.56418958354775628695;
// log(DBL_MAX) with a little headroom for the mantissa.
constexpr double kMaxLog = 709.0;

// Trapezoidal rule for (i/pi) int e^{-t^2}/(z-t) dt. Nodes sit midway between
// multiples of h around Re z, which keeps the pole correction term bounded.
// Absolute error ~ exp(-pi^2/h^2) ~ 7e-18.
constexpr double kStep = 0.5;
constexpr double kNodeCutoff = 6.8;  // e^{-t^2} < 1e-20 beyond
constexpr double kAsymptoticRadius = 50.0;

cplx w_asymptotic(cplx z) {
  // w(z) ~ i/(sqrt(pi) z) * sum_m (2m-1)!! / (2 z^2)^m
  const cplx inv2z2 = 1.0 / (2.0 * z * z);
  cplx term = 1.0;
  cplx sum = 1.0;
  for (int m = 1; m < 60; ++m) {
    term *= static_cast<double>(2 * m - 1) * inv2z2;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return kI * kInvSqrtPi * sum / z;
}

cplx w_trapezoid(cplx z) {
  const double x = z.real();
  const double y = z.imag();
  const double h = kStep;
  // t_n = x + (n + 1/2) h, restricted to |t_n| < kNodeCutoff
  const long n_lo = static_cast<long>(std::ceil((-kNodeCutoff - x) / h - 0.5));
  const long n_hi = static_cast<long>(std::floor((kNodeCutoff - x) / h - 0.5));
  cplx sum = 0.0;
  for (long n = n_lo; n <= n_hi; ++n) {
    const double offset = (static_cast<double>(n) + 0.5) * h;
    const double t = x + offset;
    sum += std::exp(-t * t) / cplx(-offset, y);
  }
  cplx w = kI * (h / kPi) * sum;
  if (y < kPi / h) {
    // residue of the pole at t = z; q = -exp(-2 pi y / h) at the midway offset
    const double q = std::exp(-2.0 * kPi * y / h);
    const ScaledComplex e = exp_square(z, -1.0);
    const double log_scale = e.log_scale - 2.0 * kPi * y / h;
    w += 2.0 * e.mantissa * std::exp(log_scale) / (1.0 + q);
  }
  return w;
}

// Im z >= 0
cplx w_upper(cplx z) {
  if (std::abs(z) > kAsymptoticRadius) {
    cplx w = w_asymptotic(z);
    if (z.imag() == 0.0) w.real(std::exp(-z.real() * z.real()));
    return w;
  }
  cplx w = w_trapezoid(z);
  // Re w(x) = exp(-x^2) exactly on the real axis.
  if (z.imag() == 0.0) w.real(std::exp(-z.real() * z.real()));
  return w;
}

}  // namespace

ScaledComplex exp_square(cplx z, double sign) {
  const double x = z.real();
  const double y = z.imag();
  const double re = sign * (x - y) * (x + y);
  // 2xy = 2(p + e) exactly
  const double p = x * y;
  const double e = std::fma(x, y, -p);
  const double phase = 2.0 * sign * p;
  const double correction = 2.0 * sign * e;
  const double c = std::cos(phase);
  const double s = std::sin(phase);
  const cplx unit(c - s * correction, s + c * correction);
  return {unit, re};
}

cplx ScaledComplex::value() const {
  if (mantissa == 0.0) return 0.0;
  const double la = log_abs();
  if (la > kMaxLog) throw OverflowError("value exceeds double range (log|v| = " +
                                        std::to_string(la) + ")");
  if (log_scale < -kMaxLog - 40.0) {
    // split to avoid a premature underflow of exp(log_scale)
    return (mantissa * std::exp(log_scale / 2.0)) * std::exp(log_scale / 2.0);
  }
  return mantissa * std::exp(log_scale);
}

double ScaledComplex::log_abs() const {
  if (mantissa == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(mantissa)) + log_scale;
}

ScaledComplex ScaledComplex::normalized() const {
  if (mantissa == 0.0) return {0.0, 0.0};
  const double la = log_abs();
  if (std::abs(log_scale) < kMaxLog && la < kMaxLog && la > -kMaxLog) {
    return {mantissa * std::exp(log_scale), 0.0};
  }
  const double shift = std::log(std::abs(mantissa));
  return {mantissa / std::abs(mantissa), log_scale + shift};
}

ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b) {
  if (a.mantissa == 0.0) return b;
  if (b.mantissa == 0.0) return a;
  const double scale = std::max(a.log_scale, b.log_scale);
  return {a.mantissa * std::exp(a.log_scale - scale) + b.mantissa * std::exp(b.log_scale - scale),
          scale};
}

ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b) {
  return a + ScaledComplex{-b.mantissa, b.log_scale};
}

ScaledComplex faddeeva_scaled(cplx z) {
  if (z.imag() >= 0.0) return {w_upper(z), 0.0};
  const ScaledComplex two_exp = 2.0 * exp_square(z, -1.0);
  return (two_exp - ScaledComplex{w_upper(-z), 0.0}).normalized();
}

cplx faddeeva(cplx z) {
  if (z.imag() >= 0.0) return w_upper(z);
  return faddeeva_scaled(z).value();
}

}  // namespace qshutter
