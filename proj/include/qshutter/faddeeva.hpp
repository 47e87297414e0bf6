#pragma once

#include "qshutter/units.hpp"

namespace qshutter {

/// value = mantissa * exp(log_scale). Keeps e^{z^2}-sized quantities
/// representable far beyond the double range.
struct ScaledComplex {
  cplx mantissa{0.0};
  double log_scale = 0.0;

  /// Unscaled value; throws OverflowError when it exceeds the double range.
  cplx value() const;
  /// log |value|; -inf for zero.
  double log_abs() const;
  /// Rescales so that log_scale == 0 when that is representable.
  ScaledComplex normalized() const;

  friend ScaledComplex operator-(const ScaledComplex& a, const ScaledComplex& b);
  friend ScaledComplex operator+(const ScaledComplex& a, const ScaledComplex& b);
  friend ScaledComplex operator*(double s, const ScaledComplex& a) {
    return {s * a.mantissa, a.log_scale};
  }
};

/// exp(sign * z^2) with the exponent formed by an error-free product, so the
/// phase stays accurate when |z|^2 is large.
ScaledComplex exp_square(cplx z, double sign = 1.0);

/// Faddeeva function w(z) = e^{-z^2} erfc(-iz) for all complex z.
/// Upper half plane: relative error below 1e-13. Lower half plane:
/// w(z) = 2 e^{-z^2} - w(-z). Throws OverflowError when |w| is not
/// representable; use faddeeva_scaled there.
cplx faddeeva(cplx z);
ScaledComplex faddeeva_scaled(cplx z);

}  // namespace qshutter
