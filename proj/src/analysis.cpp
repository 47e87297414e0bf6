#include "qshutter/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qshutter/errors.hpp"
#include "qshutter/stationary.hpp"

namespace qshutter {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct LineFit {
  double slope = kNaN;
  double intercept = kNaN;
  double rms = kNaN;
  std::size_t n = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  f.n = x.size();
  if (f.n < 2) return f;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < f.n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(f.n);
  my /= static_cast<double>(f.n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < f.n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < f.n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / static_cast<double>(f.n));
  return f;
}

bool deviates(double slope) {
  return std::isfinite(slope) && std::abs(slope + 0.5) > kOnsetSlopeTolerance * 0.5;
}

}  // namespace

double exponential_law(double tau) { return -std::expm1(-tau / 2.0); }

BuildupSeries normalize_buildup(const TransientSolution& solution, const ResonantState& state,
                                const PotentialProfile& profile, double energy, double position,
                                int resonance_index) {
  const cplx phi = stationary_wave(profile, energy, position);
  if (std::abs(phi) < 1e-12) {
    throw DomainError("|phi(x, k)| vanishes at x = " + std::to_string(position) +
                      "; normalization undefined");
  }
  BuildupSeries s;
  s.resonance_index = resonance_index;
  s.sharpness = state.sharpness();
  const double hbar = profile.constants().hbar;
  const std::size_t n = solution.times.size();
  s.tau.reserve(n);
  s.ratio_abs.reserve(n);
  s.ratio_abs2.reserve(n);
  s.delta.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx r = solution.psi[i] / phi;
    const double a = std::abs(r);
    s.tau.push_back(solution.times[i] * state.width() / hbar);
    s.ratio_abs.push_back(a);
    s.ratio_abs2.push_back(std::norm(r));
    s.delta.push_back(std::abs(1.0 - a));
  }
  return s;
}

DeltaCurve delta_curve(const BuildupSeries& series) {
  DeltaCurve c;
  for (std::size_t i = 0; i < series.tau.size(); ++i) {
    if (series.delta[i] > 0.0) {
      c.tau.push_back(series.tau[i]);
      c.ln_delta.push_back(std::log(series.delta[i]));
    } else {
      ++c.dropped;
    }
  }
  return c;
}

std::vector<double> local_slopes(const DeltaCurve& curve, double width) {
  // prefix sums of 1, x, y, xx, xy give each window's fit in O(1)
  const std::size_t n = curve.tau.size();
  std::vector<double> sx(n + 1, 0.0), sy(n + 1, 0.0), sxx(n + 1, 0.0), sxy(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = curve.tau[i], y = curve.ln_delta[i];
    sx[i + 1] = sx[i] + x;
    sy[i + 1] = sy[i] + y;
    sxx[i + 1] = sxx[i] + x * x;
    sxy[i + 1] = sxy[i] + x * y;
  }
  std::vector<double> slopes(n, kNaN);
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double center = curve.tau[i];
    while (curve.tau[lo] < center - width / 2.0) ++lo;
    while (hi < n && curve.tau[hi] <= center + width / 2.0) ++hi;
    const double m = static_cast<double>(hi - lo);
    if (hi - lo < 3) continue;
    const double Sx = sx[hi] - sx[lo], Sy = sy[hi] - sy[lo];
    const double Sxx = sxx[hi] - sxx[lo], Sxy = sxy[hi] - sxy[lo];
    const double den = m * Sxx - Sx * Sx;
    if (den > 0.0) slopes[i] = (m * Sxy - Sx * Sy) / den;
  }
  return slopes;
}

std::vector<std::pair<double, double>> window_slopes(const DeltaCurve& curve, double width) {
  std::vector<std::pair<double, double>> out;
  if (curve.tau.empty()) return out;
  const double end = curve.tau.back();
  std::size_t i = 0;
  for (double start = kFitStart; start + width <= end + 1e-12; start += width) {
    std::vector<double> x, y;
    while (i < curve.tau.size() && curve.tau[i] < start) ++i;
    for (std::size_t j = i; j < curve.tau.size() && curve.tau[j] < start + width; ++j) {
      x.push_back(curve.tau[j]);
      y.push_back(curve.ln_delta[j]);
    }
    out.emplace_back(start, x.size() >= 3 ? fit_line(x, y).slope : kNaN);
  }
  return out;
}

OnsetReport fit_time_constant(const BuildupSeries& series) {
  if (series.tau.empty() || series.tau.front() > kFitStart || series.tau.back() < kFitEndMax) {
    throw DomainError("time-constant fit needs the series to cover tau in [0.5, 6]");
  }
  double end = kFitEndMax;
  for (const auto& [start, slope] : window_slopes(delta_curve(series))) {
    if (start >= kFitEndMax) break;
    if (deviates(slope)) {
      end = start;
      break;
    }
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < series.tau.size(); ++i) {
    const double tau = series.tau[i];
    const double gap = 1.0 - series.ratio_abs[i];
    if (tau >= kFitStart && tau <= end && gap > 0.0) {
      x.push_back(tau);
      y.push_back(std::log(gap));
    }
  }
  if (x.size() < 3) throw ConvergenceError("too few points in the exponential window");
  const LineFit f = fit_line(x, y);
  OnsetReport r;
  r.fit_begin = kFitStart;
  r.fit_end = end;
  r.fit_slope = f.slope;
  r.fit_residual = f.rms;
  r.tau0 = -1.0 / f.slope;
  r.tau_onset = kNaN;
  r.envelope_exponent = kNaN;
  if (!(f.rms < kFitResidualLimit)) {
    throw ConvergenceError("log-linear fit residual " + std::to_string(f.rms) +
                           " indicates the window overlaps the onset");
  }
  return r;
}

double envelope_exponent(const BuildupSeries& series, double tau_begin, double tau_end,
                         double window) {
  std::vector<double> x, y;
  std::size_t i = 0;
  for (double start = tau_begin; start + window <= tau_end + 1e-12; start += window) {
    double peak = 0.0;
    while (i < series.tau.size() && series.tau[i] < start) ++i;
    for (std::size_t j = i; j < series.tau.size() && series.tau[j] < start + window; ++j) {
      const double law = exponential_law(series.tau[j]);
      peak = std::max(peak, std::abs(series.ratio_abs2[j] - law * law));
    }
    if (peak > 0.0) {
      x.push_back(std::log(start + window / 2.0));
      y.push_back(std::log(peak));
    }
  }
  if (x.size() < 4) return kNaN;
  return fit_line(x, y).slope;
}

OnsetReport detect_onset(const BuildupSeries& series) {
  const auto windows = window_slopes(delta_curve(series));
  int run = 0;
  double onset = kNaN;
  for (std::size_t i = 0; i < windows.size(); ++i) {
    run = deviates(windows[i].second) ? run + 1 : 0;
    if (run == kOnsetPersistence) {
      onset = windows[i + 1 - kOnsetPersistence].first;
      break;
    }
  }
  if (!std::isfinite(onset)) {
    throw NoOnsetError("no onset in range: ln delta keeps slope -1/2 up to tau = " +
                       std::to_string(series.tau.empty() ? 0.0 : series.tau.back()));
  }
  OnsetReport r = fit_time_constant(series);
  r.tau_onset = onset;
  // the tail oscillates with period 2 pi / R_n; windows must hold many periods
  const double tau_end = series.tau.back();
  const double window = std::max(kOnsetWindow, 20.0 * kPi / std::max(series.sharpness, 1.0));
  r.envelope_exponent = envelope_exponent(series, onset + (tau_end - onset) / 2.0, tau_end, window);
  return r;
}

}  // namespace qshutter
