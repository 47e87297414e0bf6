#include "qshutter/stationary.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <string>

#include "qshutter/errors.hpp"

namespace qshutter {

namespace {
constexpr cplx kI{0.0, 1.0};

// (psi, psi') across one segment. Where the segment is many decay lengths
// thick, cos/sin mix e^{+-i kappa d} of very different size and a decaying
// solution drowns in rounding; there the two plane waves are carried
// separately.
std::array<cplx, 2> propagate_segment(cplx kappa2, double d, const std::array<cplx, 2>& v) {
  const cplx kappa = std::sqrt(kappa2);
  if (std::abs(kappa.imag()) * d <= 1.0) return segment_propagator(kappa2, d).apply(v);
  const cplx ratio = v[1] / (kI * kappa);
  const cplx a = 0.5 * (v[0] + ratio) * std::exp(kI * kappa * d);
  const cplx b = 0.5 * (v[0] - ratio) * std::exp(-kI * kappa * d);
  return {a + b, kI * kappa * (a - b)};
}
}  // namespace

Mat2 segment_propagator(cplx kappa2, double d) {
  const cplx z2 = kappa2 * d * d;
  if (std::abs(z2) < 1e-6) {
    // Taylor expansion around kappa = 0; remainder below 1e-22.
    const cplx c = 1.0 - z2 / 2.0 + z2 * z2 / 24.0 - z2 * z2 * z2 / 720.0;
    const cplx s_over_k = d * (1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0);
    return {c, s_over_k, -kappa2 * s_over_k, c};
  }
  const cplx kappa = std::sqrt(kappa2);
  const cplx c = std::cos(kappa * d);
  const cplx s = std::sin(kappa * d);
  return {c, s / kappa, -kappa * s, c};
}

Mat2 state_propagator(const PotentialProfile& profile, cplx k) {
  const double c = profile.constants().hbar2_over_2m;
  const cplx k2 = k * k;
  Mat2 total;
  for (const auto& seg : profile.segments()) {
    total = segment_propagator(k2 - seg.height / c, seg.width) * total;
  }
  return total;
}

TransferMatrix transfer_matrix(const PotentialProfile& profile, cplx k) {
  if (k == 0.0) throw DomainError("transfer matrix undefined at k = 0");
  const Mat2 s = state_propagator(profile, k);
  const Mat2 to_state{1.0, 1.0, kI * k, -kI * k};
  const cplx inv = 1.0 / (2.0 * kI * k);
  const Mat2 from_state{0.5, inv, 0.5, -inv};
  return from_state * s * to_state;
}

cplx pole_function(const PotentialProfile& profile, cplx k) {
  // k (S11 + S22) - i k^2 S12 + i S21 = i (psi' - i k psi) at L for the
  // solution leaving x = 0 to the left, psi(0) = 1, psi'(0) = -ik.
  const double c = profile.constants().hbar2_over_2m;
  const cplx k2 = k * k;
  std::array<cplx, 2> v{1.0, -kI * k};
  for (const auto& seg : profile.segments()) v = propagate_segment(k2 - seg.height / c, seg.width, v);
  return kI * (v[1] - kI * k * v[0]);
}

std::array<cplx, 2> propagate(const PotentialProfile& profile, cplx k,
                              std::array<cplx, 2> at_origin, double x) {
  if (x < 0.0 || x > profile.length()) {
    throw DomainError("position " + std::to_string(x) + " outside [0, L]");
  }
  const double c = profile.constants().hbar2_over_2m;
  const cplx k2 = k * k;
  const auto segs = profile.segments();
  const auto offs = profile.offsets();
  std::array<cplx, 2> v = at_origin;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const double end = offs[i + 1];
    const double d = std::min(x, end) - offs[i];
    v = segment_propagator(k2 - segs[i].height / c, d).apply(v);
    if (x <= end) break;
  }
  return v;
}

StationaryState::StationaryState(const PotentialProfile& profile, double energy)
    : profile_(profile), energy_(energy) {
  if (!(energy > 0.0)) throw DomainError("stationary state needs E > 0");
  k_ = profile.constants().momentum(energy);
  const TransferMatrix m = transfer_matrix(profile, k_);
  r_ = -m.m21 / m.m22;
  t_ = std::exp(-kI * k_ * profile.length()) / m.m22;

  const double c = profile.constants().hbar2_over_2m;
  const auto segs = profile.segments();
  std::array<cplx, 2> v{1.0 + r_, kI * k_ * (1.0 - r_)};
  at_offsets_.reserve(segs.size());
  for (const auto& seg : segs) {
    at_offsets_.push_back(v);
    v = segment_propagator(k_ * k_ - seg.height / c, seg.width).apply(v);
  }
}

std::array<cplx, 2> StationaryState::phi_and_derivative(double x) const {
  if (x < 0.0 || x > profile_.length()) {
    throw DomainError("position " + std::to_string(x) + " outside [0, L]");
  }
  const std::size_t i = profile_.segment_index(x);
  const double c = profile_.constants().hbar2_over_2m;
  const auto& seg = profile_.segments()[i];
  return segment_propagator(k_ * k_ - seg.height / c, x - profile_.offsets()[i])
      .apply(at_offsets_[i]);
}

cplx StationaryState::phi(double x) const { return phi_and_derivative(x)[0]; }

cplx stationary_wave(const PotentialProfile& profile, double energy, double x) {
  return StationaryState(profile, energy).phi(x);
}

namespace {

double transmission_at(const PotentialProfile& profile, double energy) {
  const double k = profile.constants().momentum(energy);
  // |t|^2 = 1/|M22|^2 = 4k^2/|2k M22|^2
  return 4.0 * k * k / std::norm(pole_function(profile, k));
}

}  // namespace

TransmissionScan transmission_scan(const PotentialProfile& profile, double e_min, double e_max,
                                   int n_points, Execution exec) {
  if (!(e_min > 0.0) || !(e_max > e_min)) {
    throw DomainError("transmission scan needs 0 < E_min < E_max");
  }
  if (n_points == 0) {
    n_points = static_cast<int>(std::ceil(kScanPointsPerDecade * std::log10(e_max / e_min))) + 1;
  }
  n_points = std::max(n_points, 3);
  const double ratio = std::log(e_max / e_min);

  TransmissionScan scan;
  scan.points.resize(static_cast<std::size_t>(n_points));
  auto fill = [&](int i) {
    const double e = (i == n_points - 1) ? e_max : e_min * std::exp(ratio * i / (n_points - 1));
    scan.points[static_cast<std::size_t>(i)] = {e, transmission_at(profile, e)};
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_points; ++i) fill(i);
  } else {
    for (int i = 0; i < n_points; ++i) fill(i);
  }

  // A maximum must clear both neighbours by more than rounding noise; a flat
  // |t|^2 == 1 (free propagation) produces no seeds.
  constexpr double kProminence = 1e-9;
  const auto& p = scan.points;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const double lo = std::min(p[i - 1].transmission, p[i + 1].transmission);
    if (p[i].transmission > p[i - 1].transmission && p[i].transmission >= p[i + 1].transmission &&
        p[i].transmission - lo > kProminence) {
      auto neg = [&](double e) { return -transmission_at(profile, e); };
      const auto best = boost::math::tools::brent_find_minima(neg, p[i - 1].energy,
                                                              p[i + 1].energy, 50);
      scan.peaks.push_back(best.first);
    }
  }
  return scan;
}

}  // namespace qshutter
