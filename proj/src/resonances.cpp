#include "qshutter/resonances.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>

#include "qshutter/errors.hpp"
#include "qshutter/stationary.hpp"

namespace qshutter {

namespace {
constexpr cplx kI{0.0, 1.0};
}

std::array<cplx, 2> ResonantState::u_and_derivative(double x) const {
  if (x < 0.0 || x > profile_.length()) {
    throw DomainError("position " + std::to_string(x) + " outside [0, L]");
  }
  const std::size_t i = profile_.segment_index(x);
  const double c = profile_.constants().hbar2_over_2m;
  const auto& seg = profile_.segments()[i];
  return segment_propagator(pole_ * pole_ - seg.height / c, x - profile_.offsets()[i])
      .apply(at_offsets_[i]);
}

cplx gamow_square_integral(const ResonantState& state) {
  using Integrator = boost::math::quadrature::gauss_kronrod<double, 15>;
  const auto& profile = state.profile();
  const auto offs = profile.offsets();
  cplx total = 0.0;
  for (std::size_t i = 0; i + 1 < offs.size(); ++i) {
    // nudge inside the segment so the right-continuous lookup stays put
    const double a = offs[i];
    const double b = offs[i + 1];
    auto f = [&](double x) {
      const cplx u = state.u(std::clamp(x, a, std::nextafter(b, a)));
      return u * u;
    };
    double err = 0.0;
    total += Integrator::integrate(f, a, b, 30, kNormalizationTolerance, &err);
  }
  return total;
}

ResonantState gamow_state(const PotentialProfile& profile, cplx pole) {
  ResonantState s(profile, pole);
  s.complex_energy_ = profile.constants().energy(pole);
  if (!(pole.real() > 0.0 && pole.imag() < 0.0)) {
    throw DomainError("Gamow state expects a fourth-quadrant pole");
  }

  const double c = profile.constants().hbar2_over_2m;
  std::array<cplx, 2> v{1.0, -kI * pole};
  for (const auto& seg : profile.segments()) {
    s.at_offsets_.push_back(v);
    v = segment_propagator(pole * pole - seg.height / c, seg.width).apply(v);
  }
  s.boundary_residual_ = std::abs(v[1] - kI * pole * v[0]) / std::abs(pole * v[0]);
  if (!(s.boundary_residual_ < kGamowResidualTolerance)) {
    throw ConvergenceError("k = (" + std::to_string(pole.real()) + ", " +
                           std::to_string(pole.imag()) +
                           ") is not a pole: outgoing residual " +
                           std::to_string(s.boundary_residual_));
  }
  s.u_origin_ = 1.0;
  s.u_end_ = v[0];

  const cplx norm = gamow_square_integral(s) +
                    kI * (s.u_origin_ * s.u_origin_ + s.u_end_ * s.u_end_) / (2.0 * pole);
  const cplx scale = 1.0 / std::sqrt(norm);
  for (auto& a : s.at_offsets_) {
    a[0] *= scale;
    a[1] *= scale;
  }
  s.u_origin_ *= scale;
  s.u_end_ *= scale;
  return s;
}

cplx refine_pole(const PotentialProfile& profile, cplx seed, const PoleSearchOptions& options) {
  cplx k = seed;
  for (int it = 0; it < options.max_iterations; ++it) {
    const double h = 1e-6 * std::abs(k);
    const cplx f = pole_function(profile, k);
    const cplx df = (pole_function(profile, k + h) - pole_function(profile, k - h)) / (2.0 * h);
    const cplx dk = f / df;
    k -= dk;
    if (!std::isfinite(k.real()) || !std::isfinite(k.imag())) break;
    if (std::abs(dk) < options.tolerance) return k;
  }
  throw ConvergenceError("pole refinement from seed (" + std::to_string(seed.real()) + ", " +
                         std::to_string(seed.imag()) + ") did not converge in " +
                         std::to_string(options.max_iterations) + " iterations");
}

SearchRectangle default_search_rectangle(const PotentialProfile& profile, double e_max,
                                         double depth_factor) {
  const double k_max = profile.constants().momentum(e_max);
  return {1e-3 * k_max, k_max, -depth_factor * k_max, 0.0};
}

namespace {

// Accumulated change of arg F along the segment [a, b], subdividing until
// each step turns by less than a fixed angle.
// Change of arg F from a to b, bisecting until each step is small.
// `budget` caps the number of extra evaluations.
double arg_change(const PotentialProfile& profile, cplx a, cplx b, cplx fa, cplx fb,
                  long& budget) {
  const double d = std::arg(fb / fa);
  if (!std::isfinite(d) || --budget < 0) {
    throw ConvergenceError("argument principle: pole function unresolved near (" +
                           std::to_string(a.real()) + ", " + std::to_string(a.imag()) + ")");
  }
  if (std::abs(d) < 0.3) return d;
  const cplx mid = 0.5 * (a + b);
  const cplx fm = pole_function(profile, mid);
  return arg_change(profile, a, mid, fa, fm, budget) + arg_change(profile, mid, b, fm, fb, budget);
}

bool inside(const SearchRectangle& r, cplx k) {
  return k.real() >= r.re_min && k.real() <= r.re_max && k.imag() >= r.im_min &&
         k.imag() < r.im_max;
}

}  // namespace

int winding_count(const PotentialProfile& profile, const SearchRectangle& rect) {
  const std::array<cplx, 4> corners{cplx(rect.re_min, rect.im_max), cplx(rect.re_min, rect.im_min),
                                    cplx(rect.re_max, rect.im_min), cplx(rect.re_max, rect.im_max)};
  double total = 0.0;
  constexpr int kPanels = 64;
  long budget = 1'000'000;
  for (int side = 0; side < 4; ++side) {
    const cplx from = corners[side];
    const cplx to = corners[(side + 1) % 4];
    cplx prev = from;
    cplx f_prev = pole_function(profile, prev);
    for (int j = 1; j <= kPanels; ++j) {
      const cplx next = from + (to - from) * (static_cast<double>(j) / kPanels);
      const cplx f_next = pole_function(profile, next);
      total += arg_change(profile, prev, next, f_prev, f_next, budget);
      prev = next;
      f_prev = f_next;
    }
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

std::vector<ResonantState> find_poles(const PotentialProfile& profile, double e_max, int max_poles,
                                      const PoleSearchOptions& options) {
  if (!(e_max > 0.0)) throw DomainError("pole search needs E_max > 0");
  const auto& constants = profile.constants();
  const SearchRectangle rect = default_search_rectangle(profile, e_max, options.depth_factor);

  std::vector<cplx> poles;
  auto accept = [&](cplx k) {
    if (k.real() < 0.0) k = -std::conj(k);  // third-quadrant partner
    if (!(k.imag() < 0.0) || !(k.real() > 0.0)) return;
    for (const cplx& p : poles) {
      if (std::abs(p - k) < 1e-8 * std::abs(k)) return;
    }
    poles.push_back(k);
  };

  const auto scan = transmission_scan(profile, 2.5e-3 * e_max, 1.1 * e_max, options.scan_points,
                                      options.exec);
  for (double e : scan.peaks) accept(refine_pole(profile, constants.momentum(e), options));

  const int expected = winding_count(profile, rect);
  auto count_inside = [&] {
    return static_cast<int>(std::count_if(poles.begin(), poles.end(),
                                          [&](cplx k) { return inside(rect, k); }));
  };
  if (count_inside() != expected) {
    // broad poles leave no mark on |t|^2; sweep the rectangle with seeds
    constexpr int kRe = 24, kIm = 8;
    for (int i = 0; i < kRe && count_inside() < expected; ++i) {
      for (int j = 0; j < kIm && count_inside() < expected; ++j) {
        const cplx seed(rect.re_min + (rect.re_max - rect.re_min) * (i + 0.5) / kRe,
                        rect.im_min * (j + 0.5) / kIm);
        try {
          const cplx k = refine_pole(profile, seed, options);
          if (inside(rect, k) || inside(rect, -std::conj(k))) accept(k);
        } catch (const ConvergenceError&) {
        }
      }
    }
  }
  if (count_inside() != expected) {
    throw ConvergenceError("argument principle counts " + std::to_string(expected) +
                           " poles in the search rectangle, Newton found " +
                           std::to_string(count_inside()));
  }

  std::erase_if(poles, [&](cplx k) { return constants.energy(k).real() > e_max; });
  std::sort(poles.begin(), poles.end(), [&](cplx a, cplx b) {
    return constants.energy(a).real() < constants.energy(b).real();
  });
  if (static_cast<int>(poles.size()) > max_poles) poles.resize(static_cast<std::size_t>(max_poles));

  std::vector<ResonantState> states;
  states.reserve(poles.size());
  for (const cplx& k : poles) states.push_back(gamow_state(profile, k));
  return states;
}

cplx one_term_phi(const ResonantState& state, double energy, double x) {
  const double k = state.profile().constants().momentum(energy);
  const cplx kn = state.pole();
  return 2.0 * kI * k * state.u_origin() * state.u(x) / (k * k - kn * kn);
}

}  // namespace qshutter
