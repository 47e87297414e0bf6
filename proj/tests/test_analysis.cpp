#include <doctest.h>

#include <cmath>
#include <map>

#include "fixtures.hpp"
#include "qshutter/errors.hpp"

using namespace qshutter;

namespace {

BuildupSeries synthetic(const std::vector<double>& taus, double (*ratio)(double)) {
  BuildupSeries s;
  s.tau = taus;
  for (double t : taus) {
    const double r = ratio(t);
    s.ratio_abs.push_back(r);
    s.ratio_abs2.push_back(r * r);
    s.delta.push_back(std::abs(1.0 - r));
  }
  return s;
}

struct Pipeline {
  BuildupSeries series;
  OnsetReport report;
};

const std::map<std::string, Pipeline>& pipelines() {
  static const auto all = [] {
    std::map<std::string, Pipeline> m;
    for (const auto& c : fixtures::reference_configs()) {
      auto s = fixtures::buildup(c, fixtures::dense_taus(*c.state));
      const auto r = detect_onset(s);
      m.emplace(c.label, Pipeline{std::move(s), r});
    }
    return m;
  }();
  return all;
}

// Solves (A/2) tau^{-1/2} e^{tau/2} = rho for tau > 1 by bisection: the time
// at which a tail of amplitude A reaches the fraction rho of the exponential.
double crossing_time(double a, double rho) {
  auto g = [a, rho](double t) { return t / 2.0 + std::log(a / 2.0) - 0.5 * std::log(t) - std::log(rho); };
  double lo = 1.0, hi = 200.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("exponential law") {
  CHECK(exponential_law(0.0) == 0.0);
  CHECK(exponential_law(2.0) == doctest::Approx(0.6321205588285577).epsilon(1e-15));
  CHECK(exponential_law(1e3) == 1.0);
}

TEST_CASE("synthetic pure exponential") {
  const auto s = synthetic(linear_grid(0.01, 50, 5000), exponential_law);
  const auto fit = fit_time_constant(s);
  CHECK(std::abs(fit.tau0 - 2.0) < 1e-10);
  CHECK(fit.fit_begin == doctest::Approx(0.5).epsilon(0.01));
  CHECK(fit.fit_end == doctest::Approx(6.0).epsilon(0.01));
  CHECK(fit.fit_residual < 1e-12);
  const auto curve = delta_curve(s);
  CHECK(curve.dropped == 0);
  // beyond tau ~ 10, 1 - r = e^{-tau/2} carries only a few significant digits
  const auto local = local_slopes(curve);
  for (std::size_t i = 0; i < local.size(); ++i) {
    if (std::isfinite(local[i]) && curve.tau[i] <= 10.0) {
      CHECK(local[i] == doctest::Approx(-0.5).epsilon(1e-8));
    }
  }
  for (const auto& [start, slope] : window_slopes(curve)) {
    CHECK(start >= 0.5);
    if (start <= 10.0) CHECK(slope == doctest::Approx(-0.5).epsilon(1e-8));
  }
  CHECK_THROWS_AS(detect_onset(s), NoOnsetError);
}

TEST_CASE("exact zeros of delta are dropped") {
  auto s = synthetic(linear_grid(0.1, 10, 100), exponential_law);
  s.delta[10] = 0.0;
  const auto c = delta_curve(s);
  CHECK(c.dropped == 1);
  CHECK(c.tau.size() == 99);
}

TEST_CASE("fit guards") {
  const auto short_series = synthetic(linear_grid(0.01, 4, 400), exponential_law);
  CHECK_THROWS_AS(fit_time_constant(short_series), DomainError);
  const auto wavy = synthetic(linear_grid(0.01, 20, 2000), [](double t) {
    return 1.0 - std::exp(-t / 2.0 + 0.3 * std::sin(3.0 * t));
  });
  CHECK_THROWS_AS(fit_time_constant(wavy), ConvergenceError);
}

TEST_CASE("node guard") {
  // a thick, high wall makes |r| = 1 in double precision, so phi has exact nodes
  const auto wall = build_profile({{100, 0.0}, {50, 100.0}}, 0.067);
  const double e = 0.5;
  const StationaryState s(wall, e);
  const double k = s.momentum();
  double x0 = std::arg(-s.reflection()) / (2.0 * k);
  while (x0 < 20.0) x0 += kPi / k;
  REQUIRE(x0 < 100.0);
  REQUIRE(std::abs(s.phi(x0)) < 1e-12);
  const auto& state = fixtures::symmetric_poles()[0];
  TransientSolution dummy;
  CHECK_THROWS_AS(normalize_buildup(dummy, state, wall, e, x0), DomainError);
  CHECK_NOTHROW(normalize_buildup(dummy, state, wall, e, x0 + 1.0));
}

TEST_CASE("lifetime conversion") {
  const auto c = fixtures::reference_configs()[0];
  const auto s = fixtures::buildup(c, {1.0, 2.0});
  CHECK(s.tau[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.resonance_index == 1);
  CHECK(s.sharpness == c.state->sharpness());
}

TEST_CASE("buildup law and time constant for the four configurations") {
  for (const auto& [label, p] : pipelines()) {
    const auto& s = p.series;
    const auto& r = p.report;
    double dev = 0.0, pre = 0.0;
    for (std::size_t i = 0; i < s.tau.size(); ++i) {
      const double d = std::abs(s.ratio_abs[i] - exponential_law(s.tau[i]));
      if (s.tau[i] >= 0.5 && s.tau[i] <= 8.0) dev = std::max(dev, d);
      if (s.tau[i] >= 0.5 && s.tau[i] <= std::min(6.0, r.tau_onset - 1.0)) pre = std::max(pre, d);
      CHECK(s.ratio_abs2[i] >= 0.0);
    }
    MESSAGE(label << ": tau0 " << r.tau0 << " slope " << r.fit_slope << " onset " << r.tau_onset
                  << " envelope " << r.envelope_exponent << " max deviation " << dev);
    CHECK(dev < 1e-2);
    CHECK(pre < 1e-2);
    CHECK(std::abs(r.tau0 - 2.0) <= 0.05);
    CHECK(std::abs(r.fit_slope + 0.5) <= 0.02);
    CHECK(r.fit_end <= r.tau_onset);
    CHECK(std::abs(r.envelope_exponent + 0.5) <= 0.05);
  }
  CHECK(std::abs(pipelines().at("symmetric n=1").report.tau0 - 2.0) <= 0.02);
}

TEST_CASE("normalized curves collapse") {
  // common grid: evaluate every configuration at the same tau values
  const auto taus = linear_grid(0.01, 10, 1000);
  std::vector<BuildupSeries> curves;
  for (const auto& c : fixtures::reference_configs()) curves.push_back(fixtures::buildup(c, taus));
  double abs_dev = 0.0, abs2_dev = 0.0;
  for (std::size_t a = 0; a < curves.size(); ++a) {
    for (std::size_t b = a + 1; b < curves.size(); ++b) {
      for (std::size_t i = 0; i < taus.size(); ++i) {
        abs2_dev = std::max(abs2_dev, std::abs(curves[a].ratio_abs2[i] - curves[b].ratio_abs2[i]));
        if (taus[i] >= 0.5 && taus[i] <= 8.0)
          abs_dev = std::max(abs_dev, std::abs(curves[a].ratio_abs[i] - curves[b].ratio_abs[i]));
      }
    }
  }
  CHECK(abs_dev < 1e-2);
  CHECK(abs2_dev < 1e-2);
}

TEST_CASE("onset grows with the sharpness") {
  const double t1 = pipelines().at("symmetric n=1").report.tau_onset;
  const double t2 = pipelines().at("symmetric n=2").report.tau_onset;
  const double t3 = pipelines().at("symmetric n=3").report.tau_onset;
  CHECK(t3 < t2);
  CHECK(t2 < t1);
}

TEST_CASE("onset against the exponential/tail balance") {
  // Tail amplitude A from the decomposition: |Delta|/|phi|^2 ~ A tau^{-1/2}, so
  // delta ~ e^{-tau/2} (1 - rho cos(R tau + theta)) with rho = (A/2) tau^{-1/2} e^{tau/2}.
  // A window fit of ln delta over width W picks up the ripple in two ways:
  //  - second order, the mean of ln(1 - rho cos) shifts the slope by rho^2/4;
  //  - first order, the least-squares slope of a sinusoid, at most 12 rho / (R W^2).
  // The detector fires when either reaches its threshold, so the predicted
  // onset is the crossing time for the smaller rho. For sharp states the
  // second-order term wins and the onset sits on the plain balance rho = 1.
  const double threshold = kOnsetSlopeTolerance * 0.5;
  for (const auto& c : fixtures::reference_configs()) {
    const auto taus = fixtures::dense_taus(*c.state, 30.0, 50.0);
    const auto sol = evolve_single_resonance(*c.profile, *c.state, c.state->energy(), c.x,
                                             lifetimes_to_fs(taus, *c.state));
    const auto d = buildup_decomposition(sol, *c.state);
    double a = 0.0;
    for (std::size_t i = 0; i < d.taus.size(); ++i) {
      a = std::max(a, std::abs(d.remainder[i]) / d.phi_abs2 * std::sqrt(d.taus[i]));
    }
    const double r = c.state->sharpness();
    const double rho = std::min(2.0 * std::sqrt(threshold),
                                threshold * r * kOnsetWindow * kOnsetWindow / 12.0);
    const double predicted = crossing_time(a, rho);
    const double balance = crossing_time(a, 1.0);
    const double onset = pipelines().at(c.label).report.tau_onset;
    MESSAGE(std::string(c.label) << ": onset " << onset << ", predicted " << predicted
                                 << ", plain balance " << balance);
    // the ripple phase must line up for three windows, which can only delay
    CHECK(onset > predicted - 1.0);
    CHECK(onset < predicted + 2.5);
    if (r > 100.0) CHECK(std::abs(onset - balance) < 2.0);
  }
}

TEST_CASE("local slope leaves -1/2 after the onset") {
  const auto& p = pipelines().at("symmetric n=3");
  const auto curve = delta_curve(p.series);
  const auto slopes = window_slopes(curve);
  int deviating_after = 0, total_after = 0;
  for (const auto& [start, slope] : slopes) {
    if (start >= p.report.tau_onset) {
      ++total_after;
      if (std::abs(slope + 0.5) > 0.1) ++deviating_after;
    }
  }
  CHECK(total_after > 10);
  CHECK(deviating_after > total_after / 2);
}
