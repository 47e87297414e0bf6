#include "qshutter/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qshutter/errors.hpp"
#include "qshutter/moshinsky.hpp"
#include "qshutter/stationary.hpp"

namespace qshutter {

namespace {

constexpr cplx kI{0.0, 1.0};

// Time-independent factors of one pole pair (k_n, -k_n^*).
struct PoleTerm {
  cplx pole;
  cplx t_plus;   // T_n
  cplx t_minus;  // T_{-n}
};

struct Kernel {
  PhysicalConstants constants;
  double k = 0.0;
  cplx phi{0.0};
  std::vector<PoleTerm> terms;

  // Contribution of one pole pair, -i [T_n M(y_{k_n}) + T_{-n} M(y_{-k_n^*})].
  cplx pole_part(const PoleTerm& p, double t) const {
    const cplx m_plus = moshinsky_m(MoshinskyArgument::physical(p.pole, t, constants));
    const cplx m_minus =
        moshinsky_m(MoshinskyArgument::physical(-std::conj(p.pole), t, constants));
    return -kI * (p.t_plus * m_plus + p.t_minus * m_minus);
  }

  cplx psi(double t) const {
    const cplx m_k = moshinsky_m(MoshinskyArgument::physical(k, t, constants));
    const cplx m_mk = moshinsky_m(MoshinskyArgument::physical(-k, t, constants));
    cplx value = phi * m_k - std::conj(phi) * m_mk;
    for (const auto& p : terms) value += pole_part(p, t);
    return value;
  }
};

Kernel make_kernel(const PotentialProfile& profile, std::span<const ResonantState> poles,
                   double energy, double position) {
  if (position < 0.0 || position > profile.length()) {
    throw DomainError("position " + std::to_string(position) + " outside [0, L]");
  }
  Kernel kernel;
  kernel.constants = profile.constants();
  kernel.k = profile.constants().momentum(energy);
  kernel.phi = StationaryState(profile, energy).phi(position);
  const double k = kernel.k;
  for (const auto& s : poles) {
    const cplx kn = s.pole();
    const cplx uu = s.u_origin() * s.u(position);
    kernel.terms.push_back({kn, 2.0 * k * uu / (k * k - kn * kn),
                            2.0 * k * std::conj(uu) / (k * k - std::conj(kn * kn))});
  }
  return kernel;
}

void check_grid(std::span<const double> times) {
  if (times.empty()) throw DomainError("time grid is empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw DomainError("time grid must be strictly positive");
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw DomainError("time grid must be strictly increasing");
    }
  }
}

void evaluate(const Kernel& kernel, TransientSolution& out, Execution exec) {
  const auto n = static_cast<long>(out.times.size());
  out.psi.resize(out.times.size());
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out.psi[i] = kernel.psi(out.times[i]);
  } else {
    for (long i = 0; i < n; ++i) out.psi[i] = kernel.psi(out.times[i]);
  }
}

TransientSolution prepare(const Kernel& kernel, double energy, double position,
                          std::span<const double> times, double reference_width,
                          EvolutionMode mode) {
  check_grid(times);
  TransientSolution s;
  s.mode = mode;
  s.energy = energy;
  s.position = position;
  s.phi = kernel.phi;
  s.reference_width = reference_width;
  s.pole_count = static_cast<int>(kernel.terms.size());
  s.times.assign(times.begin(), times.end());
  s.taus.reserve(times.size());
  const double hbar = kernel.constants.hbar;
  for (double t : times) s.taus.push_back(t * reference_width / hbar);
  return s;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi >= lo)) throw DomainError("invalid log grid");
  if (n == 1) return {lo};
  std::vector<double> g(static_cast<std::size_t>(n));
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
  g.back() = hi;
  return g;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 1 || !(hi >= lo)) throw DomainError("invalid linear grid");
  if (n == 1) return {lo};
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  g.back() = hi;
  return g;
}

std::vector<double> lifetimes_to_fs(std::span<const double> taus, const ResonantState& state) {
  std::vector<double> t;
  t.reserve(taus.size());
  for (double tau : taus) t.push_back(tau * state.lifetime());
  return t;
}

TransientSolution evolve_single_resonance(const PotentialProfile& profile,
                                          const ResonantState& state, double energy,
                                          double position, std::span<const double> times_fs,
                                          Execution exec) {
  const Kernel kernel = make_kernel(profile, std::span(&state, 1), energy, position);
  TransientSolution s = prepare(kernel, energy, position, times_fs, state.width(),
                                EvolutionMode::single_resonance);
  evaluate(kernel, s, exec);
  return s;
}

TransientSolution evolve_full(const PotentialProfile& profile,
                              std::span<const ResonantState> poles, double energy,
                              double position, std::span<const double> times_fs, double tolerance,
                              Execution exec, int reference) {
  if (poles.empty()) throw DomainError("full evolution needs at least one pole");
  if (reference < 0) {
    auto nearest = std::min_element(poles.begin(), poles.end(), [&](const auto& a, const auto& b) {
      return std::abs(a.energy() - energy) < std::abs(b.energy() - energy);
    });
    reference = static_cast<int>(nearest - poles.begin());
  }
  if (reference >= static_cast<int>(poles.size())) throw DomainError("reference pole out of range");

  const Kernel kernel = make_kernel(profile, poles, energy, position);
  TransientSolution s = prepare(kernel, energy, position, times_fs,
                                poles[static_cast<std::size_t>(reference)].width(),
                                EvolutionMode::full);
  evaluate(kernel, s, exec);

  const double t_end = s.times.back();
  const cplx last = kernel.pole_part(kernel.terms.back(), t_end);
  const double scale = std::abs(s.psi.back());
  s.convergence_diagnostic = scale > 0.0 ? std::abs(last) / scale
                                         : std::numeric_limits<double>::infinity();
  s.converged = s.convergence_diagnostic <= tolerance;
  return s;
}

double default_pole_cutoff(double energy, double widest_width) {
  return std::max(4.0 * energy, energy + 10.0 * widest_width);
}

BuildupDecomposition buildup_decomposition(const TransientSolution& solution,
                                           const ResonantState& state) {
  if (solution.mode != EvolutionMode::single_resonance) {
    throw DomainError("buildup decomposition needs a single-resonance solution");
  }
  BuildupDecomposition d;
  d.phi_abs2 = std::norm(solution.phi);
  const double hbar = state.profile().constants().hbar;
  const std::size_t n = solution.times.size();
  d.taus.resize(n);
  d.exponential_part.resize(n);
  d.remainder.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = solution.times[i] * state.width() / hbar;
    const double rise = -std::expm1(-tau / 2.0);
    const double a = d.phi_abs2 * rise * rise;
    const cplx p = solution.psi[i];
    d.taus[i] = tau;
    d.exponential_part[i] = a;
    // re^2 + im^2 - a with two roundings
    d.remainder[i] = std::fma(p.real(), p.real(), std::fma(p.imag(), p.imag(), -a));
  }
  return d;
}

}  // namespace qshutter
