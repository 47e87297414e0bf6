// qshutter: resonance tables and transient buildup datasets for 1D
// double-barrier structures behind a suddenly opened reflecting shutter.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qshutter/analysis.hpp"
#include "qshutter/dynamics.hpp"
#include "qshutter/errors.hpp"
#include "qshutter/profile_io.hpp"
#include "qshutter/resonances.hpp"
#include "qshutter/stationary.hpp"

namespace {

using namespace qshutter;

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct Options {
  std::string profile_path;
  std::string out = "-";
  std::optional<double> e_max;
  std::optional<int> resonance;
  std::optional<double> energy;
  std::optional<double> x;
  bool auto_max = false;
  std::optional<double> tau_min, tau_max;
  std::optional<int> points;
  std::string grid;  // "", "log", "linear"
  std::string mode;  // "", "full", "single"
  double tolerance = kDefaultConvergenceTolerance;
};

/// Fixed CSV formatting: 12 significant digits, '.' decimal point.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

class CsvOut {
 public:
  explicit CsvOut(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void row(std::initializer_list<double> values) {
    auto& os = stream();
    bool first = true;
    for (double v : values) {
      if (!first) os << ',';
      os << fmt(v);
      first = false;
    }
    os << '\n';
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

double default_e_max(const PotentialProfile& profile) {
  double top = 0.0;
  for (const auto& s : profile.segments()) top = std::max(top, s.height);
  return top > 0.0 ? top : 1.0;
}

// Interior segments at the lowest interior height form the well.
std::vector<std::size_t> well_segments(const PotentialProfile& profile) {
  const auto segs = profile.segments();
  std::vector<std::size_t> ids;
  const std::size_t lo = segs.size() >= 3 ? 1 : 0;
  const std::size_t hi = segs.size() >= 3 ? segs.size() - 1 : segs.size();
  double floor = segs[lo].height;
  for (std::size_t i = lo; i < hi; ++i) floor = std::min(floor, segs[i].height);
  for (std::size_t i = lo; i < hi; ++i) {
    if (segs[i].height == floor) ids.push_back(i);
  }
  return ids;
}

double auto_max_position(const PotentialProfile& profile, double energy) {
  const StationaryState state(profile, energy);
  constexpr double kStep = 0.1;  // A
  double best_x = 0.0, best = -1.0;
  for (std::size_t i : well_segments(profile)) {
    const double a = profile.offsets()[i];
    const double b = profile.offsets()[i + 1];
    const int n = static_cast<int>(std::round((b - a) / kStep));
    for (int j = 0; j <= n; ++j) {
      const double x = a + (b - a) * j / n;
      const double v = std::norm(state.phi(x));
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
  }
  return best_x;
}

struct Selection {
  PotentialProfile profile;
  std::vector<ResonantState> poles;
  std::optional<std::size_t> resonance;  // index into poles
  double energy = 0.0;
  double x = 0.0;
  EvolutionMode mode = EvolutionMode::single_resonance;
};

Selection select(const Options& o) {
  const auto config = load_profile(o.profile_path);
  Selection s{config.profile, {}, std::nullopt, 0.0, 0.0, EvolutionMode::single_resonance};
  const double e_max = o.e_max.value_or(default_e_max(s.profile));
  s.poles = find_poles(s.profile, std::max(e_max, o.energy.value_or(0.0)));
  if (o.resonance) {
    const int n = *o.resonance;
    if (n < 1 || n > static_cast<int>(s.poles.size())) {
      throw DomainError("resonance " + std::to_string(n) + " not found below " + fmt(e_max) +
                        " eV (" + std::to_string(s.poles.size()) + " poles)");
    }
    s.resonance = static_cast<std::size_t>(n - 1);
    s.energy = s.poles[*s.resonance].energy();
  } else {
    s.energy = *o.energy;
    if (!(s.energy > 0.0)) throw DomainError("--energy-ev must be positive");
    if (s.poles.empty()) throw DomainError("no resonance found to define the lifetime unit");
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < s.poles.size(); ++i) {
      if (std::abs(s.poles[i].energy() - s.energy) < std::abs(s.poles[nearest].energy() - s.energy))
        nearest = i;
    }
    const auto& p = s.poles[nearest];
    if (std::abs(p.energy() - s.energy) <= 3.0 * p.width()) s.resonance = nearest;
  }
  s.x = o.auto_max ? auto_max_position(s.profile, s.energy) : *o.x;
  if (s.x < 0.0 || s.x > s.profile.length()) {
    throw DomainError("position " + fmt(s.x) + " A outside [0, " + fmt(s.profile.length()) + "]");
  }

  s.mode = o.mode == "full" ? EvolutionMode::full : EvolutionMode::single_resonance;
  if (!s.resonance) {
    if (o.mode == "single") {
      std::cerr << "warning: E = " << fmt(s.energy)
                << " eV is not within 3 widths of a resonance; single-resonance mode is "
                   "invalid there, running the full expansion\n";
    }
    s.mode = EvolutionMode::full;
  }
  return s;
}

const ResonantState& reference_state(const Selection& s) {
  if (s.resonance) return s.poles[*s.resonance];
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < s.poles.size(); ++i) {
    if (std::abs(s.poles[i].energy() - s.energy) < std::abs(s.poles[nearest].energy() - s.energy))
      nearest = i;
  }
  return s.poles[nearest];
}

std::vector<double> tau_grid(const Options& o, const ResonantState& ref, bool dense) {
  const double lo = o.tau_min.value_or(kDefaultTauMin);
  const double hi = o.tau_max.value_or(kDefaultTauMax);
  const std::string kind = o.grid.empty() ? (dense ? "linear" : "log") : o.grid;
  int n = o.points.value_or(kDefaultTauPoints);
  if (!o.points && dense) {
    // resolve the tail oscillation, period 2 pi / R_n
    const double step = std::min(2.0 * kPi / ref.sharpness() / 16.0, 0.01);
    n = static_cast<int>(std::ceil((hi - lo) / step)) + 1;
  }
  return kind == "log" ? log_grid(lo, hi, n) : linear_grid(lo, hi, n);
}

TransientSolution run_evolution(const Selection& s, const Options& o,
                                const std::vector<double>& taus) {
  const auto& ref = reference_state(s);
  const auto times = lifetimes_to_fs(taus, ref);
  if (s.mode == EvolutionMode::single_resonance) {
    return evolve_single_resonance(s.profile, ref, s.energy, s.x, times);
  }
  const double cutoff = default_pole_cutoff(s.energy, ref.width());
  const auto poles = find_poles(s.profile, cutoff);
  int reference = 0;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (std::abs(poles[i].pole() - ref.pole()) < 1e-9 * std::abs(ref.pole()))
      reference = static_cast<int>(i);
  }
  auto sol = evolve_full(s.profile, poles, s.energy, s.x, times, o.tolerance,
                         Execution::parallel, reference);
  if (!sol.converged) {
    std::cerr << "warning: last of " << poles.size() << " poles contributes "
              << fmt(sol.convergence_diagnostic) << " of |psi| at the final time (tolerance "
              << fmt(o.tolerance) << "); raise the cutoff to add poles\n";
  }
  return sol;
}

void describe(const Selection& s) {
  std::cerr << "E=" << fmt(s.energy) << " eV, x=" << fmt(s.x) << " A, mode="
            << (s.mode == EvolutionMode::full ? "full" : "single") << '\n';
}

int cmd_poles(const Options& o) {
  const auto config = load_profile(o.profile_path);
  const auto poles = find_poles(config.profile, o.e_max.value_or(default_e_max(config.profile)));
  CsvOut out(o.out);
  out.stream() << "n,eps_meV,gamma_meV,lifetime_fs,R_n,re_k,im_k\n";
  int n = 0;
  for (const auto& p : poles) {
    out.row({static_cast<double>(++n), 1e3 * p.energy(), 1e3 * p.width(), p.lifetime(),
             p.sharpness(), p.pole().real(), p.pole().imag()});
  }
  return 0;
}

int cmd_evolve(const Options& o) {
  const auto s = select(o);
  describe(s);
  const auto taus = tau_grid(o, reference_state(s), false);
  const auto sol = run_evolution(s, o, taus);
  CsvOut out(o.out);
  out.stream() << "t_fs,tau,re_psi,im_psi,abs2_psi,abs2_phi\n";
  const double phi2 = std::norm(sol.phi);
  for (std::size_t i = 0; i < sol.times.size(); ++i) {
    out.row({sol.times[i], sol.taus[i], sol.psi[i].real(), sol.psi[i].imag(),
             std::norm(sol.psi[i]), phi2});
  }
  return 0;
}

BuildupSeries buildup_series(const Selection& s, const Options& o, bool dense) {
  if (!s.resonance) throw DomainError("buildup analysis needs on-resonance incidence");
  const auto& ref = s.poles[*s.resonance];
  const auto sol = run_evolution(s, o, tau_grid(o, ref, dense));
  return normalize_buildup(sol, ref, s.profile, s.energy, s.x,
                           static_cast<int>(*s.resonance) + 1);
}

int cmd_buildup(const Options& o) {
  const auto s = select(o);
  describe(s);
  const auto series = buildup_series(s, o, false);
  CsvOut out(o.out);
  out.stream() << "tau,ratio_abs,ratio_abs2,law_abs2\n";
  for (std::size_t i = 0; i < series.tau.size(); ++i) {
    const double law = exponential_law(series.tau[i]);
    out.row({series.tau[i], series.ratio_abs[i], series.ratio_abs2[i], law * law});
  }
  return 0;
}

int cmd_crossover(const Options& o) {
  const auto s = select(o);
  describe(s);
  const auto series = buildup_series(s, o, true);
  const auto curve = delta_curve(series);
  const auto slopes = local_slopes(curve);
  CsvOut out(o.out);
  out.stream() << "tau,ln_delta,local_slope\n";
  for (std::size_t i = 0; i < curve.tau.size(); ++i) {
    out.row({curve.tau[i], curve.ln_delta[i], slopes[i]});
  }
  const auto report = detect_onset(series);
  const std::string summary = "tau_0=" + fmt(report.tau0) + ",tau_onset=" +
                              fmt(report.tau_onset) + ",R_n=" + fmt(series.sharpness) +
                              ",slope=" + fmt(report.fit_slope) +
                              ",envelope_exponent=" + fmt(report.envelope_exponent);
  out.stream() << "# " << summary << '\n';
  std::cerr << summary << '\n';
  return 0;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--profile", o.profile_path, "Profile config file")->required();
  cmd->add_option("--out", o.out, "Output CSV path ('-' for stdout)");
  cmd->add_option("--e-max-ev", o.e_max, "Upper energy of the pole search [eV]");
}

void add_run(CLI::App* cmd, Options& o, bool allow_energy) {
  auto* res = cmd->add_option("--resonance", o.resonance, "Incidence at resonance n (1-based)");
  if (allow_energy) {
    auto* en = cmd->add_option("--energy-ev", o.energy, "Incidence energy [eV]");
    res->excludes(en);
    en->excludes(res);
    cmd->require_option(1, 0);
  }
  auto* x = cmd->add_option("--x-angstrom", o.x, "Observation point [A]");
  auto* am = cmd->add_flag("--auto-max", o.auto_max, "Use the maximum of |phi|^2 in the well");
  x->excludes(am);
  am->excludes(x);
  cmd->add_option("--tau-min", o.tau_min, "First grid time [lifetimes]");
  cmd->add_option("--tau-max", o.tau_max, "Last grid time [lifetimes]");
  cmd->add_option("--points", o.points, "Number of grid points")->check(CLI::PositiveNumber);
  cmd->add_option("--grid", o.grid, "Grid spacing")->check(CLI::IsMember({"log", "linear"}));
  cmd->add_option("--mode", o.mode, "Pole expansion")->check(CLI::IsMember({"full", "single"}));
  cmd->add_option("--tolerance", o.tolerance, "Full-expansion convergence tolerance");
}

void validate(const Options& o, bool allow_energy) {
  if (!o.resonance && !(allow_energy && o.energy)) {
    throw CLI::ValidationError(allow_energy ? "one of --resonance or --energy-ev is required"
                                            : "--resonance is required");
  }
  if (!o.x && !o.auto_max) throw CLI::ValidationError("one of --x-angstrom or --auto-max is required");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transient buildup in double-barrier resonant-tunneling structures"};
  app.require_subcommand(1);
  Options o;

  auto* poles = app.add_subcommand("poles", "Resonance table (CSV)");
  add_common(poles, o);
  auto* evolve = app.add_subcommand("evolve", "|psi(x,k;t)|^2 at a fixed point (CSV)");
  add_common(evolve, o);
  add_run(evolve, o, true);
  auto* buildup = app.add_subcommand("buildup", "Normalized buildup |psi/phi| vs tau (CSV)");
  add_common(buildup, o);
  add_run(buildup, o, false);
  auto* crossover = app.add_subcommand("crossover", "ln delta(tau) and onset summary (CSV)");
  add_common(crossover, o);
  add_run(crossover, o, false);

  try {
    app.parse(argc, argv);
    if (evolve->parsed()) validate(o, true);
    if (buildup->parsed() || crossover->parsed()) validate(o, false);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (poles->parsed()) return cmd_poles(o);
    if (evolve->parsed()) return cmd_evolve(o);
    if (buildup->parsed()) return cmd_buildup(o);
    if (crossover->parsed()) return cmd_crossover(o);
  } catch (const ParseError& e) {
    std::cerr << "error: " << o.profile_path << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NoOnsetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const OverflowError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
