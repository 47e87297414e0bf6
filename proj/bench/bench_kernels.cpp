// Serial vs parallel timings of the data-parallel kernels: the |t|^2 energy
// scan and the time-grid evaluation of the pole expansion.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "qshutter/dynamics.hpp"
#include "qshutter/resonances.hpp"
#include "qshutter/stationary.hpp"

using namespace qshutter;

namespace {

double best_of(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-28s serial %9.4f s   parallel %9.4f s   speedup %5.2fx\n", name, serial,
              parallel, serial / parallel);
}

}  // namespace

int main() {
  const auto profile = build_profile({{30, 0.5}, {100, 0.0}, {30, 0.5}}, 0.0669);
  constexpr int kReps = 5;

  double sink = 0.0;
  auto scan = [&](Execution exec) {
    return best_of(kReps, [&] {
      const auto s = transmission_scan(profile, 1e-3, 0.5, 200000, exec);
      sink += s.points.back().transmission;
    });
  };
  report("transmission scan (2e5 E)", scan(Execution::serial), scan(Execution::parallel));

  const auto poles = find_poles(profile, 2.0);
  const auto& ref = poles.front();
  const auto times = lifetimes_to_fs(linear_grid(0.01, 50.0, 200000), ref);
  auto single = [&](Execution exec) {
    return best_of(kReps, [&] {
      const auto sol = evolve_single_resonance(profile, ref, ref.energy(), 80.0, times, exec);
      sink += std::abs(sol.psi.back());
    });
  };
  report("single resonance (2e5 t)", single(Execution::serial), single(Execution::parallel));

  auto full = [&](Execution exec) {
    return best_of(kReps, [&] {
      const auto sol = evolve_full(profile, poles, ref.energy(), 80.0, times, 1.0, exec, 0);
      sink += std::abs(sol.psi.back());
    });
  };
  char label[64];
  std::snprintf(label, sizeof label, "full, %zu poles (2e5 t)", poles.size());
  report(label, full(Execution::serial), full(Execution::parallel));

  std::printf("checksum %.6g\n", sink);
}
