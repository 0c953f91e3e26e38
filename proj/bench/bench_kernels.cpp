#include <chrono>
#include <cstddef>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cohvort/coherence.hpp"
#include "cohvort/potential.hpp"
#include "cohvort/singularity.hpp"

using namespace cohvort;

namespace {

/// Best wall time over `reps` runs, in milliseconds.
template <typename Fn>
double time_best_ms(int reps, Fn&& fn) {
  double best = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(stop - start).count();
    if (r == 0 || ms < best) {
      best = ms;
    }
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--quick") {
      quick = true;
    } else {
      std::cerr << "usage: bench_kernels [--quick]\n";
      return 2;
    }
  }

  const std::size_t n = quick ? 160 : 800;
  const int reps = quick ? 1 : 3;

  const double energy = 1.0;
  const Ensemble ensemble = two_member_mixture(PotentialProfile::step(0.99), energy);
  const Axis x_axis(-15.0, -0.01, n);
  const Axis xp_axis(0.01, 15.0, n);

#ifdef _OPENMP
  std::cout << "threads: " << omp_get_max_threads() << "\n";
#else
  std::cout << "threads: 1 (built without OpenMP)\n";
#endif
  std::cout << "grid: " << n << " x " << n << ", best of " << reps << "\n";

  const CoherenceField serial_field = sample_grid_serial(ensemble, x_axis, xp_axis);
  const CoherenceField parallel_field = sample_grid(ensemble, x_axis, xp_axis);
  if (!(serial_field.values() == parallel_field.values())) {
    std::cerr << "[FAIL] sample_grid: serial and parallel fields differ bitwise\n";
    return 1;
  }

  const double sample_serial_ms =
      time_best_ms(reps, [&] { sample_grid_serial(ensemble, x_axis, xp_axis); });
  const double sample_parallel_ms =
      time_best_ms(reps, [&] { sample_grid(ensemble, x_axis, xp_axis); });
  std::cout << "sample_grid      serial " << sample_serial_ms << " ms, parallel "
            << sample_parallel_ms << " ms, speedup " << sample_serial_ms / sample_parallel_ms
            << "x\n";

  const WindingMap serial_map = winding_map_serial(serial_field);
  const WindingMap parallel_map = winding_map(parallel_field);
  if (!(serial_map == parallel_map)) {
    std::cerr << "[FAIL] winding_map: serial and parallel maps differ\n";
    return 1;
  }

  const double winding_serial_ms = time_best_ms(reps, [&] { winding_map_serial(serial_field); });
  const double winding_parallel_ms = time_best_ms(reps, [&] { winding_map(serial_field); });
  std::cout << "winding_map      serial " << winding_serial_ms << " ms, parallel "
            << winding_parallel_ms << " ms, speedup " << winding_serial_ms / winding_parallel_ms
            << "x\n";

  std::cout << "[PASS] parallel kernels match the serial reference bitwise\n";
  return 0;
}
