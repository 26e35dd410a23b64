#pragma once

#include "latfront/bvp.hpp"
#include "latfront/model.hpp"
#include "latfront/wave_system.hpp"

namespace fixtures {

using namespace latfront;

// h = 1/21 keeps the unit shift an odd number of steps (no checkerboard null modes).
inline constexpr double kOddH = 1.0 / 21.0;

inline WaveSolution solve(const WaveSystem& sys, double h, double L = 40.0, double c_guess = 0.1, double width = 2.0) {
  const Grid g = make_grid(L, h, sys.shifts());
  return newton_solve(sys, g, initial_guess(g, width, sys.components), c_guess);
}

inline WaveSystem nagumo(double a, double d1 = 1.0, double d2 = 0.0) { return wave_system(build_nagumo(d1, d2, a)); }

inline WaveSolution nagumo_wave(double a, double h, double L = 40.0) { return solve(nagumo(a), h, L); }

inline WaveSolution scaled_wave(double eps, double h, double L = 40.0) {
  return solve(scaled_nagumo(1.0, 0.0, 0.3, eps), h, L);
}

inline double pde_front(double xi) { return 1.0 / (1.0 + std::exp(-xi / std::sqrt(2.0))); }
inline double pde_speed(double a) { return std::sqrt(0.5) * (1.0 - 2.0 * a); }

}  // namespace fixtures
