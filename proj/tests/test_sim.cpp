#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "latfront/sim.hpp"

using namespace latfront;
using namespace fixtures;

namespace {

const LatticeModel& lattice() {
  static const LatticeModel m = build_nagumo(1.0, 0.0, 0.3);
  return m;
}

Trajectory run(double position, int stride = 20, double dt = 0.05, double T = 200.0, const LatticeModel& m = lattice()) {
  return integrate(m, front_state(400, position, 2.0, m.period), dt, T, stride);
}

const Trajectory& reference_run() {
  static const Trajectory t = run(300.0);
  return t;
}

double crossing_of(const Vec& xi, const Profile& v) {
  for (int i = 1; i < xi.size(); ++i)
    if (v(i - 1, 0) < 0.5 && v(i, 0) >= 0.5) return xi(i - 1) + (0.5 - v(i - 1, 0)) / (v(i, 0) - v(i - 1, 0)) * (xi(i) - xi(i - 1));
  return std::nan("");
}

}  // namespace

TEST_CASE("equilibria do not drift") {
  for (double u : {0.0, 1.0}) {
    SimState s;
    s.sites.assign(64, u);
    s.left = {u};
    s.right = {u};
    const Trajectory t = integrate(lattice(), s, 0.05, 20.0, 10);
    for (const auto& snap : t.snapshots)
      for (double x : snap) CHECK(x == u);
  }
}

TEST_CASE("RK4 is fourth order") {
  auto final_state = [](double dt) { return run(300.0, 1000000, dt, 10.0).snapshots.back(); };
  const auto a = final_state(0.05), b = final_state(0.025), c = final_state(0.0125);
  double e1 = 0.0, e2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    e1 = std::max(e1, std::abs(a[i] - b[i]));
    e2 = std::max(e2, std::abs(b[i] - c[i]));
  }
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 <= 16.5);
}

TEST_CASE("step size guard") {
  const SimState s = front_state(100, 50.0, 2.0);
  const double bound = max_stable_dt(lattice(), s);
  CHECK(bound == doctest::Approx(0.05319).epsilon(1e-3));
  CHECK_THROWS_AS(integrate(lattice(), s, 1.1 * bound, 1.0), Error);
}

TEST_CASE("speed against the wave solver") {
  const SpeedMeasurement m = measure_speed(reference_run());
  const WaveSolution w = nagumo_wave(0.3, 0.05);
  CHECK(std::abs(m.c - w.c) <= 1e-2);
  CHECK(m.c > 0.0);
  const SpeedMeasurement mm = measure_speed(reference_run(), 0.5, 0, 0.5, Locator::Mass);
  CHECK(std::abs(mm.c - w.c) <= 1e-4);
}

TEST_CASE("standing front at the symmetric point") {
  const Trajectory t = run(200.0, 20, 0.05, 200.0, build_nagumo(1.0, 0.0, 0.5));
  CHECK(std::abs(measure_speed(t).c) <= 1e-3);
}

TEST_CASE("speed invariances") {
  const double c = measure_speed(reference_run()).c;
  CHECK(std::abs(measure_speed(run(290.0)).c - c) <= 1e-6);
  CHECK(std::abs(measure_speed(run(300.0, 7)).c - c) <= 1e-6);
  const double cm = measure_speed(reference_run(), 0.5, 0, 0.5, Locator::Mass).c;
  CHECK(std::abs(measure_speed(run(290.0), 0.5, 0, 0.5, Locator::Mass).c - cm) <= 1e-6);
  CHECK(std::abs(measure_speed(run(300.0, 7), 0.5, 0, 0.5, Locator::Mass).c - cm) <= 1e-6);
}

TEST_CASE("co-moving profile") {
  const double c = measure_speed(reference_run()).c;
  const ExtractedProfile p = extract_profile(reference_run(), c);
  CHECK(p.scatter <= 5e-3);
  CHECK(p.traveling_wave);

  const WaveSolution w = nagumo_wave(0.3, 0.05);
  const double x0 = crossing_of(p.xi, p.values);
  double worst = 0.0;
  for (int i = 0; i < p.xi.size(); ++i)
    if (p.counts(i) > 0) worst = std::max(worst, std::abs(p.values(i, 0) - w.sample(0, p.xi(i) - x0)));
  CHECK(worst <= 5e-3);

  const ExtractedProfile off = extract_profile(reference_run(), 1.1 * c);
  CHECK(off.scatter >= 5.0 * p.scatter);
  CHECK_THROWS_AS(extract_profile(reference_run(), 0.0), Error);
}

TEST_CASE("constant trajectory gives a flat profile") {
  SimState s;
  s.sites.assign(50, 1.0);
  s.left = {1.0};
  s.right = {1.0};
  const ExtractedProfile p = extract_profile(integrate(lattice(), s, 0.05, 10.0, 2), 0.3);
  CHECK(p.scatter == 0.0);
  for (int i = 0; i < p.xi.size(); ++i)
    if (p.counts(i) > 0) CHECK(p.values(i, 0) == 1.0);
}

TEST_CASE("monotonicity check") {
  CHECK(check_monotonicity(nagumo_wave(0.3, 0.05).profile).monotone);
  const Grid g = make_grid(10.0, 0.1, {0.0});
  Profile p = initial_guess(g, 1.0, 1);
  const MonotonicityReport ok = check_monotonicity(p);
  CHECK(ok.monotone);
  CHECK(ok.direction == 1);
  CHECK(ok.min_step >= 0.0);
  p(120, 0) += 0.05;
  const MonotonicityReport bad = check_monotonicity(p);
  CHECK_FALSE(bad.monotone);
  CHECK(bad.worst_index == 120);
  CHECK(bad.worst_component == 0);
  CHECK(bad.worst_violation > 0.03);
}
