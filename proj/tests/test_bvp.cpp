#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "latfront/sim.hpp"

using namespace latfront;
using namespace fixtures;

TEST_CASE("grid construction") {
  const Grid g = make_grid(40.0, 0.5, {-1.0, 0.0, 1.0});
  CHECK(g.n == 161);
  CHECK(g.steps(-1.0) == -2);
  CHECK(g.steps(0.0) == 0);
  CHECK(g.steps(1.0) == 2);
  CHECK(make_grid(60.0, 1.0, {-2, -1, 0, 1, 2}).n == 121);
  try {
    make_grid(40.0, 0.3, {-1.0, 0.0, 1.0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidInput);
    CHECK(std::string(e.what()).find("h = 0.29999") != std::string::npos);
    CHECK(std::string(e.what()).find("r = -1") != std::string::npos);
  }
  CHECK_THROWS_AS(make_grid(40.0, -0.1, {0.0}), Error);
}

TEST_CASE("initial guess") {
  const Grid g = make_grid(40.0, 0.5, {0.0});
  const Profile p = initial_guess(g, std::sqrt(2.0), 2);
  CHECK(p(80, 0) == doctest::Approx(0.5));
  CHECK(p(80, 1) == doctest::Approx(0.5));
  CHECK(p(0, 0) < 1e-12);
  CHECK(p(160, 1) > 1.0 - 1e-12);
  for (int i = 0; i < g.n; ++i) CHECK(p(i, 0) == doctest::Approx(pde_front(g.node(i))).epsilon(1e-14));

  // c u' - u'' + u (u - a)(u - 1) = 0 for the width-sqrt(2) logistic, checked by differences
  const double a = 0.3, c = pde_speed(a), d = 1e-4;
  for (double x : {-3.0, -0.5, 0.0, 1.2, 4.0}) {
    const double u = pde_front(x);
    const double du = (pde_front(x + d) - pde_front(x - d)) / (2 * d);
    const double ddu = (pde_front(x + d) - 2 * u + pde_front(x - d)) / (d * d);
    CHECK(std::abs(c * du - ddu + u * (u - a) * (u - 1.0)) < 1e-7);
  }
}

TEST_CASE("residual of equilibria and of the continuum front") {
  const WaveSystem sys = nagumo(0.3);
  const Grid g = make_grid(20.0, 0.25, sys.shifts());
  // off-grid values are clamped to 0 on the left and 1 on the right, so a constant state
  // is residual-free except within one stencil width of the opposite end
  const int band = g.steps(1.0);
  for (double v : {0.0, 1.0}) {
    const Profile p = Profile::Constant(g.n, 1, v);
    for (double c : {-0.3, 0.0, 0.7}) {
      const Vec r = assemble_residual(sys, g, p, c);
      const int from = v == 0.0 ? 0 : band, to = v == 0.0 ? g.n - band : g.n;
      CHECK(r.segment(from, to - from).cwiseAbs().maxCoeff() == 0.0);
      CHECK(r.cwiseAbs().maxCoeff() == 1.0);
    }
  }
  const WaveSystem sc = scaled_nagumo(1.0, 0.0, 0.3, 0.02);
  const Grid gs = make_grid(40.0, 0.02, sc.shifts());
  Profile p(gs.n, 1);
  for (int i = 0; i < gs.n; ++i) p(i, 0) = pde_front(gs.node(i));
  CHECK(assemble_residual(sc, gs, p, 0.2828427).cwiseAbs().maxCoeff() <= 5e-3);
}

TEST_CASE("jacobian against finite differences") {
  const WaveSystem sys = nagumo(0.3);
  const Grid g = make_grid(30.0, 0.5, sys.shifts());
  const Profile phi = initial_guess(g, 2.0, 1);
  const double c = 0.25, delta = 1e-7;
  const SparseMat J = linear_block(sys, g, phi, c);
  std::mt19937 rng(3);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    Vec v(g.n);
    for (int i = 0; i < g.n; ++i) v(i) = N(rng);
    const Vec fd = (assemble_residual(sys, g, phi + delta * unflatten(v, g.n, 1), c) - assemble_residual(sys, g, phi, c)) / delta;
    CHECK((fd - J * v).cwiseAbs().maxCoeff() <= 1e-6 * v.norm());
  }
  // the c column is the derivative of the profile
  const Vec dc = (assemble_residual(sys, g, phi, c + delta) - assemble_residual(sys, g, phi, c)) / delta;
  CHECK((dc - flatten(derivative(g, phi))).cwiseAbs().maxCoeff() < 1e-6);

  const Profile phase_ref = phi;
  const SparseMat B = assemble_jacobian(sys, g, phi, c, phase_ref);
  CHECK(B.rows() == g.n + 1);
  CHECK(B.cols() == g.n + 1);
}

TEST_CASE("jacobian transcription at the zero state") {
  const WaveSystem sys = nagumo(0.3);
  const Grid g = make_grid(30.0, 1.0, sys.shifts());
  const double c = 0.4;
  const Mat J = Mat(linear_block(sys, g, Profile::Zero(g.n, 1), c));
  const int i = 20;
  CHECK(J(i, i) == doctest::Approx(2.0 + 0.3));
  CHECK(J(i, i + 1) == doctest::Approx(-1.0 + c / 2.0));
  CHECK(J(i, i - 1) == doctest::Approx(-1.0 - c / 2.0));
  CHECK(J(i, i + 2) == 0.0);
}

TEST_CASE("continuum-limit speed") {
  const WaveSolution s = scaled_wave(0.05, 0.05);
  CHECK(std::abs(s.c - 0.2828427) <= 2e-2);
  CHECK(s.residual_norm <= 1e-10);
  CHECK(check_monotonicity(s.profile).monotone);
}

TEST_CASE("discrete Nagumo fronts") {
  const WaveSolution s = nagumo_wave(0.3, 0.05);
  CHECK(s.c == doctest::Approx(0.2795995).epsilon(1e-6));
  const MonotonicityReport m = check_monotonicity(s.profile);
  CHECK(m.monotone);
  CHECK(m.direction == 1);
  // residual_norm is the max residual of the returned data
  CHECK(assemble_residual(nagumo(0.3), s.grid, s.profile, s.c).cwiseAbs().maxCoeff() == s.residual_norm);
  CHECK(s.residual_norm <= 1e-10);

  // a = 1/2 is symmetric: the front stands still
  const WaveSolution z = nagumo_wave(0.5, 1.0);
  CHECK(std::abs(z.c) <= 1e-8);
  CHECK(z.pinning_suspected);
}

TEST_CASE("translation covariance") {
  // odd steps per unit shift; on even grids the checkerboard null mode leaves ~1e-8 of slack
  const WaveSystem sys = nagumo(0.3);
  const Grid g = make_grid(40.0, kOddH, sys.shifts());
  const WaveSolution a = newton_solve(sys, g, initial_guess(g, 2.0, 1), 0.1);
  const int m = 37;
  Profile shifted(g.n, 1);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.node(i) - m * g.h;
    shifted(i, 0) = 1.0 / (1.0 + std::exp(-x / 2.0));
  }
  const WaveSolution b = newton_solve(sys, g, shifted, 0.1);
  CHECK(std::abs(a.c - b.c) <= 1e-10);
  CHECK(b.phase.location - a.phase.location == doctest::Approx(m * g.h).epsilon(1e-9));
  double worst = 0.0;
  for (double x = -20.0; x <= 20.0; x += 0.05) worst = std::max(worst, std::abs(a.sample(0, x) - b.sample(0, x)));
  CHECK(worst <= 1e-8);
}

TEST_CASE("grid refinement is second order") {
  const double c1 = scaled_wave(0.05, 0.05).c;
  const double c2 = scaled_wave(0.05, 0.025).c;
  const double c3 = scaled_wave(0.05, 0.0125).c;
  const double ratio = (c1 - c2) / (c2 - c3);
  CHECK(ratio > 3.5);
  CHECK(ratio < 4.5);
}

TEST_CASE("domain truncation") {
  const WaveSolution a = nagumo_wave(0.3, 0.05, 40.0);
  const WaveSolution b = nagumo_wave(0.3, 0.05, 80.0);
  const double lambda_min = 0.68;  // slowest tail rate of this front
  CHECK(std::abs(a.c - b.c) < std::exp(-lambda_min * (40.0 - 10.0)));
  CHECK_THROWS_AS(nagumo_wave(0.3, 0.05, 3.0), Error);
}

TEST_CASE("newton failure is reported") {
  const WaveSystem sys = nagumo(0.3);
  const Grid g = make_grid(40.0, 0.05, sys.shifts());
  NewtonOptions o;
  o.max_iter = 1;
  try {
    newton_solve(sys, g, initial_guess(g, 2.0, 1), 0.1, o);
    FAIL("expected a convergence error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Convergence);
  }
}

TEST_CASE("kernel of the linearisation") {
  // second-order residual of L psi_plus under h-halving
  const WaveSolution coarse = scaled_wave(0.1, 0.1);
  const WaveSolution fine = scaled_wave(0.1, 0.05);
  const KernelData kc = kernel_vectors(scaled_nagumo(1.0, 0.0, 0.3, 0.1), coarse);
  const KernelData kf = kernel_vectors(scaled_nagumo(1.0, 0.0, 0.3, 0.1), fine);
  const double ratio = kc.plus_residual / kf.plus_residual;
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
  CHECK(kf.kernel_dim == 1);
  CHECK(kf.psi_plus.minCoeff() >= -1e-8);
  CHECK(inner(fine.grid, derivative(fine.grid, fine.profile), kf.psi_minus) > 0.0);
  CHECK_NOTHROW(require_simple_kernel(kf));

  // odd step count: no grid-scale modes, one smooth null direction
  const WaveSolution odd = nagumo_wave(0.3, kOddH);
  const KernelData ko = kernel_vectors(nagumo(0.3), odd);
  CHECK(ko.kernel_dim == 1);
  CHECK(ko.oscillatory_dim == 0);
  CHECK(ko.restricted_smallest > 1e3 * ko.smallest(0));
}

TEST_CASE("decoupled four-site system has a two-dimensional kernel") {
  const FourSiteSystem fs = four_site_transform(0.0, 1.0, 0.3, PeriodicState{4, {0, 0, 0, 0}}, PeriodicState{4, {1, 1, 1, 1}});
  const WaveSystem sys = four_site_perturbed(fs, FourSiteSplit::AllD1).at(0.0);
  const WaveSolution s = solve(sys, kOddH);
  CHECK(s.c == doctest::Approx(0.139812).epsilon(1e-5));
  const KernelData k = kernel_vectors(sys, s);
  CHECK(k.kernel_dim == 2);
  try {
    require_simple_kernel(k);
    FAIL("expected a kernel-dimension error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::KernelDimension);
  }
}
