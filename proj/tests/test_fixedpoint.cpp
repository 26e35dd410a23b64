#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "latfront/fixedpoint.hpp"

using namespace latfront;
using namespace fixtures;

namespace {

const PerturbedSystem& perturbed_fixture() {
  static const PerturbedSystem p = nagumo_perturbed(1.0, 0.1, 0.3);
  return p;
}

const WaveSolution& base_fixture() {
  static const WaveSolution s = solve(perturbed_fixture().reference, kOddH);
  return s;
}

FixedPointContext context(double eps) { return make_context(perturbed_fixture(), base_fixture(), eps); }

// smooth bump with small amplitude
Profile bump(const Grid& g, double amp, double centre, double width) {
  Profile p(g.n, 1);
  for (int i = 0; i < g.n; ++i) {
    const double x = (g.node(i) - centre) / width;
    p(i, 0) = amp * std::exp(-x * x);
  }
  return p;
}

}  // namespace

TEST_CASE("quadratic remainder") {
  const std::vector<CubicNonlinearity> f{{1.0, 0.3}};
  CHECK(remainder_N(f, Profile::Constant(5, 1, 0.5), Profile::Zero(5, 1)).cwiseAbs().maxCoeff() == 0.0);
  // f(0.6) - f(0.5) - f'(0.5) 0.1 with f'(0.5) = -0.25, equal to f''(0.5)/2 0.01 + 0.001
  const Profile n = remainder_N(f, Profile::Constant(3, 1, 0.5), Profile::Constant(3, 1, 0.1));
  CHECK(n(1, 0) == doctest::Approx(0.003).epsilon(1e-12));

  const Grid g = make_grid(10.0, 0.05, {0.0});
  const Profile phi0 = initial_guess(g, 1.0, 1);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-0.2, 0.2);
  for (int t = 0; t < 10; ++t) {
    const Profile psi = bump(g, U(rng), U(rng) * 20.0, 1.0 + std::abs(U(rng)) * 10.0);
    const double lo = std::min((phi0 + psi).minCoeff(), phi0.minCoeff());
    const double hi = std::max((phi0 + psi).maxCoeff(), phi0.maxCoeff());
    const double M = std::max(std::abs(f[0].second_derivative(lo)), std::abs(f[0].second_derivative(hi)));
    CHECK(l2_norm(g, remainder_N(f, phi0, psi)) <= M * l2_norm(g, psi) * psi.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("residual R") {
  const FixedPointContext c0 = context(0.0);
  const FixedPointContext c5 = with_eps(c0, 0.05);
  const Grid& g = c0.base.grid;
  const Profile zero = Profile::Zero(g.n, 1);
  const double cb = c0.base.c;
  CHECK(residual_R(c0, cb, zero).cwiseAbs().maxCoeff() == 0.0);
  CHECK((residual_R(c5, cb, zero) - 0.05 * apply_perturbation(c5, zero)).cwiseAbs().maxCoeff() <= 1e-15);
  const double d = 0.01;
  CHECK((residual_R(c5, cb + d, zero) - residual_R(c5, cb, zero) + d * c5.dphi0).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("speed update") {
  const FixedPointContext c0 = context(0.0);
  const FixedPointContext c5 = with_eps(c0, 0.05);
  const Grid& g = c0.base.grid;
  const Profile zero = Profile::Zero(g.n, 1);
  CHECK(speed_update(c0, zero) == doctest::Approx(c0.base.c).epsilon(1e-14));
  const Profile& pm = c5.kernel.psi_minus;
  const double expected =
      c5.base.c + inner(g, 0.05 * apply_perturbation(c5, zero), pm) / inner(g, c5.dphi0, pm);
  CHECK(speed_update(c5, zero) == doctest::Approx(expected).epsilon(1e-13));

  // pushing psi' against phi0' drives the denominator below the guard
  try {
    speed_update(c5, -2.0 * c5.base.profile);
    FAIL("expected the denominator guard to trip");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Convergence);
  }
}

TEST_CASE("map T") {
  const FixedPointContext c0 = context(0.0);
  const FixedPointContext c5 = with_eps(c0, 0.05);
  const Grid& g = c0.base.grid;
  CHECK(apply_T(c0, Profile::Zero(g.n, 1)).cwiseAbs().maxCoeff() <= 1e-14);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    const Profile psi = bump(g, 0.01 * U(rng), 5.0 * U(rng), 2.0 + U(rng));
    const TStep s = apply_T_step(c5, psi);
    CHECK(std::abs(inner(g, s.v, c5.kernel.psi_plus)) <= 1e-12);
    CHECK(s.orthogonality <= 1e-10);
  }

  // the full residual of phi0 + psi_k falls along the iteration
  const WaveSystem full = perturbed_fixture().at(0.05);
  Profile psi = Profile::Zero(g.n, 1);
  double prev = 1e300;
  for (int k = 0; k < 4; ++k) {
    const double c = speed_update(c5, psi);
    const double r = assemble_residual(full, g, c5.base.profile + psi, c).cwiseAbs().maxCoeff();
    CHECK(r < prev);
    prev = r;
    psi = apply_T(c5, psi);
  }
}

TEST_CASE("iteration at eps = 0") {
  const FixedPointResult r = iterate(context(0.0));
  CHECK(r.state.history.size() == 1);
  CHECK(r.state.psi.cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(r.state.c_current == doctest::Approx(base_fixture().c).epsilon(1e-14));
}

TEST_CASE("iteration agrees with Newton") {
  const FixedPointContext ctx = context(0.05);
  const FixedPointResult r = iterate(ctx);
  const WaveSolution& b = base_fixture();
  const WaveSolution n = newton_solve(perturbed_fixture().at(0.05), b.grid, b.profile, b.c, {}, &b.profile);
  CHECK(std::abs(r.state.c_current - n.c) <= 1e-4);
  CHECK(r.state.contraction_ratio < 1.0);
  CHECK(r.state.max_plus_overlap <= 1e-12);
  CHECK(r.state.max_orthogonality <= 1e-10);
  CHECK(r.solution.residual_norm <= 10 * 1e-10);
  double worst = 0.0;
  for (double x = -20.0; x <= 20.0; x += 0.05) worst = std::max(worst, std::abs(r.solution.sample(0, x) - n.sample(0, x)));
  CHECK(worst <= 1e-6);
  CHECK(r.state.delta_hat > 0.0);
  CHECK(r.state.C0_estimate > 0.0);
}

TEST_CASE("contraction ratio grows with eps") {
  const FixedPointContext c0 = context(0.0);
  double prev = 0.0;
  for (double eps : {0.01, 0.05, 0.1, 0.2}) {
    const FixedPointResult r = iterate(with_eps(c0, eps));
    CHECK(r.state.contraction_ratio > prev);
    prev = r.state.contraction_ratio;
  }
}

TEST_CASE("checkerboard-prone grids are refused") {
  const WaveSolution even = solve(perturbed_fixture().reference, 0.05);
  try {
    make_context(perturbed_fixture(), even, 0.05);
    FAIL("expected a kernel-dimension error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::KernelDimension);
  }
}
