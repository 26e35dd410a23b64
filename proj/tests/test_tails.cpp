#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "latfront/tails.hpp"

using namespace latfront;
using namespace fixtures;

namespace {

// c u' - u'' + f'(end) u, the continuum operator at either end
MfdeOperator continuum_op(double a, double c) {
  MfdeOperator op;
  op.dim = 1;
  op.speed = c;
  op.shifts = {0.0};
  op.limits_minus = {Mat::Zero(1, 1)};
  op.limits_plus = {Mat::Zero(1, 1)};
  op.gamma_minus = Vec::Constant(1, a);
  op.gamma_plus = Vec::Constant(1, 1.0 - a);
  op.diffusion = Vec::Ones(1);
  return op;
}

// root of c l - (e^l + e^-l - 2) + g = 0 with the sign of `side`, by plain bisection
double scalar_rate(double c, double g, int side) {
  auto f = [&](double l) { return c * l - (std::exp(l) + std::exp(-l) - 2.0) + g; };
  double lo = 0.0, hi = side * 20.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) > 0.0) == (f(lo) > 0.0)) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

const WaveSolution& nagumo_front() {
  static const WaveSolution s = nagumo_wave(0.3, 0.05);
  return s;
}

}  // namespace

TEST_CASE("continuum decay rates") {
  const MfdeOperator op = continuum_op(0.3, pde_speed(0.3));
  const double l0 = select_rate(decay_rates_constant(op, End::Minus), End::Minus);
  const double l1 = select_rate(decay_rates_constant(op, End::Plus), End::Plus);
  CHECK(l0 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(l1 == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("discrete Nagumo decay rates") {
  const double c = nagumo_front().c;
  const TailReport r = tail_report(nagumo(0.3), c);
  CHECK(r.method == "characteristic_root");
  CHECK(r.lambda0 == doctest::Approx(scalar_rate(c, 0.3, 1)).epsilon(1e-10));
  CHECK(r.lambda1 == doctest::Approx(scalar_rate(c, 0.7, -1)).epsilon(1e-10));
  CHECK(r.lambda0 > 0.0);
  CHECK(r.lambda1 < 0.0);
  CHECK(r.lambda0 == doctest::Approx(0.68804).epsilon(1e-4));
  CHECK(r.lambda1 == doctest::Approx(-0.69662).epsilon(1e-4));

  // period-1 tail matrices reduce to the same scalar equation
  const TailReport p = tail_report(build_nagumo(1.0, 0.0, 0.3), c);
  CHECK(p.method == "principal_eigenvalue");
  CHECK(std::abs(p.lambda0 - r.lambda0) <= 1e-10);
  CHECK(std::abs(p.lambda1 - r.lambda1) <= 1e-10);
}

TEST_CASE("principal eigenpair") {
  Mat P(2, 2);
  P << 0, 1, 1, 0;
  Eigenpair e = principal_eigenpair(P);
  CHECK(e.lambda == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.vector(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.vector(1) == doctest::Approx(1.0).epsilon(1e-12));
  P << 2, 1, 1, 2;
  e = principal_eigenpair(P);
  CHECK(e.lambda == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(e.vector.minCoeff() == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937 rng(21);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    Mat B(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) B(i, j) = i == j ? 4.0 * U(rng) - 2.0 : U(rng);
    const Eigenpair pe = principal_eigenpair(B);
    const Eigen::VectorXcd ev = Eigen::EigenSolver<Mat>(B).eigenvalues();
    double right = -1e300;
    for (int i = 0; i < 6; ++i) right = std::max(right, ev(i).real());
    CHECK(std::abs(pe.lambda - right) <= 1e-8);
    CHECK(pe.vector.minCoeff() > 0.0);
    CHECK((B * pe.vector - pe.lambda * pe.vector).cwiseAbs().maxCoeff() <= 1e-13 * B.cwiseAbs().rowwise().sum().maxCoeff());
  }

  Mat R = Mat::Zero(3, 3);
  R(0, 1) = 1.0;
  R(1, 0) = 1.0;
  try {
    principal_eigenpair(R);
    FAIL("expected a reducibility error");
  } catch (const Error& err) {
    CHECK(std::string(err.what()).find("{2}") != std::string::npos);
  }
  R(2, 2) = 1.0;
  R(0, 2) = -0.5;
  CHECK_THROWS_AS(principal_eigenpair(R), Error);
}

TEST_CASE("truncated kernels converge") {
  KernelFamily k;
  k.q = 0.5;
  const InfiniteRangeModel m = build_infinite_range(k, 1, 40);
  const double mu = 0.1;
  double prev = -1e300, gap = 1e300;
  for (int k0 = 1; k0 <= 30; ++k0) {
    const double lam = principal_eigenpair(weighted_coupling_matrix(m.truncated(k0), mu)).lambda;
    CHECK(lam > prev);
    // increments q^k (2 cosh(k mu) - 2) peak near k = 3, then shrink geometrically
    if (k0 > 4) CHECK(lam - prev < gap);
    if (k0 > 1) gap = lam - prev;
    prev = lam;
  }
  CHECK(gap < 1e-6);
}

TEST_CASE("period-two tails have positive eigenvectors") {
  TwoSiteSystem ts;
  ts.d_e = 0.3;
  ts.d_o = 0.7;
  ts.d2 = 0.1;
  ts.f_e = {1.5, 0.3};
  ts.f_o = {0.8, 0.45};
  for (End end : {End::Minus, End::Plus}) {
    const PeriodicRate r = periodic_decay_rate(ts.lattice(1.0), end, 0.2);
    CHECK(r.eigenvector.minCoeff() > 0.0);
    CHECK((end == End::Minus ? r.mu > 0.0 : r.mu < 0.0));
    CHECK(r.mu_site == doctest::Approx(r.mu / 2.0));
  }
  CHECK_THROWS_AS(periodic_decay_rate(ts.lattice(1.0), End::Minus, 0.0), Error);
}

TEST_CASE("fitted tails") {
  const WaveSolution pde = scaled_wave(0.05, 0.05);
  CHECK(fit_tail(pde, End::Minus).rate == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.02));
  CHECK(fit_tail(pde, End::Plus).rate == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(0.02));

  const TailReport r = tail_report(nagumo(0.3), nagumo_front().c);
  const TailFit f0 = fit_tail(nagumo_front(), End::Minus);
  const TailFit f1 = fit_tail(nagumo_front(), End::Plus);
  CHECK(f0.rate == doctest::Approx(r.lambda0).epsilon(0.05));
  CHECK(f1.rate == doctest::Approx(r.lambda1).epsilon(0.05));
  CHECK(f0.r2 > 0.999);
  CHECK(f0.points >= 8);

  WaveSolution flat = nagumo_front();
  flat.profile.setConstant(0.5);
  CHECK_THROWS_AS(fit_tail(flat, End::Minus), Error);
}

TEST_CASE("truncation heuristic") {
  const WaveSolution shortL = nagumo_wave(0.3, 0.05, 20.0);
  const TailReport r = tail_report(nagumo(0.3), nagumo_front().c);
  const double slow = std::min(std::abs(r.lambda0), std::abs(r.lambda1));
  CHECK(std::abs(shortL.c - nagumo_front().c) < std::exp(-slow * 20.0 / 2.0));
}
