#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "latfront/wave_system.hpp"

namespace latfront {

enum class End { Minus, Plus };

const char* to_string(End end);

using CoefficientFn = std::function<Mat(double)>;
using ReactionFn = std::function<Vec(double)>;

// L u = c u' - D u'' - sum_j A_j(xi) u(xi + r_j) + gamma(xi) u
// D is an optional nonnegative diagonal (continuum limit); gamma is diagonal.
struct MfdeOperator {
  int dim = 1;
  double speed = 0.0;
  std::vector<double> shifts;               // shifts[0] == 0
  std::vector<CoefficientFn> coefficients;  // empty function: constant, equal to both limits
  std::vector<Mat> limits_minus;
  std::vector<Mat> limits_plus;
  Vec gamma_minus;
  Vec gamma_plus;
  ReactionFn gamma;  // optional profile-dependent reaction
  Vec diffusion;     // optional
  double tail_bound = 0.0;

  // Throws on repeated shifts, missing r = 0, or limits disagreeing with sampled coefficients.
  void validate(double sample_at = 1e3, double tol = 1e-8) const;
  Mat coefficient(std::size_t j, double xi) const;
  Vec reaction(double xi) const;
  // (L u)(xi) for callables u and u' (and u'' when diffusion is present).
  Vec apply(const std::function<Vec(double)>& u, const std::function<Vec(double)>& du, double xi,
            const std::function<Vec(double)>& ddu = nullptr) const;
};

// Constant-coefficient operator of the linearisation at the end states 0 and 1.
MfdeOperator limit_operator(const WaveSystem& system, double c, double tail_bound = 0.0);

Eigen::MatrixXcd characteristic_matrix(const MfdeOperator& op, End end, std::complex<double> s);

struct HyperbolicityEntry {
  End end = End::Minus;
  bool adjoint = false;
  bool verdict = false;
  double min_modulus = 0.0;
  double theta_at_min = 0.0;
  double Theta = 0.0;
  double tol = 1e-8;
};

struct HyperbolicityReport {
  std::vector<HyperbolicityEntry> entries;
  bool verdict = false;
  double min_modulus = 0.0;
  double theta_at_min = 0.0;
  double tol = 1e-8;
};

HyperbolicityEntry is_hyperbolic(const MfdeOperator& op, End end, double tol = 1e-8, int points = 4096);
HyperbolicityReport asymptotic_hyperbolicity(const MfdeOperator& op, double tol = 1e-8, int points = 4096);
MfdeOperator adjoint(const MfdeOperator& op);

// Closed-form determinant of the two-site characteristic matrix at s = i theta.
std::complex<double> upsilon_two_site(double d_e, double d_o, double d2, double eps, double gamma1,
                                      double gamma2, double c, double theta);

}  // namespace latfront
