#pragma once

#include <string>
#include <vector>

#include "latfront/bvp.hpp"
#include "latfront/mfde.hpp"
#include "latfront/model.hpp"

namespace latfront {

// Real roots of det Delta(lambda) at one end, ascending; scan of [-lambda_max, lambda_max] plus bisection.
std::vector<double> decay_rates_constant(const MfdeOperator& op, End end, double lambda_max = 20.0,
                                         int points = 4000);
// Smallest positive root at -inf, largest negative root at +inf; throws Domain when absent.
double select_rate(const std::vector<double>& roots, End end);

struct Eigenpair {
  double lambda = 0.0;
  Vec vector;  // strictly positive, max-norm 1
  int iterations = 0;
};

// Perron root of an irreducible matrix with nonnegative off-diagonal entries (shifted power iteration).
Eigenpair principal_eigenpair(const Mat& B, double tol = 1e-13, int max_iter = 1000000);

// B(mu)_{p,q} = sum over k with (p + k) mod P = q of a_{p,k} e^{k mu}, mu per site.
Mat weighted_coupling_matrix(const LatticeModel& model, double mu);

struct PeriodicRate {
  double mu = 0.0;       // per cell: the profile behaves like e^{mu xi}
  double mu_site = 0.0;  // per lattice site
  Vec eigenvector;
};

// Solves c mu = lambda_P(B(mu / P) - diag g'(end state)) for the tail rate at one end.
PeriodicRate periodic_decay_rate(const LatticeModel& model, End end, double c);

struct TailFit {
  double rate = 0.0;
  double r2 = 0.0;
  int points = 0;
};

// Log-linear fit of |phi| (-inf) or |1 - phi| (+inf) over the outer `window` fraction of the half grid.
TailFit fit_tail(const WaveSolution& solution, End end, double window = 0.75, int component = 0);

struct TailReport {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  std::string method;  // characteristic_root | principal_eigenvalue
  Vec eigvec0;
  Vec eigvec1;
  bool has_fit = false;
  TailFit fit0;
  TailFit fit1;
};

TailReport tail_report(const WaveSystem& system, double c);
TailReport tail_report(const LatticeModel& model, double c);

}  // namespace latfront
