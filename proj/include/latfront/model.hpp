#pragma once

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "latfront/common.hpp"

namespace latfront {

// f(u) = k u (u - a) (u - 1)
struct CubicNonlinearity {
  double k = 1.0;
  double a = 0.5;

  double operator()(double u) const { return k * u * (u - a) * (u - 1.0); }
  double derivative(double u) const { return k * (3.0 * u * u - 2.0 * (1.0 + a) * u + a); }
  double second_derivative(double u) const { return k * (6.0 * u - 2.0 * (1.0 + a)); }
};

// Lattice system  u_n' = sum_k a_{n,k} u_{n+k} - g_n(u_n),  couplings periodic in n.
struct LatticeModel {
  int period = 1;
  std::map<std::pair<int, int>, double> couplings;  // (n mod period, k) -> a_{n,k}
  std::vector<CubicNonlinearity> cubics;
  std::string metadata;

  double coupling(int n, int k) const;
  void set_coupling(int n, int k, double value);
  void add_coupling(int n, int k, double value);
  int max_range() const;
  const CubicNonlinearity& cubic(int n) const;

  // sum_k a_{n,k} u_{n+k} for a periodic state (values repeat with their own period).
  double coupling_sum(int n, const std::vector<double>& values) const;
  // sum over k of |a_{n,k}|, maximised over n.
  double max_stencil_sum() const;
};

struct PeriodicState {
  int period = 1;
  std::vector<double> values;
  double residual = 0.0;
  double tolerance = 1e-12;
};

int positive_mod(int n, int p);

// max_n |sum_k a_{n,k} u_{n+k} - g_n(u_n)| over one common period.
double equilibrium_defect(const LatticeModel& model, const std::vector<double>& values);

LatticeModel build_nagumo(double d1, double d2, double a);
// Same lattice, written with an explicit period so that sites can be transformed independently.
LatticeModel build_nagumo_periodic(double d1, double d2, double a, int period);
// No range check on a; used for equilibrium searches and changes of variables.
LatticeModel nagumo_lattice(double d1, double d2, double a, int period);

struct ScanSpec {
  double lo = -4.0;
  double hi = 5.0;
  int points = 10000;
};

std::vector<PeriodicState> find_two_periodic_equilibria(double d1, double a, const ScanSpec& scan = {});

struct SeedSpec {
  std::vector<double> values{-0.5, 0.0, 0.25, 0.5, 0.75, 1.0, 1.5};
  double box_lo = -1e300;
  double box_hi = 1e300;
};

std::vector<PeriodicState> find_four_periodic_equilibria(double d1, double d2, double a,
                                                         const SeedSpec& seeds = {});

// Affine change of variables sending `minus` to 0 and `plus` to 1 site by site.
struct TransformedModel {
  LatticeModel model;
  std::vector<double> delta;             // plus - minus per site
  std::vector<double> printed_a;         // -g''(u_-)/delta - 1, the closed form quoted for the 2-site case
  std::vector<double> substitution_defect;  // direct-substitution polynomial at v = 1
};

TransformedModel transform_periodic(const LatticeModel& model, const PeriodicState& minus,
                                    const PeriodicState& plus, double equilibrium_tol = 1e-9);

struct TwoSiteSystem {
  double d1 = 0.0;
  double d_e = 0.0;
  double d_o = 0.0;
  double d2 = 0.0;
  CubicNonlinearity f_e;
  CubicNonlinearity f_o;
  PeriodicState minus;
  PeriodicState plus;
  bool discrepancy = false;
  double printed_a_e = 0.0;
  double printed_a_o = 0.0;
  double substitution_defect = 0.0;

  bool positive_couplings() const { return d_e > 0.0 && d_o > 0.0; }
  bool bistable() const { return f_e.a > 0.0 && f_e.a < 1.0 && f_o.a > 0.0 && f_o.a < 1.0; }
  // Period-2 lattice in (v, w) variables with second-neighbour coupling eps * d2.
  LatticeModel lattice(double eps = 1.0) const;
};

TwoSiteSystem two_site_transform(double d1, double d2, double a, const PeriodicState& minus,
                                 const PeriodicState& plus);

struct FourSiteSystem {
  double d1 = 0.0;
  double d2 = 0.0;
  Eigen::Matrix4d A1, A2, A3;
  Eigen::Matrix4d At1, At2, At3, B2;
  std::vector<CubicNonlinearity> cubics;
  PeriodicState minus;
  PeriodicState plus;
  LatticeModel transformed;
  double substitution_defect = 0.0;

  // Off-diagonal entries of the reference matrices that are negative: (matrix index 1..3, row, col).
  std::vector<std::tuple<int, int, int>> quasipositivity_violations(double tol = 0.0) const;
};

FourSiteSystem four_site_transform(double d1, double d2, double a, const PeriodicState& minus,
                                   const PeriodicState& plus);

struct KernelFamily {
  std::string name = "geometric";  // "geometric" or "table"
  double q = 0.5;
  double scale = 1.0;
  std::map<int, double> table;    // k -> a_k (symmetric use of |k| not assumed)
  double declared_certificate = -1.0;
  CubicNonlinearity cubic{1.0, 0.3};
};

struct InfiniteRangeModel {
  LatticeModel base;
  std::map<std::pair<int, int>, double> tail;
  double certificate = 0.0;
  int k0 = 1;
  int k_num = 40;
  double lambda_max = 0.0;

  // Tail operator (B u)_n = sum_{|k|>k0} a_{n,k}(u_{n+k} - u_n) as a coupling model (no reaction).
  LatticeModel tail_model() const;
  LatticeModel full() const;
  // Stencil truncated at |k| <= cutoff (difference form).
  LatticeModel truncated(int cutoff) const;
};

InfiniteRangeModel build_infinite_range(const KernelFamily& kernel, int k0, int k_num,
                                        double lambda_max = 0.0);

}  // namespace latfront
