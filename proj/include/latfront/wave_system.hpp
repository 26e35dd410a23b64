#pragma once

#include <string>
#include <vector>

#include "latfront/model.hpp"

namespace latfront {

// (A phi)(xi) = sum_j M_j phi(xi + r_j)
struct CouplingTerm {
  double shift = 0.0;
  Mat matrix;
};

// Traveling-wave system  c phi' - A phi + G(phi) = 0,  phi(-inf) = 0, phi(+inf) = 1.
// Lattice fronts u_n(t) = phi_p(k + c t) with n = P k + p, so xi is measured in cells.
struct WaveSystem {
  int components = 1;
  std::vector<CouplingTerm> terms;
  std::vector<CubicNonlinearity> reactions;
  std::string label;

  std::vector<double> shifts() const;
};

std::vector<CouplingTerm> merge_terms(std::vector<CouplingTerm> terms);
std::vector<CouplingTerm> coupling_terms(const LatticeModel& model);
WaveSystem wave_system(const LatticeModel& model);

// Continuum-scaled stencil (1/eps^2)[d1 D_eps + d2 D_{2 eps}] acting on a single component.
WaveSystem scaled_nagumo(double d1, double d2, double a, double eps);

// A(eps) = A_ref + eps B.
struct PerturbedSystem {
  WaveSystem reference;
  std::vector<CouplingTerm> perturbation;

  WaveSystem at(double eps) const;
};

PerturbedSystem perturbed(const LatticeModel& reference, const LatticeModel& full);
PerturbedSystem nagumo_perturbed(double d1, double d2, double a);
PerturbedSystem two_site_perturbed(const TwoSiteSystem& system);

enum class FourSiteSplit {
  Printed,  // reference uses the split matrices, perturbation the intra-cell w-x, x-y couplings
  AllD1,    // every first-neighbour term moves into the perturbation
};
PerturbedSystem four_site_perturbed(const FourSiteSystem& system, FourSiteSplit split);
PerturbedSystem infinite_range_perturbed(const InfiniteRangeModel& model);

}  // namespace latfront
