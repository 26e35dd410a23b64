#pragma once

#include <memory>
#include <vector>

#include "latfront/bvp.hpp"

namespace latfront {

// N(phi0, psi) = G(phi0 + psi) - G(phi0) - G'(phi0) psi, componentwise.
Profile remainder_N(const std::vector<CubicNonlinearity>& reactions, const Profile& phi0, const Profile& psi);

struct BorderedFactor;

// Everything the map T needs: the eps = 0 wave, its kernel data and the factored bordered operator.
struct FixedPointContext {
  WaveSystem reference;
  std::vector<CouplingTerm> perturbation;
  double eps = 0.0;
  WaveSolution base;
  KernelData kernel;
  Profile dphi0;
  double delta_hat = 0.0;
  std::shared_ptr<BorderedFactor> factor;

  WaveSystem full() const;
};

FixedPointContext make_context(const PerturbedSystem& system, const WaveSolution& base, double eps);
// Same base wave and factorisation, different eps.
FixedPointContext with_eps(const FixedPointContext& ctx, double eps);

// B(phi0 + psi) with phi0 clamped to its end states and psi extended by zero.
Profile apply_perturbation(const FixedPointContext& ctx, const Profile& psi);

// R(c, psi) = (c0 - c)(phi0' + psi') + eps B(phi0 + psi) - N(phi0, psi)
Profile residual_R(const FixedPointContext& ctx, double c, const Profile& psi);

// Speed making R(c, psi) orthogonal to psi_minus. Throws Convergence when the denominator drops below delta_hat.
double speed_update(const FixedPointContext& ctx, const Profile& psi);

struct TStep {
  Profile v;
  double c = 0.0;
  Profile R;
  double multiplier = 0.0;    // border unknown; vanishes when R is in the range
  double orthogonality = 0.0;  // |<R, psi_minus>| / ||R||
};

TStep apply_T_step(const FixedPointContext& ctx, const Profile& psi);
Profile apply_T(const FixedPointContext& ctx, const Profile& psi);

struct FixedPointOptions {
  double tol = 1e-10;
  int max_iter = 200;
};

struct FixedPointRecord {
  int iter = 0;
  double step_norm = 0.0;
  double c = 0.0;
  double lambda_hat = 0.0;  // ratio of successive step norms, 0 on the first step
  double orthogonality = 0.0;
  double plus_overlap = 0.0;  // <psi_k, psi_plus>
};

struct FixedPointState {
  Profile psi;
  double c_current = 0.0;
  std::vector<FixedPointRecord> history;
  double contraction_ratio = 0.0;
  double delta_hat = 0.0;
  double C0_estimate = 0.0;
  double K0 = 0.0;  // ||eps B phi0||
  double K1 = 0.0;  // Lipschitz quotient of psi -> c(psi)
  double K2 = 0.0;  // Lipschitz quotient of psi -> R(c(psi), psi)
  double M = 0.0;   // max |G''| over the visited range
  double max_psi_norm = 0.0;
  double max_orthogonality = 0.0;
  double max_plus_overlap = 0.0;
};

struct FixedPointResult {
  WaveSolution solution;
  FixedPointState state;
};

FixedPointResult iterate(const FixedPointContext& ctx, const FixedPointOptions& opts = {});

}  // namespace latfront
