#pragma once

#include <functional>
#include <string>
#include <vector>

#include "latfront/bvp.hpp"

namespace latfront {

enum class StopReason {
  ReachedTarget,
  HyperbolicityLost,
  StepUnderflow,
  KernelDimensionChange,
  PinningSuspected,
};

const char* to_string(StopReason reason);

struct ContinuationOptions {
  double step0 = 0.05;
  double step_min = 1e-5;
  double grow = 1.5;
  double step_max = 0.25;
  double hyperbolic_tol = 1e-8;
  int hyperbolic_points = 4096;
  double tail_bound = 0.0;  // added to the hyperbolicity tolerance (truncated infinite-range kernels)
  bool check_kernel = true;
  NewtonOptions newton;
};

struct BranchRecord {
  double param = 0.0;
  double c = 0.0;
  Profile profile;
  double phase_location = 0.0;
  int newton_iters = 0;
  double residual_norm = 0.0;
  HyperbolicityReport hyperbolicity;
  int kernel_dim = -1;  // -1 when not computed
  bool accepted = true;  // false only for a final record that triggered a stop
};

struct ContinuationBranch {
  std::string parameter = "eps";
  std::vector<BranchRecord> steps;
  StopReason stop_reason = StopReason::ReachedTarget;
  std::string message;

  double reached() const;  // last accepted parameter value
};

using SystemFamily = std::function<WaveSystem(double)>;

// Natural-parameter continuation of the wave from (p0, start) toward p1.
ContinuationBranch continue_branch(const SystemFamily& family, const WaveSolution& start, double p0, double p1,
                                   const ContinuationOptions& opts = {}, const std::string& parameter = "eps");

ContinuationBranch continue_in_epsilon(const PerturbedSystem& system, const WaveSolution& reference, double eps1,
                                       const ContinuationOptions& opts = {}, double eps0 = 0.0);

enum class NagumoParameter { D1, D2, A };

NagumoParameter parse_parameter(const std::string& name);
const char* to_string(NagumoParameter p);

// Discrete Nagumo lattice with one of (d1, d2, a) replaced by the continuation variable.
SystemFamily nagumo_family(NagumoParameter p, double d1, double d2, double a);

ContinuationBranch continue_in_parameter(NagumoParameter p, double d1, double d2, double a,
                                         const WaveSolution& reference, double target,
                                         const ContinuationOptions& opts = {});

}  // namespace latfront
