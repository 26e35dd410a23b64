#include "latfront/continuation.hpp"

#include <cmath>
#include <sstream>

namespace latfront {

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::ReachedTarget: return "reached_target";
    case StopReason::HyperbolicityLost: return "hyperbolicity_lost";
    case StopReason::StepUnderflow: return "step_underflow";
    case StopReason::KernelDimensionChange: return "kernel_dimension_change";
    case StopReason::PinningSuspected: return "pinning_suspected";
  }
  return "unknown";
}

double ContinuationBranch::reached() const {
  for (auto it = steps.rbegin(); it != steps.rend(); ++it)
    if (it->accepted) return it->param;
  return steps.empty() ? 0.0 : steps.front().param;
}

namespace {

BranchRecord make_record(double p, const WaveSolution& sol) {
  BranchRecord r;
  r.param = p;
  r.c = sol.c;
  r.profile = sol.profile;
  r.phase_location = sol.phase.location;
  r.newton_iters = sol.newton_iters;
  r.residual_norm = sol.residual_norm;
  return r;
}

// Returns true when the record passes; otherwise fills the branch stop data.
bool validate_step(const WaveSystem& system, const WaveSolution& sol, const ContinuationOptions& opts,
                   BranchRecord& rec, ContinuationBranch& branch) {
  std::ostringstream os;
  os.precision(10);
  if (sol.pinning_suspected) {
    branch.stop_reason = StopReason::PinningSuspected;
    os << "speed " << sol.c << " is indistinguishable from zero at " << branch.parameter << " = " << rec.param;
    branch.message = os.str();
    return false;
  }
  rec.hyperbolicity =
      asymptotic_hyperbolicity(limit_operator(system, sol.c, opts.tail_bound), opts.hyperbolic_tol, opts.hyperbolic_points);
  if (!rec.hyperbolicity.verdict) {
    branch.stop_reason = StopReason::HyperbolicityLost;
    os << "characteristic determinant reaches " << rec.hyperbolicity.min_modulus << " at theta = "
       << rec.hyperbolicity.theta_at_min << " (tolerance " << rec.hyperbolicity.tol << ") at " << branch.parameter
       << " = " << rec.param;
    branch.message = os.str();
    return false;
  }
  if (opts.check_kernel) {
    KernelData k = kernel_vectors(system, sol);
    rec.kernel_dim = k.kernel_dim;
    if (k.kernel_dim != 1) {
      branch.stop_reason = StopReason::KernelDimensionChange;
      os << "kernel dimension estimate " << k.kernel_dim << " at " << branch.parameter << " = " << rec.param;
      branch.message = os.str();
      return false;
    }
  }
  return true;
}

}  // namespace

ContinuationBranch continue_branch(const SystemFamily& family, const WaveSolution& start, double p0, double p1,
                                   const ContinuationOptions& opts, const std::string& parameter) {
  if (!(opts.step0 > 0.0) || !(opts.step_min > 0.0) || !(opts.grow >= 1.0))
    throw Error(ErrorKind::InvalidInput, "continuation: step0, step_min must be positive and grow >= 1");
  ContinuationBranch branch;
  branch.parameter = parameter;

  BranchRecord first = make_record(p0, start);
  if (!validate_step(family(p0), start, opts, first, branch)) {
    first.accepted = false;
    branch.steps.push_back(first);
    return branch;
  }
  branch.steps.push_back(first);

  const double dir = p1 >= p0 ? 1.0 : -1.0;
  double p = p0;
  double step = std::min(opts.step0, opts.step_max);
  std::vector<WaveSolution> hist{start};
  std::vector<double> phist{p0};
  const Grid grid = start.grid;

  while (dir * (p1 - p) > 0.0) {
    const double remaining = std::abs(p1 - p);
    const double trial = step >= remaining ? p1 : p + dir * step;
    const WaveSolution& last = hist.back();
    Profile guess = last.profile;
    double cg = last.c;
    if (hist.size() >= 2) {
      const WaveSolution& prev = hist[hist.size() - 2];
      const double s = (trial - phist.back()) / (phist.back() - phist[phist.size() - 2]);
      guess += s * (last.profile - prev.profile);
      cg += s * (last.c - prev.c);
    }
    WaveSystem system = family(trial);
    WaveSolution sol;
    try {
      sol = newton_solve(system, grid, guess, cg, opts.newton, &last.profile);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Convergence && e.kind() != ErrorKind::Domain) throw;
      step *= 0.5;
      if (step < opts.step_min) {
        branch.stop_reason = StopReason::StepUnderflow;
        std::ostringstream os;
        os << "step fell below " << opts.step_min << " after " << parameter << " = " << p << ": " << e.what();
        branch.message = os.str();
        return branch;
      }
      continue;
    }
    BranchRecord rec = make_record(trial, sol);
    if (!validate_step(system, sol, opts, rec, branch)) {
      rec.accepted = false;
      branch.steps.push_back(rec);
      return branch;
    }
    branch.steps.push_back(rec);
    hist.push_back(sol);
    phist.push_back(trial);
    if (hist.size() > 2) {
      hist.erase(hist.begin());
      phist.erase(phist.begin());
    }
    p = trial;
    step = std::min(step * opts.grow, opts.step_max);
  }
  branch.stop_reason = StopReason::ReachedTarget;
  std::ostringstream os;
  os << "reached " << parameter << " = " << p1;
  branch.message = os.str();
  return branch;
}

ContinuationBranch continue_in_epsilon(const PerturbedSystem& system, const WaveSolution& reference, double eps1,
                                       const ContinuationOptions& opts, double eps0) {
  return continue_branch([system](double e) { return system.at(e); }, reference, eps0, eps1, opts, "eps");
}

NagumoParameter parse_parameter(const std::string& name) {
  if (name == "d1") return NagumoParameter::D1;
  if (name == "d2") return NagumoParameter::D2;
  if (name == "a") return NagumoParameter::A;
  throw Error(ErrorKind::InvalidInput, "continuation parameter must be one of d1, d2, a (got '" + name + "')");
}

const char* to_string(NagumoParameter p) {
  switch (p) {
    case NagumoParameter::D1: return "d1";
    case NagumoParameter::D2: return "d2";
    case NagumoParameter::A: return "a";
  }
  return "?";
}

SystemFamily nagumo_family(NagumoParameter p, double d1, double d2, double a) {
  return [=](double v) {
    double x1 = d1, x2 = d2, xa = a;
    if (p == NagumoParameter::D1) x1 = v;
    if (p == NagumoParameter::D2) x2 = v;
    if (p == NagumoParameter::A) xa = v;
    return wave_system(nagumo_lattice(x1, x2, xa, 1));
  };
}

ContinuationBranch continue_in_parameter(NagumoParameter p, double d1, double d2, double a,
                                         const WaveSolution& reference, double target,
                                         const ContinuationOptions& opts) {
  const double p0 = p == NagumoParameter::D1 ? d1 : p == NagumoParameter::D2 ? d2 : a;
  return continue_branch(nagumo_family(p, d1, d2, a), reference, p0, target, opts, to_string(p));
}

}  // namespace latfront
