#pragma once

#include <vector>

#include "latfront/bvp.hpp"
#include "latfront/model.hpp"

namespace latfront {

struct SimState {
  std::vector<double> sites;  // u_0 .. u_{M-1}; site n carries the reaction of residue n mod period
  double t = 0.0;
  std::vector<double> left;   // equilibrium values beyond the left end, one per residue
  std::vector<double> right;  // same beyond the right end
};

// Logistic front between the homogeneous states 0 and 1 centred at site `position`.
SimState front_state(int M, double position, double width, int period = 1);

struct Trajectory {
  int period = 1;
  double dt = 0.0;
  int stride = 1;
  std::vector<double> times;
  std::vector<std::vector<double>> snapshots;
};

double max_stable_dt(const LatticeModel& model, const SimState& init);

// Fixed-step RK4; a snapshot every `stride` steps, including t = 0 and the final time.
Trajectory integrate(const LatticeModel& model, const SimState& init, double dt, double T, int stride = 1);

enum class Locator { Crossing, Mass };

struct SpeedMeasurement {
  double c = 0.0;
  double fit_residual = 0.0;
  double t_a = 0.0;
  double t_b = 0.0;
  double level = 0.5;
  Locator locator = Locator::Crossing;
};

// Front position in cell units of one residue; `window` is the trailing fraction of the run used.
std::vector<double> front_positions(const Trajectory& traj, double level, int residue, Locator locator);
SpeedMeasurement measure_speed(const Trajectory& traj, double level = 0.5, int residue = 0, double window = 0.5,
                               Locator locator = Locator::Crossing);

struct ExtractedProfile {
  Vec xi;
  Profile values;  // one column per residue
  double scatter = 0.0;
  bool traveling_wave = true;  // scatter <= 0.05
  Vec counts;                  // samples per node
};

// Co-moving profile phi_p(xi) = u_{Pk+p}((xi - k) / c), interpolated in time on each site and averaged across sites.
ExtractedProfile extract_profile(const Trajectory& traj, double c, double h = 0.05, double window = 0.5);

struct MonotonicityReport {
  bool monotone = false;
  int direction = 0;             // +1 nondecreasing, -1 nonincreasing, 0 constant
  double worst_violation = 0.0;  // largest difference against the chosen direction
  int worst_index = -1;
  int worst_component = -1;
  double min_step = 0.0;  // smallest direction * difference; > 0 means strict
};

MonotonicityReport check_monotonicity(const Profile& values, double tol = 1e-8);

}  // namespace latfront
