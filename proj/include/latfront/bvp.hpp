#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "latfront/mfde.hpp"
#include "latfront/wave_system.hpp"

namespace latfront {

using SparseMat = Eigen::SparseMatrix<double>;
using Profile = Mat;  // n x N, rows are grid nodes

struct Grid {
  double L = 40.0;
  double h = 0.05;
  int n = 0;

  double node(int i) const { return -L + i * h; }
  // Shift r in grid steps; throws when r is not an integer multiple of h.
  int steps(double r) const;
};

Grid make_grid(double L, double h, const std::vector<double>& shifts);

Profile initial_guess(const Grid& grid, double width, int components);

Vec flatten(const Profile& p);
Profile unflatten(const Vec& v, int n, int components);

Vec trapezoid_weights(const Grid& grid);
double inner(const Grid& grid, const Profile& u, const Profile& v);
double l2_norm(const Grid& grid, const Profile& u);
double h1_norm(const Grid& grid, const Profile& u);

// Second-order central difference, one-sided second order at both ends.
Profile derivative(const Grid& grid, const Profile& u);

// sum_j M_j u(xi + r_j) with off-grid values replaced by `left` below -L and `right` above L.
Profile apply_terms(const std::vector<CouplingTerm>& terms, const Grid& grid, const Profile& u, double left,
                    double right);

Profile residual_profile(const WaveSystem& system, const Grid& grid, const Profile& phi, double c);
Vec assemble_residual(const WaveSystem& system, const Grid& grid, const Profile& phi, double c);

// d residual / d phi  (the discrete linearisation about phi), node-major ordering i * N + p.
SparseMat linear_block(const WaveSystem& system, const Grid& grid, const Profile& phi, double c);
// Bordered Newton matrix: [d r/d phi, D phi ; phase gradient, 0].
SparseMat assemble_jacobian(const WaveSystem& system, const Grid& grid, const Profile& phi, double c,
                            const Profile& phase_ref);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  int max_halvings = 8;
  double tail_tol = 1e-5;
  bool check_boundary = true;
};

struct PhaseDatum {
  int component = 0;
  double level = 0.5;
  double location = 0.0;  // xi at which the component crosses the level, in grid coordinates
};

struct WaveSolution {
  Grid grid;
  double c = 0.0;
  Profile profile;
  double residual_norm = 0.0;
  int newton_iters = 0;
  PhaseDatum phase;
  bool pinning_suspected = false;

  int components() const { return static_cast<int>(profile.cols()); }
  // Node coordinates shifted so that the phase component crosses its level at 0.
  Vec aligned_nodes() const;
  // Linear interpolation at an aligned coordinate, clamped to 0 / 1 outside the grid.
  double sample(int component, double xi_aligned) const;
};

// First crossing of `level` by one component, scanning from the left (linear interpolation).
bool crossing(const Grid& grid, const Profile& phi, int component, double level, double* location);

WaveSolution newton_solve(const WaveSystem& system, const Grid& grid, const Profile& guess, double c_guess,
                          const NewtonOptions& opts = {}, const Profile* phase_ref = nullptr);

struct KernelData {
  Profile psi_plus;
  Profile psi_minus;
  int kernel_dim = 0;       // grid-resolved null directions
  int oscillatory_dim = 0;  // checkerboard null directions of the central difference, excluded above
  Vec smallest;         // smallest singular values of the discrete linearisation, ascending
  double largest = 0.0;
  double restricted_smallest = 0.0;  // first singular value above the null threshold
  double plus_residual = 0.0;        // max norm of L psi_plus
};

KernelData kernel_vectors(const WaveSystem& system, const WaveSolution& solution, int count = 6);
// Throws ErrorKind::KernelDimension unless the numerical kernel is one-dimensional.
void require_simple_kernel(const KernelData& kernel);

MfdeOperator linearization(const WaveSystem& system, const WaveSolution& solution);

}  // namespace latfront
