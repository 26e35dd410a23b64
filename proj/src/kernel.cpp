#include <Eigen/SparseLU>
#include <cmath>
#include <random>
#include <sstream>

#include "latfront/bvp.hpp"

namespace latfront {

namespace {

using LU = Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>>;

void orthonormalize(Mat& X) {
  Eigen::HouseholderQR<Mat> qr(X);
  X = qr.householderQ() * Mat::Identity(X.rows(), X.cols());
}

// Smallest singular triplets of J by inverse subspace iteration on (J^T J)^{-1} (or (J J^T)^{-1}).
// Returns the basis X (columns ascending by singular value) and the singular values.
void smallest_singular(const SparseMat& J, LU& lu, bool transpose, int k, Mat& X, Vec& sv) {
  const int m = static_cast<int>(J.rows());
  std::mt19937_64 rng(20240611u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  X.resize(m, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < m; ++i) X(i, j) = dist(rng);
  orthonormalize(X);
  Vec prev = Vec::Constant(k, -1.0);
  for (int it = 0; it < 300; ++it) {
    Mat Y(m, k);
    for (int j = 0; j < k; ++j) {
      if (!transpose) {
        Vec t = lu.transpose().solve(X.col(j));
        Y.col(j) = lu.solve(t);
      } else {
        Vec t = lu.solve(X.col(j));
        Y.col(j) = lu.transpose().solve(t);
      }
    }
    if (!Y.allFinite()) throw Error(ErrorKind::Convergence, "kernel_vectors: non-finite inverse iterate");
    X = Y;
    orthonormalize(X);
    Mat B = transpose ? Mat(J.transpose() * X) : Mat(J * X);
    Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeThinV);
    Vec s = svd.singularValues().reverse();
    Mat V = svd.matrixV().rowwise().reverse();
    X = X * V;
    sv = s;
    bool done = true;
    for (int j = 0; j < std::min(k, 2); ++j)
      if (std::abs(s(j) - prev(j)) > 1e-10 * std::max(s(j), 1e-300) + 1e-300) done = false;
    prev = s;
    if (done && it > 2) break;
  }
}

double largest_singular(const SparseMat& J) {
  const int m = static_cast<int>(J.rows());
  Vec x = Vec::Ones(m) / std::sqrt(static_cast<double>(m));
  for (int i = 0; i < m; i += 2) x(i) = -x(i);
  double s = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vec y = J.transpose() * (J * x);
    double ns = std::sqrt(y.norm());
    x = y / y.norm();
    if (std::abs(ns - s) <= 1e-12 * ns) {
      s = ns;
      break;
    }
    s = ns;
  }
  return (J * x).norm();
}

// Splits the span of the first `d` columns of X into grid-resolved and checkerboard directions.
// Central differences admit null modes of the form (-1)^i w(xi) whenever every shift is an even
// number of grid steps; those are discretisation artefacts, not translation modes.
Mat smooth_basis(const Mat& X, int d, int n, int N, int* rough) {
  *rough = 0;
  if (d == 0) return Mat(X.rows(), 0);
  Mat G(static_cast<Eigen::Index>(n - 1) * N, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i + 1 < n; ++i)
      for (int p = 0; p < N; ++p) G(i * N + p, j) = 0.5 * (X((i + 1) * N + p, j) - X(i * N + p, j));
  Eigen::SelfAdjointEigenSolver<Mat> es(G.transpose() * G);
  Mat V = X.leftCols(d) * es.eigenvectors();
  int smooth = 0;
  while (smooth < d && es.eigenvalues()(smooth) < 0.25) ++smooth;
  *rough = d - smooth;
  return V.leftCols(smooth);
}

}  // namespace

KernelData kernel_vectors(const WaveSystem& system, const WaveSolution& solution, int count) {
  const Grid& grid = solution.grid;
  const int n = grid.n;
  const int N = solution.components();
  const int m = n * N;
  count = std::max(2, std::min(count, m));

  SparseMat J = linear_block(system, grid, solution.profile, solution.c);
  J.makeCompressed();
  LU lu;
  lu.compute(J);
  if (lu.info() != Eigen::Success)
    throw Error(ErrorKind::KernelDimension, "kernel_vectors: discrete linearisation is exactly singular");

  KernelData out;
  Mat Xr, Xl;
  Vec sr, sl;
  smallest_singular(J, lu, false, count, Xr, sr);
  smallest_singular(J, lu, true, count, Xl, sl);
  out.smallest = sr;
  out.largest = largest_singular(J);
  int near = 0, near_left = 0;
  for (int j = 0; j < sr.size(); ++j)
    if (sr(j) < 1e-6 * out.largest) ++near;
  for (int j = 0; j < sl.size(); ++j)
    if (sl(j) < 1e-6 * out.largest) ++near_left;
  int rough = 0, rough_left = 0;
  Mat right = smooth_basis(Xr, near, n, N, &rough);
  Mat left = smooth_basis(Xl, near_left, n, N, &rough_left);
  out.kernel_dim = static_cast<int>(right.cols());
  out.oscillatory_dim = rough;
  out.restricted_smallest = near < sr.size() ? sr(near) : sr(sr.size() - 1);

  const Vec w = trapezoid_weights(grid);
  Profile dphi = derivative(grid, solution.profile);
  out.psi_plus = dphi / l2_norm(grid, dphi);
  out.plus_residual = (J * flatten(out.psi_plus)).cwiseAbs().maxCoeff();

  // Adjoint in the weighted pairing is W^{-1} J^T W, so its null vector is W^{-1} times a left null vector of J.
  Profile u = unflatten(left.cols() > 0 ? Vec(left.col(0)) : Vec(Xl.col(0)), n, N);
  for (int i = 0; i < n; ++i) u.row(i) /= w(i);
  u /= l2_norm(grid, u);
  if (inner(grid, dphi, u) < 0.0) u = -u;
  out.psi_minus = u;
  return out;
}

void require_simple_kernel(const KernelData& kernel) {
  if (kernel.kernel_dim != 1) {
    std::ostringstream os;
    os << "kernel dimension estimate is " << kernel.kernel_dim << " (smallest singular values";
    for (int i = 0; i < kernel.smallest.size(); ++i) os << " " << kernel.smallest(i);
    if (kernel.oscillatory_dim > 0) os << ", " << kernel.oscillatory_dim << " grid-scale mode(s) excluded";
    os << ", largest " << kernel.largest << "); the fixed-point and continuation steps need a one-dimensional kernel";
    throw Error(ErrorKind::KernelDimension, os.str());
  }
}

}  // namespace latfront
