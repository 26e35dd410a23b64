#include "latfront/bvp.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>

namespace latfront {

int Grid::steps(double r) const {
  const double q = r / h;
  const double k = std::round(q);
  if (std::abs(q - k) > 1e-12 * std::max(1.0, std::abs(q))) {
    std::ostringstream os;
    os.precision(17);
    os << "grid: shift r = " << r << " is not an integer multiple of h = " << h;
    throw Error(ErrorKind::InvalidInput, os.str());
  }
  return static_cast<int>(k);
}

Grid make_grid(double L, double h, const std::vector<double>& shifts) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidInput, "grid: h must be positive");
  if (!(L >= 10.0 * h)) throw Error(ErrorKind::InvalidInput, "grid: need L >= 10 h");
  Grid g;
  g.L = L;
  g.h = h;
  g.n = 2 * static_cast<int>(std::floor(L / h + 1e-9)) + 1;
  if (g.n < 51) throw Error(ErrorKind::InvalidInput, "grid: fewer than 51 nodes");
  for (double r : shifts) g.steps(r);
  return g;
}

Profile initial_guess(const Grid& grid, double width, int components) {
  if (!(width > 0.0)) throw Error(ErrorKind::InvalidInput, "initial_guess: width must be positive");
  Profile p(grid.n, components);
  for (int i = 0; i < grid.n; ++i) {
    double v = 1.0 / (1.0 + std::exp(-grid.node(i) / width));
    p.row(i).setConstant(v);
  }
  return p;
}

Vec flatten(const Profile& p) {
  Vec v(p.size());
  const int N = static_cast<int>(p.cols());
  for (int i = 0; i < p.rows(); ++i)
    for (int q = 0; q < N; ++q) v(i * N + q) = p(i, q);
  return v;
}

Profile unflatten(const Vec& v, int n, int components) {
  Profile p(n, components);
  for (int i = 0; i < n; ++i)
    for (int q = 0; q < components; ++q) p(i, q) = v(i * components + q);
  return p;
}

Vec trapezoid_weights(const Grid& grid) {
  Vec w = Vec::Constant(grid.n, grid.h);
  w(0) = w(grid.n - 1) = 0.5 * grid.h;
  return w;
}

double inner(const Grid& grid, const Profile& u, const Profile& v) {
  return trapezoid_weights(grid).dot(u.cwiseProduct(v).rowwise().sum());
}

double l2_norm(const Grid& grid, const Profile& u) { return std::sqrt(inner(grid, u, u)); }

double h1_norm(const Grid& grid, const Profile& u) {
  Profile du = derivative(grid, u);
  return std::sqrt(inner(grid, u, u) + inner(grid, du, du));
}

Profile derivative(const Grid& grid, const Profile& u) {
  const int n = static_cast<int>(u.rows());
  const double s = 1.0 / (2.0 * grid.h);
  Profile d(u.rows(), u.cols());
  for (int i = 1; i + 1 < n; ++i) d.row(i) = s * (u.row(i + 1) - u.row(i - 1));
  d.row(0) = s * (-3.0 * u.row(0) + 4.0 * u.row(1) - u.row(2));
  d.row(n - 1) = s * (3.0 * u.row(n - 1) - 4.0 * u.row(n - 2) + u.row(n - 3));
  return d;
}

Profile apply_terms(const std::vector<CouplingTerm>& terms, const Grid& grid, const Profile& u, double left,
                    double right) {
  const int n = static_cast<int>(u.rows());
  const int N = static_cast<int>(u.cols());
  Profile out = Profile::Zero(n, N);
  Eigen::RowVectorXd lv = Eigen::RowVectorXd::Constant(N, left), rv = Eigen::RowVectorXd::Constant(N, right);
  for (const auto& t : terms) {
    const int s = grid.steps(t.shift);
    const Mat Mt = t.matrix.transpose();
    for (int i = 0; i < n; ++i) {
      const int j = i + s;
      if (j < 0)
        out.row(i) += lv * Mt;
      else if (j >= n)
        out.row(i) += rv * Mt;
      else
        out.row(i) += u.row(j) * Mt;
    }
  }
  return out;
}

Profile residual_profile(const WaveSystem& system, const Grid& grid, const Profile& phi, double c) {
  Profile r = c * derivative(grid, phi) - apply_terms(system.terms, grid, phi, 0.0, 1.0);
  for (int q = 0; q < phi.cols(); ++q) {
    const CubicNonlinearity& G = system.reactions[static_cast<std::size_t>(q)];
    for (int i = 0; i < phi.rows(); ++i) r(i, q) += G(phi(i, q));
  }
  return r;
}

Vec assemble_residual(const WaveSystem& system, const Grid& grid, const Profile& phi, double c) {
  return flatten(residual_profile(system, grid, phi, c));
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void linear_triplets(const WaveSystem& system, const Grid& grid, const Profile& phi, double c, Triplets& t) {
  const int n = static_cast<int>(phi.rows());
  const int N = static_cast<int>(phi.cols());
  const double s = c / (2.0 * grid.h);
  for (int i = 0; i < n; ++i) {
    for (int p = 0; p < N; ++p) {
      const int row = i * N + p;
      if (i == 0) {
        t.emplace_back(row, 0 * N + p, -3.0 * s);
        t.emplace_back(row, 1 * N + p, 4.0 * s);
        t.emplace_back(row, 2 * N + p, -s);
      } else if (i == n - 1) {
        t.emplace_back(row, (n - 1) * N + p, 3.0 * s);
        t.emplace_back(row, (n - 2) * N + p, -4.0 * s);
        t.emplace_back(row, (n - 3) * N + p, s);
      } else {
        t.emplace_back(row, (i + 1) * N + p, s);
        t.emplace_back(row, (i - 1) * N + p, -s);
      }
      t.emplace_back(row, row, system.reactions[static_cast<std::size_t>(p)].derivative(phi(i, p)));
    }
  }
  for (const auto& term : system.terms) {
    const int st = grid.steps(term.shift);
    for (int i = 0; i < n; ++i) {
      const int j = i + st;
      if (j < 0 || j >= n) continue;
      for (int p = 0; p < N; ++p)
        for (int q = 0; q < N; ++q)
          if (term.matrix(p, q) != 0.0) t.emplace_back(i * N + p, j * N + q, -term.matrix(p, q));
    }
  }
}

}  // namespace

SparseMat linear_block(const WaveSystem& system, const Grid& grid, const Profile& phi, double c) {
  const int m = static_cast<int>(phi.size());
  Triplets t;
  linear_triplets(system, grid, phi, c, t);
  SparseMat J(m, m);
  J.setFromTriplets(t.begin(), t.end());
  return J;
}

SparseMat assemble_jacobian(const WaveSystem& system, const Grid& grid, const Profile& phi, double c,
                            const Profile& phase_ref) {
  const int m = static_cast<int>(phi.size());
  const int N = static_cast<int>(phi.cols());
  Triplets t;
  linear_triplets(system, grid, phi, c, t);
  const Vec dphi = flatten(derivative(grid, phi));
  for (int k = 0; k < m; ++k)
    if (dphi(k) != 0.0) t.emplace_back(k, m, dphi(k));
  const Vec w = trapezoid_weights(grid);
  const Profile dref = derivative(grid, phase_ref);
  for (int i = 0; i < phi.rows(); ++i)
    for (int p = 0; p < N; ++p)
      if (dref(i, p) != 0.0) t.emplace_back(m, i * N + p, w(i) * dref(i, p));
  SparseMat J(m + 1, m + 1);
  J.setFromTriplets(t.begin(), t.end());
  return J;
}

bool crossing(const Grid& grid, const Profile& phi, int component, double level, double* location) {
  for (int i = 0; i + 1 < phi.rows(); ++i) {
    const double a = phi(i, component) - level, b = phi(i + 1, component) - level;
    if (a == 0.0) {
      *location = grid.node(i);
      return true;
    }
    if ((a < 0.0) != (b < 0.0)) {
      *location = grid.node(i) + grid.h * a / (a - b);
      return true;
    }
  }
  return false;
}

Vec WaveSolution::aligned_nodes() const {
  Vec x(grid.n);
  for (int i = 0; i < grid.n; ++i) x(i) = grid.node(i) - phase.location;
  return x;
}

double WaveSolution::sample(int component, double xi_aligned) const {
  const double t = (xi_aligned + phase.location + grid.L) / grid.h;
  if (t < 0.0) return 0.0;
  if (t > grid.n - 1) return 1.0;
  int i = static_cast<int>(std::floor(t));
  if (i >= grid.n - 1) i = grid.n - 2;
  const double f = t - i;
  return (1.0 - f) * profile(i, component) + f * profile(i + 1, component);
}

WaveSolution newton_solve(const WaveSystem& system, const Grid& grid, const Profile& guess, double c_guess,
                          const NewtonOptions& opts, const Profile* phase_ref) {
  const int n = grid.n;
  const int N = system.components;
  if (guess.rows() != n || guess.cols() != N)
    throw Error(ErrorKind::InvalidInput, "newton_solve: guess does not match grid and system size");
  if (!guess.allFinite() || !std::isfinite(c_guess))
    throw Error(ErrorKind::InvalidInput, "newton_solve: non-finite initial guess");
  for (const auto& t : system.terms) grid.steps(t.shift);

  const Profile ref = phase_ref ? *phase_ref : guess;
  const Vec w = trapezoid_weights(grid);
  const Profile dref = derivative(grid, ref);
  auto phase_value = [&](const Profile& phi) {
    return w.dot((phi - ref).cwiseProduct(dref).rowwise().sum());
  };
  auto merit = [&](const Profile& phi, double c, double* rmax) {
    double r = residual_profile(system, grid, phi, c).cwiseAbs().maxCoeff();
    if (rmax) *rmax = r;
    return std::max(r, std::abs(phase_value(phi)));
  };

  Profile phi = guess;
  double c = c_guess;
  double rnorm = 0.0;
  double m = merit(phi, c, &rnorm);
  int it = 0;
  Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>> lu;
  bool analysed = false;
  while (!(rnorm <= opts.tol && std::abs(phase_value(phi)) <= opts.tol)) {
    if (it >= opts.max_iter) {
      std::ostringstream os;
      os << "newton_solve: no convergence after " << it << " iterations, residual " << rnorm << " (c = " << c << ")";
      throw Error(ErrorKind::Convergence, os.str());
    }
    SparseMat J = assemble_jacobian(system, grid, phi, c, ref);
    J.makeCompressed();
    if (!analysed) {
      lu.analyzePattern(J);
      analysed = true;
    }
    lu.factorize(J);
    if (lu.info() != Eigen::Success)
      throw Error(ErrorKind::Convergence,
                  "newton_solve: singular linear solve; the linearisation may have more than a "
                  "one-dimensional kernel (run kernel_vectors)");
    Vec F(J.rows());
    F.head(n * N) = assemble_residual(system, grid, phi, c);
    F(n * N) = phase_value(phi);
    Vec dx = lu.solve(-F);
    if (!dx.allFinite()) throw Error(ErrorKind::Convergence, "newton_solve: non-finite Newton step");
    const Profile dphi = unflatten(dx.head(n * N), n, N);
    double lambda = 1.0;
    Profile trial;
    double ct = c, mt = 0.0, rt = 0.0;
    for (int k = 0; k <= opts.max_halvings; ++k) {
      trial = phi + lambda * dphi;
      ct = c + lambda * dx(n * N);
      mt = merit(trial, ct, &rt);
      if (std::isfinite(mt) && mt < m) break;
      lambda *= 0.5;
    }
    if (!std::isfinite(mt)) throw Error(ErrorKind::Convergence, "newton_solve: iterate became non-finite");
    phi = trial;
    c = ct;
    m = mt;
    rnorm = rt;
    ++it;
  }

  WaveSolution sol;
  sol.grid = grid;
  sol.c = c;
  sol.profile = phi;
  sol.residual_norm = rnorm;
  sol.newton_iters = it;
  sol.pinning_suspected = std::abs(c) < 1e-6;
  double loc = 0.0;
  if (crossing(grid, phi, 0, 0.5, &loc)) sol.phase.location = loc;

  if (opts.check_boundary) {
    double left = phi.row(0).cwiseAbs().maxCoeff();
    double right = (phi.row(n - 1).array() - 1.0).abs().maxCoeff();
    if (left > opts.tail_tol || right > opts.tail_tol) {
      std::ostringstream os;
      os << "newton_solve: profile has not reached its end states at the domain boundary (|phi(-L)| = " << left
         << ", |phi(L) - 1| = " << right << ", tolerance " << opts.tail_tol
         << "); increase L beyond a few multiples of 1/decay rate";
      throw Error(ErrorKind::Domain, os.str());
    }
  }
  return sol;
}

MfdeOperator linearization(const WaveSystem& system, const WaveSolution& solution) {
  MfdeOperator op = limit_operator(system, solution.c);
  const WaveSolution s = solution;
  const std::vector<CubicNonlinearity> g = system.reactions;
  op.gamma = [s, g](double xi) {
    Vec out(static_cast<int>(g.size()));
    for (std::size_t p = 0; p < g.size(); ++p)
      out(static_cast<int>(p)) = g[p].derivative(s.sample(static_cast<int>(p), xi - s.phase.location));
    return out;
  };
  return op;
}

}  // namespace latfront
