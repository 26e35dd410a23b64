#include "latfront/tails.hpp"

#include <cmath>
#include <sstream>

namespace latfront {

namespace {

double real_det(const MfdeOperator& op, End end, double s) {
  return characteristic_matrix(op, end, {s, 0.0}).determinant().real();
}

template <class F>
double bisect(F&& f, double a, double b, double fa, double tol = 1e-12) {
  for (int it = 0; it < 200 && b - a > tol * std::max(1.0, std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> decay_rates_constant(const MfdeOperator& op, End end, double lambda_max, int points) {
  if (op.speed == 0.0) throw Error(ErrorKind::InvalidInput, "decay rates: c must be nonzero");
  auto f = [&](double s) { return real_det(op, end, s); };
  std::vector<double> roots;
  double x0 = -lambda_max, f0 = f(x0);
  for (int i = 1; i <= points; ++i) {
    const double x1 = -lambda_max + 2.0 * lambda_max * i / points;
    const double f1 = f(x1);
    if (f0 == 0.0) {
      roots.push_back(x0);
    } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
      roots.push_back(bisect(f, x0, x1, f0));
    }
    x0 = x1;
    f0 = f1;
  }
  if (f0 == 0.0) roots.push_back(x0);
  return roots;
}

double select_rate(const std::vector<double>& roots, End end) {
  double best = 0.0;
  bool found = false;
  for (double r : roots) {
    if (end == End::Minus && r > 0.0 && (!found || r < best)) best = r, found = true;
    if (end == End::Plus && r < 0.0 && (!found || r > best)) best = r, found = true;
  }
  if (!found) {
    std::ostringstream os;
    os << "no real characteristic root of the required sign at the " << to_string(end)
       << " end; the front may not decay exponentially there";
    throw Error(ErrorKind::Domain, os.str());
  }
  return best;
}

Eigenpair principal_eigenpair(const Mat& B, double tol, int max_iter) {
  const int n = static_cast<int>(B.rows());
  if (n == 0 || B.cols() != n) throw Error(ErrorKind::InvalidInput, "principal_eigenpair: square matrix required");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && B(i, j) < 0.0) {
        std::ostringstream os;
        os << "principal_eigenpair: negative off-diagonal entry at (" << i << "," << j << ")";
        throw Error(ErrorKind::InvalidInput, os.str());
      }
  // strong connectivity: everything reachable from node 0 forwards and backwards
  for (bool forward : {true, false}) {
    std::vector<int> seen(static_cast<std::size_t>(n), 0), stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      for (int j = 0; j < n; ++j) {
        const double v = forward ? B(i, j) : B(j, i);
        if (j != i && v > 0.0 && !seen[static_cast<std::size_t>(j)]) {
          seen[static_cast<std::size_t>(j)] = 1;
          stack.push_back(j);
        }
      }
    }
    std::ostringstream os;
    bool bad = false;
    for (int j = 0; j < n; ++j)
      if (!seen[static_cast<std::size_t>(j)]) {
        os << (bad ? "," : "") << j;
        bad = true;
      }
    if (bad)
      throw Error(ErrorKind::InvalidInput, std::string("principal_eigenpair: reducible matrix; indices {") + os.str() +
                                               (forward ? "} unreachable from 0" : "} cannot reach 0"));
  }
  const double sigma = B.diagonal().cwiseAbs().maxCoeff() + 1.0;
  const Mat S = B + sigma * Mat::Identity(n, n);
  const double scale = std::max(B.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
  Eigenpair e;
  Vec v = Vec::Ones(n);
  for (int it = 1; it <= max_iter; ++it) {
    Vec w = S * v;
    v = w / w.cwiseAbs().maxCoeff();
    const double lam = v.dot(B * v) / v.dot(v);
    e.iterations = it;
    e.lambda = lam;
    if ((B * v - lam * v).cwiseAbs().maxCoeff() <= tol * scale) break;
  }
  e.vector = v / v.cwiseAbs().maxCoeff();
  return e;
}

Mat weighted_coupling_matrix(const LatticeModel& model, double mu) {
  const int P = model.period;
  Mat B = Mat::Zero(P, P);
  for (const auto& [key, v] : model.couplings) {
    const int p = key.first, k = key.second;
    B(p, positive_mod(p + k, P)) += v * std::exp(k * mu);
  }
  return B;
}

PeriodicRate periodic_decay_rate(const LatticeModel& model, End end, double c) {
  if (c == 0.0) throw Error(ErrorKind::InvalidInput, "periodic_decay_rate: c must be nonzero");
  const int P = model.period;
  const double u = end == End::Minus ? 0.0 : 1.0;
  Vec L(P);
  for (int p = 0; p < P; ++p) L(p) = model.cubic(p).derivative(u);
  auto matrix = [&](double mu) {
    Mat B = weighted_coupling_matrix(model, mu / P);
    B.diagonal() -= L;
    return B;
  };
  auto F = [&](double mu) { return principal_eigenpair(matrix(mu)).lambda - c * mu; };
  const double sgn = end == End::Minus ? 1.0 : -1.0;
  double hi = 10.0;
  for (int expand = 0; expand <= 3; ++expand, hi *= 2.0) {
    const int points = 400;
    double x0 = sgn * 1e-9, f0 = F(x0);
    for (int i = 1; i <= points; ++i) {
      const double x1 = sgn * hi * i / points;
      const double f1 = F(x1);
      if ((f0 < 0.0) != (f1 < 0.0)) {
        double a = std::min(x0, x1), b = std::max(x0, x1);
        double fa = a == x0 ? f0 : f1;
        PeriodicRate r;
        r.mu = bisect(F, a, b, fa);
        r.mu_site = r.mu / P;
        r.eigenvector = principal_eigenpair(matrix(r.mu)).vector;
        return r;
      }
      x0 = x1;
      f0 = f1;
    }
  }
  std::ostringstream os;
  os << "periodic_decay_rate: no bracketing interval for the " << to_string(end) << " end up to |mu| = " << hi / 2.0;
  throw Error(ErrorKind::Domain, os.str());
}

TailFit fit_tail(const WaveSolution& solution, End end, double window, int component) {
  if (!(window > 0.0 && window <= 1.0)) throw Error(ErrorKind::InvalidInput, "fit_tail: window must lie in (0, 1]");
  const Grid& g = solution.grid;
  if (component < 0 || component >= solution.components()) throw Error(ErrorKind::InvalidInput, "fit_tail: bad component");
  std::vector<double> xs, ys;
  const int half = (g.n - 1) / 2;
  const int span = static_cast<int>(std::floor(window * half));
  for (int j = 0; j <= span; ++j) {
    const int i = end == End::Minus ? j : g.n - 1 - j;
    const double v = solution.profile(i, component);
    const double amp = std::abs(end == End::Minus ? v : 1.0 - v);
    if (amp >= 1e-12 && amp <= 1e-2) {
      xs.push_back(g.node(i));
      ys.push_back(std::log(amp));
    }
  }
  if (xs.size() < 8) {
    std::ostringstream os;
    os << "fit_tail: only " << xs.size() << " usable tail points at the " << to_string(end)
       << " end (need 8); widen the window or the domain";
    throw Error(ErrorKind::InvalidInput, os.str());
  }
  const double n = static_cast<double>(xs.size());
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) xm += xs[i], ym += ys[i];
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - xm) * (xs[i] - xm);
    sxy += (xs[i] - xm) * (ys[i] - ym);
    syy += (ys[i] - ym) * (ys[i] - ym);
  }
  TailFit f;
  f.rate = sxy / sxx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  f.points = static_cast<int>(xs.size());
  return f;
}

TailReport tail_report(const WaveSystem& system, double c) {
  const MfdeOperator op = limit_operator(system, c);
  TailReport r;
  r.method = "characteristic_root";
  r.lambda0 = select_rate(decay_rates_constant(op, End::Minus), End::Minus);
  r.lambda1 = select_rate(decay_rates_constant(op, End::Plus), End::Plus);
  return r;
}

TailReport tail_report(const LatticeModel& model, double c) {
  TailReport r;
  r.method = "principal_eigenvalue";
  PeriodicRate m = periodic_decay_rate(model, End::Minus, c);
  PeriodicRate p = periodic_decay_rate(model, End::Plus, c);
  r.lambda0 = m.mu;
  r.lambda1 = p.mu;
  r.eigvec0 = m.eigenvector;
  r.eigvec1 = p.eigenvector;
  return r;
}

}  // namespace latfront
