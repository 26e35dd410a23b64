#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "latfront/model.hpp"

namespace latfront {

namespace {

bool close_states(const std::vector<double>& u, const std::vector<double>& v, double tol) {
  for (std::size_t i = 0; i < u.size(); ++i)
    if (std::abs(u[i] - v[i]) > tol) return false;
  return true;
}

void merge_state(std::vector<PeriodicState>& out, PeriodicState s, double tol) {
  for (auto& e : out) {
    if (close_states(e.values, s.values, tol)) {
      if (s.residual < e.residual) e = s;
      return;
    }
  }
  out.push_back(std::move(s));
}

}  // namespace

std::vector<PeriodicState> find_two_periodic_equilibria(double d1, double a, const ScanSpec& scan) {
  if (d1 == 0.0)
    throw Error(ErrorKind::InvalidInput,
                "find_two_periodic_equilibria: d1 = 0 leaves y = x + f(x)/(2 d1) undefined; "
                "the sublattices decouple, treat each one as a homogeneous chain");
  if (!(scan.hi > scan.lo) || scan.points < 2)
    throw Error(ErrorKind::InvalidInput, "find_two_periodic_equilibria: empty scan interval");

  const CubicNonlinearity f{1.0, a};
  auto partner = [&](double x) { return x + f(x) / (2.0 * d1); };
  auto g = [&](double x) { return f(x) + f(partner(x)); };
  auto defect = [&](double x, double y) {
    double rx = 2.0 * d1 * (y - x) - f(x);
    double ry = 2.0 * d1 * (x - y) - f(y);
    return std::max(std::abs(rx), std::abs(ry));
  };
  auto make = [&](double x, double y) {
    PeriodicState s;
    s.period = 2;
    s.values = {x, y};
    s.residual = defect(x, y);
    s.tolerance = 1e-12;
    return s;
  };

  std::vector<PeriodicState> out;
  const double tol = 1e-9;
  merge_state(out, make(0.0, 0.0), tol);
  merge_state(out, make(a, a), tol);
  merge_state(out, make(1.0, 1.0), tol);

  const int n = scan.points;
  const double dx = (scan.hi - scan.lo) / (n - 1);
  double x0 = scan.lo, g0 = g(x0);
  for (int i = 1; i < n; ++i) {
    double x1 = scan.lo + i * dx, g1 = g(x1);
    double root = std::numeric_limits<double>::quiet_NaN();
    if (g0 == 0.0) {
      root = x0;
    } else if (g0 * g1 < 0.0) {
      double lo = x0, hi = x1, glo = g0;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double gm = g(mid);
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((gm < 0.0) == (glo < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      root = std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
    }
    if (std::isfinite(root) && std::abs(g(root)) <= 1e-12) merge_state(out, make(root, partner(root)), tol);
    x0 = x1;
    g0 = g1;
  }
  if (g0 == 0.0) merge_state(out, make(x0, partner(x0)), tol);

  std::sort(out.begin(), out.end(),
            [](const PeriodicState& l, const PeriodicState& r) { return l.values < r.values; });
  return out;
}

std::vector<PeriodicState> find_four_periodic_equilibria(double d1, double d2, double a,
                                                         const SeedSpec& seeds) {
  const LatticeModel m = nagumo_lattice(d1, d2, a, 4);
  // C(n, m) = sum over k with n + k = m mod 4 of a_{n,k}
  Eigen::Matrix4d C = Eigen::Matrix4d::Zero();
  for (const auto& [key, v] : m.couplings) C(key.first, positive_mod(key.first + key.second, 4)) += v;
  const CubicNonlinearity f{1.0, a};

  auto residual = [&](const Eigen::Vector4d& u) {
    Eigen::Vector4d r = C * u;
    for (int i = 0; i < 4; ++i) r(i) -= f(u(i));
    return r;
  };

  std::vector<PeriodicState> out;
  auto add = [&](const Eigen::Vector4d& u) {
    PeriodicState s;
    s.period = 4;
    s.values = {u(0), u(1), u(2), u(3)};
    s.residual = residual(u).cwiseAbs().maxCoeff();
    s.tolerance = 1e-12;
    merge_state(out, s, 1e-8);
  };
  add(Eigen::Vector4d::Zero());
  add(Eigen::Vector4d::Constant(a));
  add(Eigen::Vector4d::Constant(1.0));

  std::vector<double> vals;
  for (double v : seeds.values)
    if (v >= seeds.box_lo && v <= seeds.box_hi) vals.push_back(v);
  const std::size_t s = vals.size();
  for (std::size_t i0 = 0; i0 < s; ++i0)
    for (std::size_t i1 = 0; i1 < s; ++i1)
      for (std::size_t i2 = 0; i2 < s; ++i2)
        for (std::size_t i3 = 0; i3 < s; ++i3) {
          Eigen::Vector4d u(vals[i0], vals[i1], vals[i2], vals[i3]);
          bool ok = false;
          for (int it = 0; it < 60; ++it) {
            Eigen::Vector4d r = residual(u);
            double rn = r.cwiseAbs().maxCoeff();
            if (rn <= 1e-14) {
              ok = true;
              break;
            }
            Eigen::Matrix4d J = C;
            for (int k = 0; k < 4; ++k) J(k, k) -= f.derivative(u(k));
            Eigen::FullPivLU<Eigen::Matrix4d> lu(J);
            if (!lu.isInvertible()) break;
            Eigen::Vector4d du = lu.solve(-r);
            u += du;
            if (!u.allFinite() || u.cwiseAbs().maxCoeff() > 1e6) break;
            if (du.cwiseAbs().maxCoeff() <= 1e-15 * (1.0 + u.cwiseAbs().maxCoeff())) {
              ok = residual(u).cwiseAbs().maxCoeff() <= 1e-12;
              break;
            }
          }
          if (ok && residual(u).cwiseAbs().maxCoeff() <= 1e-12) add(u);
        }

  std::sort(out.begin(), out.end(),
            [](const PeriodicState& l, const PeriodicState& r) { return l.values < r.values; });
  return out;
}

}  // namespace latfront
