#include <cmath>
#include <sstream>

#include "latfront/model.hpp"

namespace latfront {

TransformedModel transform_periodic(const LatticeModel& model, const PeriodicState& minus,
                                    const PeriodicState& plus, double equilibrium_tol) {
  const int P = model.period;
  if (static_cast<int>(minus.values.size()) != P || static_cast<int>(plus.values.size()) != P)
    throw Error(ErrorKind::InvalidInput, "transform: equilibria must have the period of the model");
  for (const auto* s : {&minus, &plus}) {
    double d = equilibrium_defect(model, s->values);
    if (!(d <= equilibrium_tol)) {
      std::ostringstream os;
      os << "transform: state is not an equilibrium (defect " << d << " > " << equilibrium_tol << ")";
      throw Error(ErrorKind::InvalidInput, os.str());
    }
  }

  TransformedModel out;
  out.delta.resize(P);
  for (int n = 0; n < P; ++n) {
    out.delta[n] = plus.values[n] - minus.values[n];
    if (std::abs(out.delta[n]) < 1e-14) {
      std::ostringstream os;
      os << "transform: zero denominator, site " << n << " has equal values in both equilibria";
      throw Error(ErrorKind::InvalidInput, os.str());
    }
  }

  LatticeModel& t = out.model;
  t.period = P;
  for (const auto& [key, v] : model.couplings) {
    auto [n, k] = key;
    if (k == 0) continue;
    t.add_coupling(n, k, v * out.delta[positive_mod(n + k, P)] / out.delta[n]);
  }
  for (int n = 0; n < P; ++n) {
    double s = 0.0;
    for (const auto& [key, v] : t.couplings)
      if (key.first == n && key.second != 0) s += v;
    t.set_coupling(n, 0, -s);
  }

  // v' = sum_{k!=0} a'_{n,k} v_{n+k} + a_{n,0} v_n - [g(u_- + D v) - g(u_-)]/D
  //    = sum_k a'_{n,k} v_{n+k} - F_n(v_n)
  out.printed_a.resize(P);
  out.substitution_defect.resize(P);
  for (int n = 0; n < P; ++n) {
    const CubicNonlinearity& g = model.cubic(n);
    const double um = minus.values[n];
    const double D = out.delta[n];
    const double c3 = g.k * D * D;
    const double c2 = 0.5 * g.second_derivative(um) * D;
    const double c1 = g.derivative(um) - (model.coupling(n, 0) - t.coupling(n, 0));
    CubicNonlinearity F{c3, -c2 / c3 - 1.0};
    t.cubics.push_back(F);
    out.substitution_defect[n] = c3 + c2 + c1;
    out.printed_a[n] = -g.second_derivative(um) / (g.k * D) - 1.0;
  }
  std::ostringstream os;
  os << "transformed[" << model.metadata << "]";
  t.metadata = os.str();
  return out;
}

LatticeModel TwoSiteSystem::lattice(double eps) const {
  LatticeModel m;
  m.period = 2;
  const double dd = eps * d2;
  m.set_coupling(0, -1, d_e);
  m.set_coupling(0, 1, d_e);
  m.set_coupling(1, -1, d_o);
  m.set_coupling(1, 1, d_o);
  for (int n = 0; n < 2; ++n) {
    m.set_coupling(n, -2, dd);
    m.set_coupling(n, 2, dd);
  }
  m.set_coupling(0, 0, -2.0 * d_e - 2.0 * dd);
  m.set_coupling(1, 0, -2.0 * d_o - 2.0 * dd);
  m.cubics = {f_e, f_o};
  std::ostringstream os;
  os << "two-site d_e=" << d_e << " d_o=" << d_o << " d2=" << d2 << " eps=" << eps;
  m.metadata = os.str();
  return m;
}

TwoSiteSystem two_site_transform(double d1, double d2, double a, const PeriodicState& minus,
                                 const PeriodicState& plus) {
  if (d1 == 0.0)
    throw Error(ErrorKind::InvalidInput,
                "two_site_transform: d1 = 0 decouples the two sublattices; no two-site system");
  const LatticeModel m = nagumo_lattice(d1, d2, a, 2);
  TransformedModel t = transform_periodic(m, minus, plus);

  TwoSiteSystem s;
  s.d1 = d1;
  s.d_e = t.model.coupling(0, 1);
  s.d_o = t.model.coupling(1, 1);
  s.d2 = d2;
  s.f_e = t.model.cubics[0];
  s.f_o = t.model.cubics[1];
  s.minus = minus;
  s.plus = plus;
  s.printed_a_e = t.printed_a[0];
  s.printed_a_o = t.printed_a[1];
  s.discrepancy = std::abs(s.f_e.a - s.printed_a_e) > 1e-9 || std::abs(s.f_o.a - s.printed_a_o) > 1e-9;
  s.substitution_defect = std::max(std::abs(t.substitution_defect[0]), std::abs(t.substitution_defect[1]));
  return s;
}

std::vector<std::tuple<int, int, int>> FourSiteSystem::quasipositivity_violations(double tol) const {
  std::vector<std::tuple<int, int, int>> out;
  const Eigen::Matrix4d* mats[3] = {&At1, &At2, &At3};
  for (int m = 0; m < 3; ++m)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i != j && (*mats[m])(i, j) < -tol) out.emplace_back(m + 1, i, j);
  return out;
}

FourSiteSystem four_site_transform(double d1, double d2, double a, const PeriodicState& minus,
                                   const PeriodicState& plus) {
  const LatticeModel m = nagumo_lattice(d1, d2, a, 4);
  TransformedModel t = transform_periodic(m, minus, plus);

  FourSiteSystem s;
  s.d1 = d1;
  s.d2 = d2;
  s.A1.setZero();
  s.A2.setZero();
  s.A3.setZero();
  Eigen::Matrix4d* by_shift[3] = {&s.A1, &s.A2, &s.A3};
  for (const auto& [key, v] : t.model.couplings) {
    auto [n, k] = key;
    int target = n + k;
    int q = target >= 0 ? target / 4 : -((-target + 3) / 4);
    int col = target - 4 * q;
    (*by_shift[q + 1])(n, col) += v;
  }

  // w-x and x-y first-neighbour couplings inside a cell form the perturbation
  s.B2.setZero();
  s.B2(0, 1) = s.A2(0, 1);
  s.B2(1, 0) = s.A2(1, 0);
  s.B2(1, 2) = s.A2(1, 2);
  s.B2(2, 1) = s.A2(2, 1);
  for (int i = 0; i < 4; ++i) s.B2(i, i) = -(s.B2.row(i).sum() - s.B2(i, i));
  s.At1 = s.A1;
  s.At3 = s.A3;
  s.At2 = s.A2 - s.B2;

  s.cubics = t.model.cubics;
  s.minus = minus;
  s.plus = plus;
  s.transformed = t.model;
  for (double d : t.substitution_defect) s.substitution_defect = std::max(s.substitution_defect, std::abs(d));
  return s;
}

}  // namespace latfront
