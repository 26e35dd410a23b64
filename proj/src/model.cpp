#include "latfront/model.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace latfront {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid_input";
    case ErrorKind::Convergence: return "convergence_failure";
    case ErrorKind::Hyperbolicity: return "hyperbolicity_violation";
    case ErrorKind::KernelDimension: return "kernel_dimension";
    case ErrorKind::Domain: return "domain_too_small";
    case ErrorKind::Config: return "invalid_config";
  }
  return "unknown";
}

int positive_mod(int n, int p) {
  int r = n % p;
  return r < 0 ? r + p : r;
}

double LatticeModel::coupling(int n, int k) const {
  auto it = couplings.find({positive_mod(n, period), k});
  return it == couplings.end() ? 0.0 : it->second;
}

void LatticeModel::set_coupling(int n, int k, double value) {
  auto key = std::make_pair(positive_mod(n, period), k);
  if (value == 0.0)
    couplings.erase(key);
  else
    couplings[key] = value;
}

void LatticeModel::add_coupling(int n, int k, double value) {
  set_coupling(n, k, coupling(n, k) + value);
}

int LatticeModel::max_range() const {
  int r = 0;
  for (const auto& [key, v] : couplings) r = std::max(r, std::abs(key.second));
  return r;
}

const CubicNonlinearity& LatticeModel::cubic(int n) const {
  return cubics.at(static_cast<std::size_t>(positive_mod(n, period)));
}

double LatticeModel::coupling_sum(int n, const std::vector<double>& values) const {
  const int p = static_cast<int>(values.size());
  double s = 0.0;
  const int nn = positive_mod(n, period);
  for (auto it = couplings.lower_bound({nn, std::numeric_limits<int>::min()});
       it != couplings.end() && it->first.first == nn; ++it) {
    s += it->second * values[static_cast<std::size_t>(positive_mod(n + it->first.second, p))];
  }
  return s;
}

double LatticeModel::max_stencil_sum() const {
  std::vector<double> sums(static_cast<std::size_t>(period), 0.0);
  for (const auto& [key, v] : couplings) sums[static_cast<std::size_t>(key.first)] += std::abs(v);
  double m = 0.0;
  for (double s : sums) m = std::max(m, s);
  return m;
}

double equilibrium_defect(const LatticeModel& model, const std::vector<double>& values) {
  const int p = static_cast<int>(values.size());
  const int sites = std::lcm(p, model.period);
  double worst = 0.0;
  for (int n = 0; n < sites; ++n) {
    double u = values[static_cast<std::size_t>(n % p)];
    double r = model.coupling_sum(n, values) - model.cubic(n)(u);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

LatticeModel build_nagumo_periodic(double d1, double d2, double a, int period) {
  if (!(a > 0.0 && a < 1.0)) {
    std::ostringstream os;
    os << "build_nagumo: a = " << a << " must lie in (0,1)";
    throw Error(ErrorKind::InvalidInput, os.str());
  }
  return nagumo_lattice(d1, d2, a, period);
}

LatticeModel nagumo_lattice(double d1, double d2, double a, int period) {
  if (period < 1) throw Error(ErrorKind::InvalidInput, "build_nagumo: period must be positive");
  LatticeModel m;
  m.period = period;
  for (int n = 0; n < period; ++n) {
    m.set_coupling(n, -2, d2);
    m.set_coupling(n, -1, d1);
    m.set_coupling(n, 0, -2.0 * d1 - 2.0 * d2);
    m.set_coupling(n, 1, d1);
    m.set_coupling(n, 2, d2);
    m.cubics.push_back({1.0, a});
  }
  std::ostringstream os;
  os << "nagumo d1=" << d1 << " d2=" << d2 << " a=" << a;
  m.metadata = os.str();
  return m;
}

LatticeModel build_nagumo(double d1, double d2, double a) { return build_nagumo_periodic(d1, d2, a, 1); }

}  // namespace latfront
