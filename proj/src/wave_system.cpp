#include "latfront/wave_system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace latfront {

std::vector<double> WaveSystem::shifts() const {
  std::vector<double> s;
  for (const auto& t : terms) s.push_back(t.shift);
  return s;
}

std::vector<CouplingTerm> merge_terms(std::vector<CouplingTerm> terms) {
  std::sort(terms.begin(), terms.end(), [](const CouplingTerm& l, const CouplingTerm& r) { return l.shift < r.shift; });
  std::vector<CouplingTerm> out;
  for (auto& t : terms) {
    if (!out.empty() && std::abs(out.back().shift - t.shift) <= 1e-12 * std::max(1.0, std::abs(t.shift)))
      out.back().matrix += t.matrix;
    else
      out.push_back(std::move(t));
  }
  std::vector<CouplingTerm> nonzero;
  for (auto& t : out)
    if (t.matrix.cwiseAbs().maxCoeff() > 0.0) nonzero.push_back(std::move(t));
  return nonzero;
}

std::vector<CouplingTerm> coupling_terms(const LatticeModel& model) {
  const int P = model.period;
  std::vector<CouplingTerm> terms;
  for (const auto& [key, v] : model.couplings) {
    auto [n, k] = key;
    const int target = n + k;
    const int q = target >= 0 ? target / P : -((-target + P - 1) / P);
    const int col = target - P * q;
    CouplingTerm t{static_cast<double>(q), Mat::Zero(P, P)};
    t.matrix(n, col) = v;
    terms.push_back(std::move(t));
  }
  return merge_terms(std::move(terms));
}

WaveSystem wave_system(const LatticeModel& model) {
  WaveSystem w;
  w.components = model.period;
  w.terms = coupling_terms(model);
  w.reactions = model.cubics;
  w.label = model.metadata;
  return w;
}

WaveSystem scaled_nagumo(double d1, double d2, double a, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidInput, "scaled_nagumo: eps must be positive");
  if (!(a > 0.0 && a < 1.0)) throw Error(ErrorKind::InvalidInput, "scaled_nagumo: a must lie in (0,1)");
  const double s = 1.0 / (eps * eps);
  std::vector<CouplingTerm> terms;
  auto add = [&](double shift, double v) { terms.push_back({shift, Mat::Constant(1, 1, v * s)}); };
  add(-2.0 * eps, d2);
  add(-eps, d1);
  add(0.0, -2.0 * d1 - 2.0 * d2);
  add(eps, d1);
  add(2.0 * eps, d2);
  WaveSystem w;
  w.components = 1;
  w.terms = merge_terms(std::move(terms));
  w.reactions = {CubicNonlinearity{1.0, a}};
  std::ostringstream os;
  os << "scaled nagumo d1=" << d1 << " d2=" << d2 << " a=" << a << " eps=" << eps;
  w.label = os.str();
  return w;
}

WaveSystem PerturbedSystem::at(double eps) const {
  WaveSystem w = reference;
  if (eps != 0.0) {
    std::vector<CouplingTerm> terms = reference.terms;
    for (const auto& t : perturbation) terms.push_back({t.shift, eps * t.matrix});
    w.terms = merge_terms(std::move(terms));
  }
  std::ostringstream os;
  os << reference.label << " + " << eps << " B";
  w.label = os.str();
  return w;
}

PerturbedSystem perturbed(const LatticeModel& reference, const LatticeModel& full) {
  if (reference.period != full.period) throw Error(ErrorKind::InvalidInput, "perturbed: period mismatch");
  LatticeModel diff;
  diff.period = full.period;
  for (const auto& [key, v] : full.couplings) diff.add_coupling(key.first, key.second, v);
  for (const auto& [key, v] : reference.couplings) diff.add_coupling(key.first, key.second, -v);
  PerturbedSystem p;
  p.reference = wave_system(reference);
  p.perturbation = coupling_terms(diff);
  return p;
}

PerturbedSystem nagumo_perturbed(double d1, double d2, double a) {
  return perturbed(build_nagumo(d1, 0.0, a), build_nagumo(d1, d2, a));
}

PerturbedSystem two_site_perturbed(const TwoSiteSystem& system) {
  return perturbed(system.lattice(0.0), system.lattice(1.0));
}

PerturbedSystem four_site_perturbed(const FourSiteSystem& system, FourSiteSplit split) {
  PerturbedSystem p;
  p.reference.components = 4;
  p.reference.reactions = system.cubics;
  if (split == FourSiteSplit::Printed) {
    p.reference.terms = merge_terms({{-1.0, system.At1}, {0.0, system.At2}, {1.0, system.At3}});
    p.perturbation = merge_terms({{0.0, system.B2}});
    p.reference.label = "four-site reference (split)";
  } else {
    // second-neighbour couplings keep their own difference diagonal, the rest is the perturbation
    LatticeModel second;
    second.period = 4;
    for (const auto& [key, v] : system.transformed.couplings)
      if (std::abs(key.second) == 2) second.set_coupling(key.first, key.second, v);
    for (int n = 0; n < 4; ++n) second.set_coupling(n, 0, -(second.coupling(n, -2) + second.coupling(n, 2)));
    second.cubics = system.cubics;
    second.metadata = "four-site reference (first-neighbour terms removed)";
    return perturbed(second, system.transformed);
  }
  return p;
}

PerturbedSystem infinite_range_perturbed(const InfiniteRangeModel& model) {
  PerturbedSystem p;
  p.reference = wave_system(model.base);
  p.perturbation = coupling_terms(model.tail_model());
  return p;
}

}  // namespace latfront
