#include <cmath>
#include <sstream>

#include "latfront/model.hpp"

namespace latfront {

namespace {

void set_difference_diagonal(LatticeModel& m) {
  for (int n = 0; n < m.period; ++n) {
    double s = 0.0;
    for (const auto& [key, v] : m.couplings)
      if (key.first == n && key.second != 0) s += v;
    m.set_coupling(n, 0, -s);
  }
}

}  // namespace

LatticeModel InfiniteRangeModel::tail_model() const {
  LatticeModel m;
  m.period = base.period;
  for (const auto& [key, v] : tail) m.set_coupling(key.first, key.second, v);
  set_difference_diagonal(m);
  m.cubics.assign(static_cast<std::size_t>(m.period), CubicNonlinearity{0.0, 0.5});
  m.metadata = "tail operator";
  return m;
}

LatticeModel InfiniteRangeModel::full() const { return truncated(k_num); }

LatticeModel InfiniteRangeModel::truncated(int cutoff) const {
  if (cutoff < 1 || cutoff > k_num)
    throw Error(ErrorKind::InvalidInput, "infinite range: truncation outside the numerical support");
  LatticeModel m;
  m.period = base.period;
  for (const auto& [key, v] : base.couplings)
    if (key.second != 0 && std::abs(key.second) <= cutoff) m.set_coupling(key.first, key.second, v);
  for (const auto& [key, v] : tail)
    if (std::abs(key.second) <= cutoff) m.set_coupling(key.first, key.second, v);
  set_difference_diagonal(m);
  m.cubics = base.cubics;
  std::ostringstream os;
  os << base.metadata << " truncated at " << cutoff;
  m.metadata = os.str();
  return m;
}

InfiniteRangeModel build_infinite_range(const KernelFamily& kernel, int k0, int k_num, double lambda_max) {
  if (k0 < 1 || k0 >= k_num) throw Error(ErrorKind::InvalidInput, "infinite range: need 1 <= k0 < k_num");
  if (lambda_max < 0.0) throw Error(ErrorKind::InvalidInput, "infinite range: lambda range must be >= 0");

  InfiniteRangeModel r;
  r.k0 = k0;
  r.k_num = k_num;
  r.lambda_max = lambda_max;
  r.base.period = 1;
  r.base.cubics = {kernel.cubic};

  auto put = [&](int k, double v) {
    if (std::abs(k) <= k0)
      r.base.set_coupling(0, k, v);
    else if (v != 0.0)
      r.tail[{0, k}] = v;
  };

  std::ostringstream os;
  if (kernel.name == "geometric") {
    if (!(kernel.q > 0.0 && kernel.q < 1.0))
      throw Error(ErrorKind::InvalidInput, "infinite range: geometric kernel needs 0 < q < 1");
    const double w = kernel.q * std::exp(lambda_max);
    if (!(w < 1.0)) {
      std::ostringstream e;
      e << "infinite range: geometric kernel q=" << kernel.q << " is not summable against e^{|k| lambda} for lambda="
        << lambda_max;
      throw Error(ErrorKind::InvalidInput, e.str());
    }
    for (int k = 1; k <= k_num; ++k) {
      double v = kernel.scale * std::pow(kernel.q, k);
      put(k, v);
      put(-k, v);
    }
    r.certificate = 2.0 * std::abs(kernel.scale) * std::pow(kernel.q, k_num + 1) / (1.0 - kernel.q);
    os << "geometric q=" << kernel.q << " scale=" << kernel.scale;
  } else if (kernel.name == "table") {
    if (!(kernel.declared_certificate >= 0.0))
      throw Error(ErrorKind::InvalidInput, "infinite range: table kernel requires a declared tail certificate");
    for (const auto& [k, v] : kernel.table) {
      if (k == 0) continue;
      if (std::abs(k) > k_num) throw Error(ErrorKind::InvalidInput, "infinite range: table entry beyond k_num");
      if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "infinite range: non-finite table entry");
      put(k, v);
    }
    r.certificate = kernel.declared_certificate;
    os << "table kernel";
  } else {
    throw Error(ErrorKind::InvalidInput, "infinite range: unknown kernel family '" + kernel.name + "'");
  }
  set_difference_diagonal(r.base);
  os << " k0=" << k0 << " k_num=" << k_num;
  r.base.metadata = os.str();
  return r;
}

}  // namespace latfront
