#include "latfront/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace latfront {

SimState front_state(int M, double position, double width, int period) {
  if (M < 8 || period < 1) throw Error(ErrorKind::InvalidInput, "sim: lattice too small");
  if (!(width > 0.0)) throw Error(ErrorKind::InvalidInput, "sim: width must be positive");
  SimState s;
  s.sites.resize(static_cast<std::size_t>(M));
  for (int n = 0; n < M; ++n) s.sites[static_cast<std::size_t>(n)] = 1.0 / (1.0 + std::exp(-(n - position) / width));
  s.left.assign(static_cast<std::size_t>(period), 0.0);
  s.right.assign(static_cast<std::size_t>(period), 1.0);
  return s;
}

double max_stable_dt(const LatticeModel& model, const SimState& init) {
  double lo = 0.0, hi = 1.0;
  for (double v : init.sites) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (double v : init.left) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double v : init.right) lo = std::min(lo, v), hi = std::max(hi, v);
  double fmax = 0.0;
  for (const auto& g : model.cubics) {
    const double vertex = (1.0 + g.a) / 3.0;
    for (double u : {lo, hi, std::clamp(vertex, lo, hi)}) fmax = std::max(fmax, std::abs(g.derivative(u)));
  }
  return 0.25 / (model.max_stencil_sum() + fmax);
}

namespace {

struct Rhs {
  const LatticeModel& model;
  const SimState& bc;
  std::vector<std::pair<int, double>> stencil;  // flattened per residue
  std::vector<std::size_t> offsets;

  Rhs(const LatticeModel& m, const SimState& s) : model(m), bc(s) {
    const int P = m.period;
    offsets.assign(static_cast<std::size_t>(P) + 1, 0);
    for (int p = 0; p < P; ++p) {
      for (const auto& [key, v] : m.couplings)
        if (key.first == p) stencil.emplace_back(key.second, v);
      offsets[static_cast<std::size_t>(p) + 1] = stencil.size();
    }
  }

  void operator()(const std::vector<double>& u, std::vector<double>& du) const {
    const int M = static_cast<int>(u.size());
    const int P = model.period;
    for (int n = 0; n < M; ++n) {
      const int p = positive_mod(n, P);
      double s = 0.0;
      for (std::size_t j = offsets[static_cast<std::size_t>(p)]; j < offsets[static_cast<std::size_t>(p) + 1]; ++j) {
        const int m = n + stencil[j].first;
        double v;
        if (m < 0)
          v = bc.left[static_cast<std::size_t>(positive_mod(m, P))];
        else if (m >= M)
          v = bc.right[static_cast<std::size_t>(positive_mod(m, P))];
        else
          v = u[static_cast<std::size_t>(m)];
        s += stencil[j].second * v;
      }
      du[static_cast<std::size_t>(n)] = s - model.cubics[static_cast<std::size_t>(p)](u[static_cast<std::size_t>(n)]);
    }
  }
};

}  // namespace

Trajectory integrate(const LatticeModel& model, const SimState& init, double dt, double T, int stride) {
  if (!(dt > 0.0) || !(T >= 0.0) || stride < 1) throw Error(ErrorKind::InvalidInput, "integrate: need dt > 0, T >= 0, stride >= 1");
  if (static_cast<int>(init.left.size()) != model.period || static_cast<int>(init.right.size()) != model.period)
    throw Error(ErrorKind::InvalidInput, "integrate: one boundary value per residue is required");
  const double dt_max = max_stable_dt(model, init);
  if (dt > dt_max * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "integrate: dt = " << dt << " exceeds the stability bound " << dt_max;
    throw Error(ErrorKind::InvalidInput, os.str());
  }
  const long steps = std::lround(std::ceil(T / dt - 1e-9));
  Rhs f(model, init);
  const std::size_t M = init.sites.size();
  std::vector<double> u = init.sites, k1(M), k2(M), k3(M), k4(M), tmp(M);
  Trajectory tr;
  tr.period = model.period;
  tr.dt = dt;
  tr.stride = stride;
  tr.times.push_back(init.t);
  tr.snapshots.push_back(u);
  for (long s = 1; s <= steps; ++s) {
    f(u, k1);
    for (std::size_t i = 0; i < M; ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
    f(tmp, k2);
    for (std::size_t i = 0; i < M; ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
    f(tmp, k3);
    for (std::size_t i = 0; i < M; ++i) tmp[i] = u[i] + dt * k3[i];
    f(tmp, k4);
    for (std::size_t i = 0; i < M; ++i) u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    const double t = init.t + static_cast<double>(s) * dt;
    for (double v : u)
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "integrate: state blew up at t = " << t;
        throw Error(ErrorKind::Domain, os.str());
      }
    if (s % stride == 0 || s == steps) {
      tr.times.push_back(t);
      tr.snapshots.push_back(u);
    }
  }
  return tr;
}

std::vector<double> front_positions(const Trajectory& traj, double level, int residue, Locator locator) {
  const int P = traj.period;
  if (residue < 0 || residue >= P) throw Error(ErrorKind::InvalidInput, "measure_speed: residue out of range");
  std::vector<double> pos;
  for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
    const auto& u = traj.snapshots[s];
    std::vector<double> v;
    for (std::size_t n = static_cast<std::size_t>(residue); n < u.size(); n += static_cast<std::size_t>(P)) v.push_back(u[n]);
    if (locator == Locator::Mass) {
      double m = 0.0;
      for (double x : v) m += 1.0 - x;
      pos.push_back(m);
      continue;
    }
    bool found = false;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      const double a = v[k] - level, b = v[k + 1] - level;
      if (a < 0.0 && b >= 0.0) {
        pos.push_back(static_cast<double>(k) + a / (a - b));
        found = true;
        break;
      }
    }
    if (!found) {
      std::ostringstream os;
      os << "measure_speed: no front crossing level " << level << " at t = " << traj.times[s];
      throw Error(ErrorKind::InvalidInput, os.str());
    }
  }
  return pos;
}

SpeedMeasurement measure_speed(const Trajectory& traj, double level, int residue, double window, Locator locator) {
  if (!(window > 0.0 && window <= 1.0)) throw Error(ErrorKind::InvalidInput, "measure_speed: window must lie in (0, 1]");
  if (traj.times.size() < 3) throw Error(ErrorKind::InvalidInput, "measure_speed: too few snapshots");
  const double t0 = traj.times.front(), t1 = traj.times.back();
  const double ta = t1 - window * (t1 - t0);
  Trajectory sub;
  sub.period = traj.period;
  for (std::size_t s = 0; s < traj.times.size(); ++s)
    if (traj.times[s] >= ta - 1e-9) {
      sub.times.push_back(traj.times[s]);
      sub.snapshots.push_back(traj.snapshots[s]);
    }
  if (sub.times.size() < 2) throw Error(ErrorKind::InvalidInput, "measure_speed: window holds fewer than two snapshots");
  const std::vector<double> x = front_positions(sub, level, residue, locator);
  const std::size_t n = x.size();
  double tm = 0.0, xm = 0.0;
  for (std::size_t i = 0; i < n; ++i) tm += sub.times[i], xm += x[i];
  tm /= static_cast<double>(n);
  xm /= static_cast<double>(n);
  double stt = 0.0, stx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (sub.times[i] - tm) * (sub.times[i] - tm);
    stx += (sub.times[i] - tm) * (x[i] - xm);
  }
  const double slope = stx / stt;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = x[i] - (xm + slope * (sub.times[i] - tm));
    rss += e * e;
  }
  SpeedMeasurement m;
  // positions are in cells; u_n(t) = phi(n + c t) moves the front toward smaller n when c > 0
  m.c = -slope;
  m.fit_residual = std::sqrt(rss / static_cast<double>(n));
  m.t_a = sub.times.front();
  m.t_b = sub.times.back();
  m.level = level;
  m.locator = locator;
  if (!std::isfinite(m.c)) throw Error(ErrorKind::Convergence, "measure_speed: non-finite slope");
  return m;
}

ExtractedProfile extract_profile(const Trajectory& traj, double c, double h, double window) {
  if (c == 0.0) throw Error(ErrorKind::InvalidInput, "extract_profile: needs c != 0");
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidInput, "extract_profile: h must be positive");
  if (traj.times.size() < 2) throw Error(ErrorKind::InvalidInput, "extract_profile: too few snapshots");
  const int P = traj.period;
  const double t0 = traj.times.front(), t1 = traj.times.back();
  const double ta = t1 - window * (t1 - t0), tb = t1;
  std::size_t s0 = 0;
  while (s0 + 1 < traj.times.size() && traj.times[s0] < ta - 1e-9) ++s0;
  const std::size_t S = traj.times.size();
  const int cells = static_cast<int>(traj.snapshots.front().size()) / P;

  // xi = k + c t covers [min(c ta, c tb), cells - 1 + max(c ta, c tb)]
  const double lo = std::min(c * traj.times[s0], c * tb), hi = cells - 1 + std::max(c * traj.times[s0], c * tb);
  const int nx = static_cast<int>(std::floor((hi - lo) / h)) + 1;
  ExtractedProfile out;
  out.xi.resize(nx);
  out.values = Profile::Zero(nx, P);
  out.counts = Vec::Zero(nx);
  Profile vmin = Profile::Constant(nx, P, 1e300), vmax = Profile::Constant(nx, P, -1e300);
  for (int j = 0; j < nx; ++j) {
    const double xi = lo + j * h;
    out.xi(j) = xi;
    // sites with (xi - k)/c in [t(s0), tb]
    const double ka = xi - c * tb, kb = xi - c * traj.times[s0];
    const int kmin = std::max(0, static_cast<int>(std::ceil(std::min(ka, kb) - 1e-12)));
    const int kmax = std::min(cells - 1, static_cast<int>(std::floor(std::max(ka, kb) + 1e-12)));
    int count = 0;
    for (int k = kmin; k <= kmax; ++k) {
      const double t = (xi - k) / c;
      auto it = std::lower_bound(traj.times.begin() + static_cast<long>(s0), traj.times.end(), t);
      std::size_t i1 = static_cast<std::size_t>(it - traj.times.begin());
      if (i1 >= S) i1 = S - 1;
      std::size_t i0 = i1 > s0 ? i1 - 1 : i1;
      if (i1 == i0 && i1 + 1 < S) ++i1;
      const double w = traj.times[i1] == traj.times[i0] ? 0.0 : (t - traj.times[i0]) / (traj.times[i1] - traj.times[i0]);
      for (int p = 0; p < P; ++p) {
        const std::size_t n = static_cast<std::size_t>(k * P + p);
        const double v = (1.0 - w) * traj.snapshots[i0][n] + w * traj.snapshots[i1][n];
        out.values(j, p) += v;
        vmin(j, p) = std::min(vmin(j, p), v);
        vmax(j, p) = std::max(vmax(j, p), v);
      }
      ++count;
    }
    out.counts(j) = count;
    if (count > 0) out.values.row(j) /= count;
  }
  // keep nodes that received samples
  std::vector<int> keep;
  for (int j = 0; j < nx; ++j)
    if (out.counts(j) > 0) keep.push_back(j);
  ExtractedProfile r;
  r.xi.resize(static_cast<int>(keep.size()));
  r.values.resize(static_cast<int>(keep.size()), P);
  r.counts.resize(static_cast<int>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const int j = keep[i];
    r.xi(static_cast<int>(i)) = out.xi(j);
    r.values.row(static_cast<int>(i)) = out.values.row(j);
    r.counts(static_cast<int>(i)) = out.counts(j);
    for (int p = 0; p < P; ++p)
      r.scatter = std::max(r.scatter, std::max(vmax(j, p) - out.values(j, p), out.values(j, p) - vmin(j, p)));
  }
  r.traveling_wave = r.scatter <= 0.05;
  return r;
}

MonotonicityReport check_monotonicity(const Profile& values, double tol) {
  MonotonicityReport r;
  double up = 0.0, down = 0.0;  // worst violations of nondecreasing / nonincreasing
  int up_i = -1, up_p = -1, down_i = -1, down_p = -1;
  double min_up = 1e300, min_down = 1e300;
  for (int p = 0; p < values.cols(); ++p)
    for (int i = 0; i + 1 < values.rows(); ++i) {
      const double d = values(i + 1, p) - values(i, p);
      if (-d > up) up = -d, up_i = i, up_p = p;
      if (d > down) down = d, down_i = i, down_p = p;
      min_up = std::min(min_up, d);
      min_down = std::min(min_down, -d);
    }
  if (up == 0.0 && down == 0.0) {
    r.monotone = true;
    r.direction = 0;
    return r;
  }
  if (up <= down) {
    r.direction = 1;
    r.worst_violation = up;
    r.worst_index = up_i;
    r.worst_component = up_p;
    r.min_step = min_up;
  } else {
    r.direction = -1;
    r.worst_violation = down;
    r.worst_index = down_i;
    r.worst_component = down_p;
    r.min_step = min_down;
  }
  r.monotone = r.worst_violation <= tol;
  return r;
}

}  // namespace latfront
