#include "latfront/mfde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace latfront {

const char* to_string(End end) { return end == End::Minus ? "minus" : "plus"; }

void MfdeOperator::validate(double sample_at, double tol) const {
  const std::size_t m = shifts.size();
  if (m == 0 || shifts[0] != 0.0) throw Error(ErrorKind::InvalidInput, "mfde: shift r_1 = 0 must come first");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (shifts[i] == shifts[j]) throw Error(ErrorKind::InvalidInput, "mfde: repeated shift");
  if (limits_minus.size() != m || limits_plus.size() != m || (!coefficients.empty() && coefficients.size() != m))
    throw Error(ErrorKind::InvalidInput, "mfde: one coefficient and two limits per shift");
  if (gamma_minus.size() != dim || gamma_plus.size() != dim)
    throw Error(ErrorKind::InvalidInput, "mfde: reaction limits have the wrong size");
  for (std::size_t j = 0; j < m; ++j) {
    if (coefficients.empty() || !coefficients[j]) continue;
    double dm = (coefficients[j](-sample_at) - limits_minus[j]).cwiseAbs().maxCoeff();
    double dp = (coefficients[j](sample_at) - limits_plus[j]).cwiseAbs().maxCoeff();
    if (dm > tol || dp > tol) {
      std::ostringstream os;
      os << "mfde: coefficient at shift " << shifts[j] << " does not approach its declared limits";
      throw Error(ErrorKind::InvalidInput, os.str());
    }
  }
  if (gamma) {
    double dm = (gamma(-sample_at) - gamma_minus).cwiseAbs().maxCoeff();
    double dp = (gamma(sample_at) - gamma_plus).cwiseAbs().maxCoeff();
    if (dm > tol || dp > tol) throw Error(ErrorKind::InvalidInput, "mfde: reaction does not approach its limits");
  }
}

Mat MfdeOperator::coefficient(std::size_t j, double xi) const {
  if (!coefficients.empty() && coefficients[j]) return coefficients[j](xi);
  return xi < 0.0 ? limits_minus[j] : limits_plus[j];
}

Vec MfdeOperator::reaction(double xi) const {
  if (gamma) return gamma(xi);
  return xi < 0.0 ? gamma_minus : gamma_plus;
}

Vec MfdeOperator::apply(const std::function<Vec(double)>& u, const std::function<Vec(double)>& du, double xi,
                        const std::function<Vec(double)>& ddu) const {
  Vec out = speed * du(xi);
  if (diffusion.size() == dim && ddu) out -= diffusion.cwiseProduct(ddu(xi));
  for (std::size_t j = 0; j < shifts.size(); ++j) out -= coefficient(j, xi) * u(xi + shifts[j]);
  out += reaction(xi).cwiseProduct(u(xi));
  return out;
}

MfdeOperator limit_operator(const WaveSystem& system, double c, double tail_bound) {
  MfdeOperator op;
  op.dim = system.components;
  op.speed = c;
  op.tail_bound = tail_bound;
  const Mat zero = Mat::Zero(op.dim, op.dim);
  op.shifts.push_back(0.0);
  op.limits_minus.push_back(zero);
  for (const auto& t : system.terms) {
    if (t.shift == 0.0) {
      op.limits_minus[0] += t.matrix;
    } else {
      op.shifts.push_back(t.shift);
      op.limits_minus.push_back(t.matrix);
    }
  }
  op.limits_plus = op.limits_minus;
  op.gamma_minus.resize(op.dim);
  op.gamma_plus.resize(op.dim);
  for (int i = 0; i < op.dim; ++i) {
    op.gamma_minus(i) = system.reactions[static_cast<std::size_t>(i)].derivative(0.0);
    op.gamma_plus(i) = system.reactions[static_cast<std::size_t>(i)].derivative(1.0);
  }
  return op;
}

Eigen::MatrixXcd characteristic_matrix(const MfdeOperator& op, End end, std::complex<double> s) {
  const auto& lim = end == End::Minus ? op.limits_minus : op.limits_plus;
  const Vec& g = end == End::Minus ? op.gamma_minus : op.gamma_plus;
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(op.dim, op.dim);
  for (std::size_t j = 0; j < op.shifts.size(); ++j) D -= lim[j].cast<std::complex<double>>() * std::exp(s * op.shifts[j]);
  for (int i = 0; i < op.dim; ++i) {
    D(i, i) += op.speed * s + g(i);
    if (op.diffusion.size() == op.dim) D(i, i) -= op.diffusion(i) * s * s;
  }
  return D;
}

namespace {

double det_modulus(const MfdeOperator& op, End end, double theta) {
  return std::abs(characteristic_matrix(op, end, {0.0, theta}).determinant());
}

bool better(double v, double th, double bv, double bth) {
  if (v != bv) return v < bv;
  if (std::abs(th) != std::abs(bth)) return std::abs(th) < std::abs(bth);
  return th > bth;
}

}  // namespace

HyperbolicityEntry is_hyperbolic(const MfdeOperator& op, End end, double tol, int points) {
  if (op.speed == 0.0)
    throw Error(ErrorKind::InvalidInput,
                "is_hyperbolic: standing waves (c = 0) are not supported; the scan bound needs c != 0");
  if (points < 8) points = 8;
  if (points % 2) ++points;
  const auto& lim = end == End::Minus ? op.limits_minus : op.limits_plus;
  const Vec& g = end == End::Minus ? op.gamma_minus : op.gamma_plus;
  double norm_sum = 1.0 + g.cwiseAbs().maxCoeff();
  for (const auto& A : lim) norm_sum += A.jacobiSvd().singularValues()(0);

  HyperbolicityEntry e;
  e.end = end;
  e.tol = tol + op.tail_bound;
  e.Theta = norm_sum / std::abs(op.speed);

  std::vector<double> th(static_cast<std::size_t>(points) + 1), f(th.size());
  for (std::size_t i = 0; i < th.size(); ++i) {
    th[i] = i == static_cast<std::size_t>(points / 2) ? 0.0 : -e.Theta + 2.0 * e.Theta * double(i) / points;
    f[i] = det_modulus(op, end, th[i]);
  }
  double best = f[0], best_th = th[0];
  std::vector<std::size_t> minima;
  for (std::size_t i = 0; i < th.size(); ++i) {
    if (better(f[i], th[i], best, best_th)) {
      best = f[i];
      best_th = th[i];
    }
    bool left = i == 0 || f[i] <= f[i - 1];
    bool right = i + 1 == th.size() || f[i] <= f[i + 1];
    if (left && right) minima.push_back(i);
  }
  std::sort(minima.begin(), minima.end(), [&](std::size_t a, std::size_t b) {
    return f[a] != f[b] ? f[a] < f[b] : a < b;
  });
  if (minima.size() > 16) minima.resize(16);

  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (std::size_t i : minima) {
    double a = th[i == 0 ? 0 : i - 1], b = th[i + 1 == th.size() ? i : i + 1];
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = det_modulus(op, end, x1), f2 = det_modulus(op, end, x2);
    for (int it = 0; it < 100 && b - a > 1e-13 * (1.0 + std::abs(a)); ++it) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = det_modulus(op, end, x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = det_modulus(op, end, x2);
      }
    }
    double xm = f1 <= f2 ? x1 : x2, fm = std::min(f1, f2);
    if (better(fm, xm, best, best_th)) {
      best = fm;
      best_th = xm;
    }
  }
  e.min_modulus = best;
  e.theta_at_min = best_th;
  e.verdict = best > e.tol;
  return e;
}

HyperbolicityReport asymptotic_hyperbolicity(const MfdeOperator& op, double tol, int points) {
  HyperbolicityReport r;
  r.tol = tol + op.tail_bound;
  const MfdeOperator adj = adjoint(op);
  r.verdict = true;
  bool first = true;
  for (bool is_adj : {false, true}) {
    for (End end : {End::Minus, End::Plus}) {
      HyperbolicityEntry e = is_hyperbolic(is_adj ? adj : op, end, tol, points);
      e.adjoint = is_adj;
      r.verdict = r.verdict && e.verdict;
      if (first || e.min_modulus < r.min_modulus) {
        r.min_modulus = e.min_modulus;
        r.theta_at_min = e.theta_at_min;
        first = false;
      }
      r.entries.push_back(e);
    }
  }
  return r;
}

MfdeOperator adjoint(const MfdeOperator& op) {
  MfdeOperator a = op;
  a.speed = -op.speed;
  for (std::size_t j = 0; j < op.shifts.size(); ++j) {
    a.shifts[j] = -op.shifts[j];
    a.limits_minus[j] = op.limits_minus[j].transpose();
    a.limits_plus[j] = op.limits_plus[j].transpose();
    if (!op.coefficients.empty() && op.coefficients[j]) {
      CoefficientFn fn = op.coefficients[j];
      const double r = op.shifts[j];
      a.coefficients[j] = [fn, r](double xi) { return Mat(fn(xi - r).transpose()); };
    }
  }
  return a;
}

std::complex<double> upsilon_two_site(double d_e, double d_o, double d2, double eps, double gamma1,
                                      double gamma2, double c, double theta) {
  const double cs = std::cos(theta);
  const double m1 = 2.0 * eps * d2 * (cs - 1.0) - 2.0 * d_e - gamma1;
  const double m2 = 2.0 * eps * d2 * (cs - 1.0) - 2.0 * d_o - gamma2;
  const double re = -c * c * theta * theta + m1 * m2 - 2.0 * d_e * d_o * (1.0 + cs);
  const double im = -(4.0 * eps * d2 * (cs - 1.0) - 2.0 * d_e - gamma1 - 2.0 * d_o - gamma2) * c * theta;
  return {re, im};
}

}  // namespace latfront
