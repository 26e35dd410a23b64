#include "latfront/fixedpoint.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>

namespace latfront {

struct BorderedFactor {
  Eigen::SparseLU<SparseMat, Eigen::COLAMDOrdering<int>> lu;
};

Profile remainder_N(const std::vector<CubicNonlinearity>& reactions, const Profile& phi0, const Profile& psi) {
  Profile out(phi0.rows(), phi0.cols());
  for (int p = 0; p < phi0.cols(); ++p) {
    const CubicNonlinearity& g = reactions[static_cast<std::size_t>(p)];
    for (int i = 0; i < phi0.rows(); ++i) {
      const double u = phi0(i, p), v = psi(i, p);
      out(i, p) = g(u + v) - g(u) - g.derivative(u) * v;
    }
  }
  return out;
}

WaveSystem FixedPointContext::full() const {
  PerturbedSystem ps{reference, perturbation};
  return ps.at(eps);
}

FixedPointContext make_context(const PerturbedSystem& system, const WaveSolution& base, double eps) {
  FixedPointContext ctx;
  ctx.reference = system.reference;
  ctx.perturbation = system.perturbation;
  ctx.eps = eps;
  ctx.base = base;
  ctx.kernel = kernel_vectors(system.reference, base);
  require_simple_kernel(ctx.kernel);
  if (ctx.kernel.oscillatory_dim > 0)
    throw Error(ErrorKind::KernelDimension,
                "fixed point: the discrete linearisation has a grid-scale (checkerboard) null mode; choose h so that "
                "at least one shift is an odd number of grid steps");
  ctx.dphi0 = derivative(base.grid, base.profile);
  ctx.delta_hat = 0.5 * inner(base.grid, ctx.dphi0, ctx.kernel.psi_minus);
  if (!(ctx.delta_hat > 0.0))
    throw Error(ErrorKind::KernelDimension, "fixed point: <phi0', psi_minus> is not positive");

  const Grid& g = base.grid;
  const int N = base.components();
  const int m = g.n * N;
  SparseMat L = linear_block(system.reference, g, base.profile, base.c);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(L.nonZeros()) + 2 * m);
  for (int k = 0; k < L.outerSize(); ++k)
    for (SparseMat::InnerIterator it(L, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  const Vec w = trapezoid_weights(g);
  const Vec pp = flatten(ctx.kernel.psi_plus);
  for (int i = 0; i < g.n; ++i)
    for (int p = 0; p < N; ++p) {
      t.emplace_back(i * N + p, m, pp(i * N + p));
      t.emplace_back(m, i * N + p, w(i) * pp(i * N + p));
    }
  SparseMat S(m + 1, m + 1);
  S.setFromTriplets(t.begin(), t.end());
  S.makeCompressed();
  ctx.factor = std::make_shared<BorderedFactor>();
  ctx.factor->lu.compute(S);
  if (ctx.factor->lu.info() != Eigen::Success)
    throw Error(ErrorKind::KernelDimension, "fixed point: bordered operator is singular");
  return ctx;
}

FixedPointContext with_eps(const FixedPointContext& ctx, double eps) {
  FixedPointContext c = ctx;
  c.eps = eps;
  return c;
}

Profile apply_perturbation(const FixedPointContext& ctx, const Profile& psi) {
  const Grid& g = ctx.base.grid;
  return apply_terms(ctx.perturbation, g, ctx.base.profile, 0.0, 1.0) + apply_terms(ctx.perturbation, g, psi, 0.0, 0.0);
}

Profile residual_R(const FixedPointContext& ctx, double c, const Profile& psi) {
  const Grid& g = ctx.base.grid;
  Profile R = (ctx.base.c - c) * (ctx.dphi0 + derivative(g, psi));
  if (ctx.eps != 0.0) R += ctx.eps * apply_perturbation(ctx, psi);
  R -= remainder_N(ctx.reference.reactions, ctx.base.profile, psi);
  return R;
}

double speed_update(const FixedPointContext& ctx, const Profile& psi) {
  const Grid& g = ctx.base.grid;
  const Profile& pm = ctx.kernel.psi_minus;
  const double den = inner(g, ctx.dphi0, pm) + inner(g, derivative(g, psi), pm);
  if (!(den > ctx.delta_hat)) {
    std::ostringstream os;
    os << "speed update rejected: denominator " << den << " is not above delta_hat = " << ctx.delta_hat
       << "; reduce eps or the perturbation size";
    throw Error(ErrorKind::Convergence, os.str());
  }
  double num = -inner(g, remainder_N(ctx.reference.reactions, ctx.base.profile, psi), pm);
  if (ctx.eps != 0.0) num += ctx.eps * inner(g, apply_perturbation(ctx, psi), pm);
  return ctx.base.c + num / den;
}

TStep apply_T_step(const FixedPointContext& ctx, const Profile& psi) {
  const Grid& g = ctx.base.grid;
  const int N = ctx.base.components();
  const int m = g.n * N;
  TStep s;
  s.c = speed_update(ctx, psi);
  s.R = residual_R(ctx, s.c, psi);
  const double rn = l2_norm(g, s.R);
  s.orthogonality = rn > 0.0 ? std::abs(inner(g, s.R, ctx.kernel.psi_minus)) / rn : 0.0;
  Vec rhs(m + 1);
  rhs.head(m) = flatten(s.R);
  rhs(m) = 0.0;
  Vec x = ctx.factor->lu.solve(rhs);
  if (!x.allFinite()) throw Error(ErrorKind::KernelDimension, "fixed point: bordered solve produced non-finite values");
  s.v = unflatten(x.head(m), g.n, N);
  s.multiplier = x(m);
  return s;
}

Profile apply_T(const FixedPointContext& ctx, const Profile& psi) { return apply_T_step(ctx, psi).v; }

FixedPointResult iterate(const FixedPointContext& ctx, const FixedPointOptions& opts) {
  const Grid& g = ctx.base.grid;
  const int N = ctx.base.components();
  FixedPointState st;
  st.delta_hat = ctx.delta_hat;
  st.C0_estimate = ctx.kernel.restricted_smallest > 0.0 ? 1.0 / ctx.kernel.restricted_smallest : 0.0;
  st.K0 = ctx.eps == 0.0 ? 0.0 : l2_norm(g, ctx.eps * apply_terms(ctx.perturbation, g, ctx.base.profile, 0.0, 1.0));

  Profile psi = Profile::Zero(g.n, N);
  Profile prev_R;
  double prev_c = 0.0, prev_step = 0.0;
  int bad = 0;
  bool converged = false;
  for (int k = 1; k <= opts.max_iter; ++k) {
    TStep s = apply_T_step(ctx, psi);
    const Profile diff = s.v - psi;
    FixedPointRecord rec;
    rec.iter = k;
    rec.step_norm = h1_norm(g, diff);
    rec.c = s.c;
    rec.orthogonality = s.orthogonality;
    rec.plus_overlap = std::abs(inner(g, s.v, ctx.kernel.psi_plus));
    // psi_k - psi_{k-1} is the previous step
    if (k > 1 && prev_step > 0.0) {
      rec.lambda_hat = rec.step_norm / prev_step;
      st.K1 = std::max(st.K1, std::abs(s.c - prev_c) / prev_step);
      st.K2 = std::max(st.K2, l2_norm(g, s.R - prev_R) / prev_step);
    }
    st.contraction_ratio = std::max(st.contraction_ratio, rec.lambda_hat);
    st.max_orthogonality = std::max(st.max_orthogonality, rec.orthogonality);
    st.max_plus_overlap = std::max(st.max_plus_overlap, rec.plus_overlap);
    for (int p = 0; p < N; ++p) {
      const CubicNonlinearity& r = ctx.reference.reactions[static_cast<std::size_t>(p)];
      for (int i = 0; i < g.n; ++i) st.M = std::max(st.M, std::abs(r.second_derivative(ctx.base.profile(i, p) + s.v(i, p))));
    }
    st.history.push_back(rec);
    psi = s.v;
    st.max_psi_norm = std::max(st.max_psi_norm, h1_norm(g, psi));
    prev_R = s.R;
    prev_c = s.c;
    prev_step = rec.step_norm;
    if (rec.step_norm <= opts.tol) {
      converged = true;
      break;
    }
    bad = rec.lambda_hat >= 1.0 ? bad + 1 : 0;
    if (bad >= 3) {
      std::ostringstream os;
      os << "fixed point: contraction failed (ratio >= 1 on 3 consecutive steps, last " << rec.lambda_hat
         << "); contraction needs the Lipschitz constant of R below 1/C0 (C0 ~ " << st.C0_estimate << ")";
      throw Error(ErrorKind::Convergence, os.str());
    }
  }
  if (!converged) throw Error(ErrorKind::Convergence, "fixed point: iteration limit reached");

  st.psi = psi;
  st.c_current = speed_update(ctx, psi);
  FixedPointResult out;
  out.state = st;
  WaveSolution& sol = out.solution;
  sol.grid = g;
  sol.c = st.c_current;
  sol.profile = ctx.base.profile + psi;
  sol.newton_iters = static_cast<int>(st.history.size());
  sol.residual_norm = residual_profile(ctx.full(), g, sol.profile, sol.c).cwiseAbs().maxCoeff();
  sol.pinning_suspected = std::abs(sol.c) < 1e-6;
  double loc = 0.0;
  if (crossing(g, sol.profile, 0, 0.5, &loc)) sol.phase.location = loc;
  return out;
}

}  // namespace latfront
