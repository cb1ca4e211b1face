#include "intgmres/refsolve.hpp"

#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace intgmres {

FpCycleResult fp_cycle(const CsrMatrixF& a, int m,
                       const std::vector<double>& b,
                       const std::vector<double>& x0,
                       const PrecondFn& precond) {
  const int n = a.n;
  if (m < 1) throw std::invalid_argument("fp_cycle: m must be >= 1");
  if (static_cast<int>(b.size()) != n || static_cast<int>(x0.size()) != n)
    throw std::invalid_argument("fp_cycle: dimension mismatch");

  FpCycleResult res;
  res.x = x0;

  std::vector<double> r0(n);
  {
    const std::vector<double> ax = spmv_fp(a, x0);
    for (int i = 0; i < n; ++i) r0[i] = b[i] - ax[i];
  }
  if (precond) r0 = precond(r0);
  const double r0n = norm2(r0);
  res.r0_norm = r0n;
  if (r0n == 0.0) return res;

  std::vector<std::vector<double>> basis;
  basis.reserve(static_cast<std::size_t>(m) + 1);
  {
    std::vector<double> v1(n);
    for (int i = 0; i < n; ++i) v1[i] = r0[i] / r0n;
    basis.push_back(std::move(v1));
  }

  const int ld = m + 1;
  std::vector<double> hess(static_cast<std::size_t>(ld) * m, 0.0);
  std::vector<double> g(static_cast<std::size_t>(ld), 0.0);
  g[0] = 1.0;
  std::vector<double> cs(m, 0.0), sn(m, 0.0);

  int dim = 0;
  for (int j = 0; j < m; ++j) {
    double* col = &hess[static_cast<std::size_t>(j) * ld];
    std::vector<double> w = spmv_fp(a, basis[static_cast<std::size_t>(j)]);
    if (precond) w = precond(w);
    const double wnorm_pre = norm2(w);

    for (int i = 0; i <= j; ++i) {
      const std::vector<double>& vi = basis[static_cast<std::size_t>(i)];
      double h = 0.0;
      for (int l = 0; l < n; ++l) h += w[l] * vi[l];
      col[i] = h;
      for (int l = 0; l < n; ++l) w[l] -= h * vi[l];
    }
    const double hnext = norm2(w);
    col[j + 1] = hnext;
    // Treat a remainder at roundoff level (relative to A*v_j before
    // orthogonalization) as a breakdown: normalizing it would admit a
    // noise direction and leave a denormal on the R diagonal.
    const bool happy_breakdown = hnext <= wnorm_pre * (8.0 * DBL_EPSILON);

    if (!happy_breakdown) {
      std::vector<double> vnext(n);
      for (int l = 0; l < n; ++l) vnext[l] = w[l] / hnext;
      basis.push_back(std::move(vnext));
    }

    for (int i = 0; i < j; ++i) {
      const double hi = col[i], hn = col[i + 1];
      col[i] = cs[i] * hi + sn[i] * hn;
      col[i + 1] = cs[i] * hn - sn[i] * hi;
    }
    const double t = std::hypot(col[j], col[j + 1]);
    if (t == 0.0) break;
    cs[j] = col[j] / t;
    sn[j] = col[j + 1] / t;
    col[j] = t;
    col[j + 1] = 0.0;
    const double g_old = g[j];
    g[j + 1] = -sn[j] * g_old;
    g[j] = cs[j] * g_old;

    dim = j + 1;
    res.g_abs.push_back(std::fabs(g[j + 1]));
    if (happy_breakdown) break;
  }
  res.dim = dim;

  if (dim > 0) {
    std::vector<double> y(dim);
    for (int i = dim - 1; i >= 0; --i) {
      double acc = g[i];
      for (int j = i + 1; j < dim; ++j)
        acc -= hess[static_cast<std::size_t>(j) * ld + i] * y[j];
      y[i] = acc / hess[static_cast<std::size_t>(i) * ld + i];
    }
    for (int j = 0; j < dim; ++j) {
      const double w = r0n * y[j];
      const std::vector<double>& vj = basis[static_cast<std::size_t>(j)];
      for (int l = 0; l < n; ++l) res.x[l] += w * vj[l];
    }
  }
  return res;
}

FpSolveResult solve_fp(const CsrMatrixF& a, const std::vector<double>& b,
                       const FpGmresConfig& cfg,
                       const FpIluFactors* precond) {
  PrecondFn pf;
  if (precond)
    pf = [precond](const std::vector<double>& y) { return apply_fp(*precond, y); };

  FpSolveResult res;
  res.x.assign(a.n, 0.0);
  double relres = residual_fp(a, res.x, b).relnorm;
  res.relres_history.push_back(relres);

  while (relres >= cfg.tol && res.restarts < cfg.max_restarts) {
    const FpCycleResult cyc = fp_cycle(a, cfg.m, b, res.x, pf);
    if (cyc.dim == 0) break;  // no progress possible
    res.x = cyc.x;
    res.restarts += 1;
    res.iterations += cyc.dim;
    res.cycle_dims.push_back(cyc.dim);
    relres = residual_fp(a, res.x, b).relnorm;
    res.relres_history.push_back(relres);
  }
  res.converged = relres < cfg.tol;
  return res;
}

}  // namespace intgmres
