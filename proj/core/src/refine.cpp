#include "intgmres/refine.hpp"

#include "intgmres/refsolve.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace intgmres {

GammaScaled gamma_scale(const std::vector<double>& r) {
  GammaScaled g;
  for (double v : r) g.gamma = std::max(g.gamma, std::fabs(v));
  if (g.gamma == 0.0)
    throw std::invalid_argument("gamma_scale: zero residual");
  g.b_k.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) g.b_k[i] = r[i] / g.gamma;
  return g;
}

SolveResult solve(const SplitMatrix& m, const CsrMatrixF& a_fp,
                  const std::vector<double>& b, const RefineConfig& cfg,
                  const IluFactors* precond, FxTrace* external_trace) {
  const int n = m.n;
  if (a_fp.n != n || static_cast<int>(b.size()) != n)
    throw std::invalid_argument("solve: dimension mismatch");
  if (cfg.max_refinements < 0)
    throw std::invalid_argument("solve: max_refinements must be >= 0");

  const auto t_start = std::chrono::steady_clock::now();

  FxTrace own_trace(cfg.checked, /*record_shifts=*/false);
  FxTrace* trace = external_trace ? external_trace : &own_trace;

  SolveResult res;
  res.x.assign(static_cast<std::size_t>(n), 0.0);
  SolveReport& rep = res.report;

  Residual resid = residual_fp(a_fp, res.x, b);
  rep.relres_history.push_back(resid.relnorm);

  // floating_point engine only: operator rebuilt lazily when the
  // component depth changes between refinements.
  PrecondFn fp_precond;
  CsrMatrixF fp_operator;
  int fp_depth = -1;
  if (cfg.engine == Engine::floating_point && precond)
    fp_precond = [precond](const std::vector<double>& y) {
      return apply_inverse_fp(*precond, y);
    };

  for (int k = 0; k < cfg.max_refinements && resid.relnorm >= cfg.tol; ++k) {
    double rmax = 0.0;
    for (double v : resid.r) rmax = std::max(rmax, std::fabs(v));
    if (rmax == 0.0) break;  // exactly solved; relnorm kept b at zero scale
    const GammaScaled gs = gamma_scale(resid.r);

    trace->set_restart(k);
    const std::uint64_t overflow_before = trace->total_overflows();

    const int depth = cfg.s_schedule ? cfg.s_schedule(k) : cfg.s;
    const std::vector<double> zeros(static_cast<std::size_t>(n), 0.0);
    std::vector<double> correction;
    int dim = 0;
    if (cfg.engine == Engine::fixed_point) {
      CycleConfig cc;
      cc.m = cfg.m;
      cc.fmt = cfg.fmt;
      cc.shifts = cfg.shifts;
      cc.s = depth;
      cc.precond = precond;
      CycleResult cyc = run_cycle(m, cc, gs.b_k, zeros, trace);
      correction = std::move(cyc.x);
      dim = cyc.diag.dim;
    } else {
      if (depth != fp_depth) {
        fp_operator = reconstruct_fp(m, depth);
        fp_depth = depth;
      }
      FpCycleResult cyc =
          fp_cycle(fp_operator, cfg.m, gs.b_k, zeros, fp_precond);
      correction = std::move(cyc.x);
      dim = cyc.dim;
    }
    if (dim == 0) break;  // inner cycle made no progress; stop honestly

    for (int i = 0; i < n; ++i) res.x[i] += gs.gamma * correction[i];
    rep.refinements = k + 1;
    rep.total_inner_iterations += dim;
    rep.inner_dims.push_back(dim);
    rep.gamma_history.push_back(gs.gamma);
    rep.overflow_per_restart.push_back(trace->total_overflows() -
                                       overflow_before);

    resid = residual_fp(a_fp, res.x, b);
    rep.relres_history.push_back(resid.relnorm);
  }

  rep.converged = resid.relnorm < cfg.tol;
  rep.overflow_events = trace->events;
  rep.overflow_total = trace->total_overflows();
  rep.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return res;
}

}  // namespace intgmres
