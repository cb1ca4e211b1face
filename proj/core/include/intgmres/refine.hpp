#pragma once

#include "intgmres/gmres_int.hpp"

#include <cstdint>
#include <functional>
#include <vector>

// Outer iterative-refinement driver around the integer GMRES(m) cycle.
// Each refinement computes the floating-point residual r = b - A x,
// normalizes it by gamma = max|r_i| so the inner solve starts from a
// right-hand side with unit max-norm, runs one cycle from a zero guess,
// and accumulates x += gamma * correction. Convergence is judged on the
// true floating-point relative residual after every cycle.

namespace intgmres {

// Inner-solver arithmetic: fixed_point is the real solver;
// floating_point swaps in a double-precision cycle on the reconstructed
// operator (with the integer preconditioner factors applied in double)
// to isolate driver behavior in tests.
enum class Engine { fixed_point, floating_point };

struct RefineConfig {
  double tol = 1e-8;           // on ||b - A x|| / ||b||
  int max_refinements = 1000;  // outer cycle cap
  int m = 30;
  QFormat fmt{30};
  ShiftPlan shifts;
  int s = 0;
  bool checked = true;  // record overflow events (values wrap either way)
  Engine engine = Engine::fixed_point;
  std::function<int(int)> s_schedule;  // optional per-refinement depth
};

struct SolveReport {
  bool converged = false;
  int refinements = 0;              // completed outer cycles
  long total_inner_iterations = 0;  // sum of Krylov dimensions
  std::vector<int> inner_dims;         // Krylov dimension per refinement
  std::vector<double> relres_history;  // initial + after each refinement
  std::vector<double> gamma_history;   // per refinement
  std::vector<std::uint64_t> overflow_per_restart;
  std::vector<OverflowEvent> overflow_events;  // capped at FxTrace::max_events
  std::uint64_t overflow_total = 0;
  double wall_time_sec = 0.0;
};

struct SolveResult {
  std::vector<double> x;
  SolveReport report;
};

struct GammaScaled {
  double gamma = 0.0;
  std::vector<double> b_k;
};

// gamma = max|r_i|, b_k = r / gamma. Throws on an all-zero residual
// (callers treat that as exact convergence before scaling).
GammaScaled gamma_scale(const std::vector<double>& r);

// a_fp is the matrix the true residual is measured against (the
// row-scaled system matrix); m carries the integer operator. When
// external_trace is null and cfg.checked is set, an internal trace
// collects overflow events into the report.
SolveResult solve(const SplitMatrix& m, const CsrMatrixF& a_fp,
                  const std::vector<double>& b, const RefineConfig& cfg,
                  const IluFactors* precond = nullptr,
                  FxTrace* external_trace = nullptr);

}  // namespace intgmres
