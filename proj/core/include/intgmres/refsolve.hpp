#pragma once

#include "intgmres/csr.hpp"
#include "intgmres/ilu.hpp"

#include <functional>
#include <vector>

// Restarted GMRES(m) in double precision: the baseline the integer
// solver is measured against, structured like the integer cycle (MGS
// Arnoldi, Givens rotations, residual check after every cycle).

namespace intgmres {

// Left preconditioner application; empty means none.
using PrecondFn =
    std::function<std::vector<double>(const std::vector<double>&)>;

struct FpCycleResult {
  std::vector<double> x;
  int dim = 0;
  double r0_norm = 0.0;
  std::vector<double> g_abs;  // residual estimate per step, relative
};

FpCycleResult fp_cycle(const CsrMatrixF& a, int m,
                       const std::vector<double>& b,
                       const std::vector<double>& x0,
                       const PrecondFn& precond = {});

struct FpGmresConfig {
  int m = 30;
  double tol = 1e-8;          // on ||b - A x|| / ||b||, checked per cycle
  int max_restarts = 100000;
};

struct FpSolveResult {
  std::vector<double> x;
  bool converged = false;
  int restarts = 0;                    // cycles run
  long iterations = 0;                 // sum of Krylov dimensions
  std::vector<double> relres_history;  // initial + after each cycle
  std::vector<int> cycle_dims;         // Krylov dimension of each cycle
};

FpSolveResult solve_fp(const CsrMatrixF& a, const std::vector<double>& b,
                       const FpGmresConfig& cfg,
                       const FpIluFactors* precond = nullptr);

}  // namespace intgmres
