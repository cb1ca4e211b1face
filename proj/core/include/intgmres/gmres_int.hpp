#pragma once

#include "intgmres/ilu.hpp"
#include "intgmres/split.hpp"

#include <vector>

// One restart cycle of the integer GMRES(m) inner solver. Floating point
// appears in exactly three places: the initial residual (with the
// preconditioner applied in double on the integer factors), the final
// least-squares back substitution, and the solution update. Everything
// between — SpMV, modified Gram-Schmidt, normalization, Givens rotations
// and the running residual estimate — runs in 64-bit fixed point under
// the configured ShiftPlan.

namespace intgmres {

struct CycleConfig {
  int m = 30;                  // Krylov dimension per cycle
  QFormat fmt{30};
  ShiftPlan shifts;
  int s = 0;                   // splitting depth used by the operator
  const IluFactors* precond = nullptr;
  bool collect_basis_norms = false;
};

struct CycleDiagnostics {
  int dim = 0;          // Krylov dimension actually built
  double r0_norm = 0.0; // 2-norm of the (preconditioned) initial residual
  std::vector<double> g_abs;  // residual estimate |g_{j+1}| per step,
                              // relative to r0_norm
  std::vector<double> cos, sin;       // decoded rotation coefficients
  std::vector<double> basis_norms;    // decoded ||v_j||, if collected
};

// Fixed-point internals of a finished cycle, for invariant checks.
struct ArnoldiState {
  std::vector<FxVector> basis;     // v_0 .. v_dim (dim+1 vectors at most)
  std::vector<std::int64_t> hess;  // (m+1) x m column-major, post-rotation
  int ld = 0;
  std::vector<std::int64_t> g;
  std::vector<std::int64_t> cos_raw, sin_raw;
  QFormat fmt{30};
};

struct CycleResult {
  std::vector<double> x;
  CycleDiagnostics diag;
};

CycleResult run_cycle(const SplitMatrix& m, const CycleConfig& cfg,
                      const std::vector<double>& b,
                      const std::vector<double>& x0, FxTrace* trace = nullptr,
                      ArnoldiState* state_out = nullptr);

// Apply rotations 0..count-1 to the first count+1 entries of a raw
// Hessenberg column: (h_i, h_{i+1}) <- (c h_i + s h_{i+1},
// c h_{i+1} - s h_i), with the column operand pre-shifted by givens_b2.
void apply_stored_rotations(std::int64_t* h_col, int count,
                            const std::int64_t* cos_raw,
                            const std::int64_t* sin_raw, int givens_b2,
                            QFormat fmt, FxTrace* t = nullptr);

// Back substitution on the decoded dim x dim upper-triangular system
// R y = g; r_cols is column-major with leading dimension ld.
std::vector<double> solve_hessenberg(const std::vector<double>& r_cols,
                                     int ld, int dim,
                                     const std::vector<double>& g);

}  // namespace intgmres
