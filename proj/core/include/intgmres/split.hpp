#pragma once

#include "intgmres/csr.hpp"
#include "intgmres/fxp.hpp"

#include <vector>

// Row scaling and the integer matrix splitting. After scaling, every row
// of A has max|a_ij| = 2^alpha_a exactly. The splitting peels A into
// integer matrices A_0 + A_1 * 2^-alpha_1 + ... + A_p * 2^-alpha_p with
// truncation toward zero at every level, so the floating-point remainder
// after l levels is exactly representable and < 2^-alpha_l in magnitude.

namespace intgmres {

struct RowScaled {
  CsrMatrixF a;                // D^-1 A
  std::vector<double> scale;   // diagonal of D, d_i = max_j|a_ij| / 2^alpha_a
};

// Throws if a row has no nonzero entry.
RowScaled row_scale(const CsrMatrixF& a, int alpha_a);

// Elementwise b_i / scale_i, the right-hand side of the scaled system.
std::vector<double> scale_rhs(const std::vector<double>& b,
                              const std::vector<double>& scale);

struct SplitMatrix {
  int n = 0;
  std::vector<CsrMatrixI> components;  // A_0, A_1, ..., shared pattern
  std::vector<int> alphas;             // per-component exponents; alphas[0] = 0
  int alpha_a = 0;
  std::vector<double> scale_diag;      // diagonal of D from row scaling
  bool exact = false;                  // remainder reached exactly zero

  int depth() const { return static_cast<int>(components.size()) - 1; }
};

// Split a (row-scaled) matrix into at most max_components integer
// matrices, stopping early when the remainder hits zero. scale_diag is
// carried for bookkeeping only.
SplitMatrix build_split(const CsrMatrixF& a, int alpha_a, int max_components,
                        std::vector<double> scale_diag = {});

// Integer SpMV using components 0..s: per row and component, accumulate
// raw products val * v_j in int64, arithmetic-shift by alpha_l, sum.
// Input and output share v's format.
FxVector spmv(const SplitMatrix& m, int s, const FxVector& v,
              FxTrace* t = nullptr);

// The same operator evaluated in double precision on the reconstructed
// entries sum_l a_l * 2^-alpha_l (components 0..s).
std::vector<double> spmv_fp(const SplitMatrix& m, int s,
                            const std::vector<double>& x);

// Reconstructed entries as a CSR matrix; summing components in order
// keeps every partial sum exactly representable.
CsrMatrixF reconstruct_fp(const SplitMatrix& m, int s);

}  // namespace intgmres
