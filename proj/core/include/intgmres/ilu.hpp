#pragma once

#include "intgmres/csr.hpp"
#include "intgmres/fxp.hpp"

#include <vector>

// ILU(0) on the matrix pattern, factored as A ~ L D U with unit-diagonal
// L and U, then balanced into two integer factors: the diagonal scale is
// split as D = D_l D_u with D_l = |D|^(1/2) and D_u = sgn(D) |D|^(1/2),
// and (L D_l, D_u U) are truncated entrywise toward zero to int64. The
// integer substitutions multiply raw factor entries against fixed-point
// words with no shift and divide by the raw integer diagonal, which
// keeps the operand's Q format.

namespace intgmres {

struct FpIluFactors {
  CsrMatrixF lower;          // unit lower triangular, diagonal 1.0 stored
  std::vector<double> diag;  // D
  CsrMatrixF upper;          // unit upper triangular, diagonal 1.0 stored
};

// Throws if a row is missing its diagonal entry or a pivot vanishes.
FpIluFactors factorize_ilu0(const CsrMatrixF& a);

struct IluFactors {
  CsrMatrixI lower;  // L * D_l, integer entries
  CsrMatrixI upper;  // D_u * U, integer entries
  std::vector<int> diag_pos_lower;  // value index of (i, i) in each factor
  std::vector<int> diag_pos_upper;
};

// Throws if any scaled diagonal truncates to zero (the matrix needs a
// larger row-scaling exponent before factorization).
IluFactors split_cast(const FpIluFactors& f);

// Integer forward/backward substitution; input and output share y's
// format.
FxVector apply_inverse(const IluFactors& f, const FxVector& y,
                       FxTrace* t = nullptr);

// Same substitutions on the integer factors, evaluated in double.
std::vector<double> apply_inverse_fp(const IluFactors& f,
                                     const std::vector<double>& y);

// Substitution with the floating-point factors (reference solver path).
std::vector<double> apply_fp(const FpIluFactors& f,
                             const std::vector<double>& y);

}  // namespace intgmres
