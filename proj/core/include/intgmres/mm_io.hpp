#pragma once

#include "intgmres/csr.hpp"

#include <string>

namespace intgmres {

// Parse a Matrix Market coordinate file (real or integer entries,
// general or symmetric) into CSR. Symmetric inputs are expanded.
// Square matrices only; duplicate entries and malformed lines are
// rejected with "path:line: message" diagnostics.
CsrMatrixF load_matrix_market(const std::string& path);

// Write CSR as a general real coordinate file with full double precision
// (round-trips through load_matrix_market).
void save_matrix_market(const std::string& path, const CsrMatrixF& m);

}  // namespace intgmres
