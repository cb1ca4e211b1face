#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

namespace intgmres {

// Compressed sparse row, double entries.
struct CsrMatrixF {
  int n = 0;  // square matrices only
  std::vector<int> row_ptr;  // size n + 1
  std::vector<int> col_idx;  // size nnz, ascending within each row
  std::vector<double> vals;

  int nnz() const { return row_ptr.empty() ? 0 : row_ptr.back(); }
};

// Same layout with raw int64 entries (pure integers; any fixed-point
// interpretation is tracked by the owner).
struct CsrMatrixI {
  int n = 0;
  std::vector<int> row_ptr;
  std::vector<int> col_idx;
  std::vector<std::int64_t> vals;

  int nnz() const { return row_ptr.empty() ? 0 : row_ptr.back(); }
};

// Build a CSR matrix from (row, col, value) triplets; duplicates are
// summed, rows come out with ascending column indices.
CsrMatrixF from_triplets(int n, std::vector<std::tuple<int, int, double>> t);

std::vector<double> spmv_fp(const CsrMatrixF& a, const std::vector<double>& x);

double norm2(const std::vector<double>& v);

// r = b - A x and ||r|| / ||b||.
struct Residual {
  std::vector<double> r;
  double relnorm = 0.0;
};
Residual residual_fp(const CsrMatrixF& a, const std::vector<double>& x,
                     const std::vector<double>& b);

}  // namespace intgmres
