#include "intgmres/ilu.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace intgmres {

namespace {

std::vector<int> diag_positions(const CsrMatrixF& a) {
  std::vector<int> pos(a.n, -1);
  for (int i = 0; i < a.n; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      if (a.col_idx[k] == i) pos[i] = k;
  for (int i = 0; i < a.n; ++i)
    if (pos[i] < 0)
      throw std::runtime_error("factorize_ilu0: row " + std::to_string(i) +
                               " has no diagonal entry in the pattern");
  return pos;
}

}  // namespace

FpIluFactors factorize_ilu0(const CsrMatrixF& a) {
  const int n = a.n;
  const std::vector<int> diag = diag_positions(a);
  std::vector<double> lu = a.vals;  // merged factors, pattern of A
  std::vector<int> iw(n, -1);      // column -> value index in current row

  for (int i = 0; i < n; ++i) {
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      iw[a.col_idx[k]] = k;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const int j = a.col_idx[k];
      if (j >= i) break;  // columns are ascending; lower part done
      lu[k] /= lu[diag[j]];  // multiplier l_ij
      for (int kk = diag[j] + 1; kk < a.row_ptr[j + 1]; ++kk) {
        const int pos = iw[a.col_idx[kk]];
        if (pos >= 0) lu[pos] -= lu[k] * lu[kk];
      }
    }
    if (lu[diag[i]] == 0.0)
      throw std::runtime_error("factorize_ilu0: zero pivot in row " +
                               std::to_string(i));
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      iw[a.col_idx[k]] = -1;
  }

  // Split the merged factors: strict lower = L multipliers, merged
  // diagonal = D, upper scaled by 1/d_ii = unit U.
  FpIluFactors f;
  f.diag.resize(n);
  f.lower.n = f.upper.n = n;
  f.lower.row_ptr.assign(n + 1, 0);
  f.upper.row_ptr.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    f.diag[i] = lu[diag[i]];
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const int j = a.col_idx[k];
      if (j < i) {
        f.lower.col_idx.push_back(j);
        f.lower.vals.push_back(lu[k]);
      } else if (j == i) {
        f.lower.col_idx.push_back(i);
        f.lower.vals.push_back(1.0);
        f.upper.col_idx.push_back(i);
        f.upper.vals.push_back(1.0);
      } else {
        f.upper.col_idx.push_back(j);
        f.upper.vals.push_back(lu[k] / f.diag[i]);
      }
    }
    f.lower.row_ptr[i + 1] = static_cast<int>(f.lower.col_idx.size());
    f.upper.row_ptr[i + 1] = static_cast<int>(f.upper.col_idx.size());
  }
  return f;
}

IluFactors split_cast(const FpIluFactors& f) {
  const int n = f.lower.n;
  IluFactors out;
  out.lower.n = out.upper.n = n;
  out.lower.row_ptr = f.lower.row_ptr;
  out.lower.col_idx = f.lower.col_idx;
  out.lower.vals.resize(f.lower.vals.size());
  out.upper.row_ptr = f.upper.row_ptr;
  out.upper.col_idx = f.upper.col_idx;
  out.upper.vals.resize(f.upper.vals.size());
  out.diag_pos_lower.assign(n, -1);
  out.diag_pos_upper.assign(n, -1);

  std::vector<double> dl(n), du(n);
  for (int i = 0; i < n; ++i) {
    const double r = std::sqrt(std::fabs(f.diag[i]));
    dl[i] = r;
    du[i] = f.diag[i] < 0 ? -r : r;
  }

  // lower: scale column j by dl_j, upper: scale row i by du_i, truncate.
  for (int i = 0; i < n; ++i) {
    for (int k = f.lower.row_ptr[i]; k < f.lower.row_ptr[i + 1]; ++k) {
      const int j = f.lower.col_idx[k];
      out.lower.vals[k] = static_cast<std::int64_t>(f.lower.vals[k] * dl[j]);
      if (j == i) out.diag_pos_lower[i] = k;
    }
    for (int k = f.upper.row_ptr[i]; k < f.upper.row_ptr[i + 1]; ++k) {
      out.upper.vals[k] = static_cast<std::int64_t>(f.upper.vals[k] * du[i]);
      if (f.upper.col_idx[k] == i) out.diag_pos_upper[i] = k;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (out.lower.vals[out.diag_pos_lower[i]] == 0 ||
        out.upper.vals[out.diag_pos_upper[i]] == 0)
      throw std::runtime_error(
          "split_cast: diagonal entry of row " + std::to_string(i) +
          " truncates to zero; scale the matrix up before factorizing");
  }
  return out;
}

FxVector apply_inverse(const IluFactors& f, const FxVector& y, FxTrace* t) {
  const int n = f.lower.n;
  if (static_cast<int>(y.size()) != n)
    throw std::invalid_argument("apply_inverse: dimension mismatch");

  // forward: z_i = (y_i - sum_{j<i} L_ij z_j) / L_ii
  FxVector z(static_cast<std::size_t>(n), y.fmt);
  for (int i = 0; i < n; ++i) {
    std::int64_t acc = y.raw[i];
    for (int k = f.lower.row_ptr[i]; k < f.lower.row_ptr[i + 1]; ++k) {
      const int j = f.lower.col_idx[k];
      if (j == i) continue;
      acc = detail::sub_checked(
          acc, detail::mul_checked(f.lower.vals[k], z.raw[j], t), t);
    }
    z.raw[i] = detail::div_trunc_checked(
        acc, f.lower.vals[f.diag_pos_lower[i]], t);
  }

  // backward: w_i = (z_i - sum_{j>i} U_ij w_j) / U_ii
  FxVector w(static_cast<std::size_t>(n), y.fmt);
  for (int i = n - 1; i >= 0; --i) {
    std::int64_t acc = z.raw[i];
    for (int k = f.upper.row_ptr[i]; k < f.upper.row_ptr[i + 1]; ++k) {
      const int j = f.upper.col_idx[k];
      if (j == i) continue;
      acc = detail::sub_checked(
          acc, detail::mul_checked(f.upper.vals[k], w.raw[j], t), t);
    }
    w.raw[i] = detail::div_trunc_checked(
        acc, f.upper.vals[f.diag_pos_upper[i]], t);
  }
  return w;
}

std::vector<double> apply_inverse_fp(const IluFactors& f,
                                     const std::vector<double>& y) {
  const int n = f.lower.n;
  if (static_cast<int>(y.size()) != n)
    throw std::invalid_argument("apply_inverse_fp: dimension mismatch");
  std::vector<double> z(n), w(n);
  for (int i = 0; i < n; ++i) {
    double acc = y[i];
    for (int k = f.lower.row_ptr[i]; k < f.lower.row_ptr[i + 1]; ++k) {
      const int j = f.lower.col_idx[k];
      if (j != i) acc -= static_cast<double>(f.lower.vals[k]) * z[j];
    }
    z[i] = acc / static_cast<double>(f.lower.vals[f.diag_pos_lower[i]]);
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = z[i];
    for (int k = f.upper.row_ptr[i]; k < f.upper.row_ptr[i + 1]; ++k) {
      const int j = f.upper.col_idx[k];
      if (j != i) acc -= static_cast<double>(f.upper.vals[k]) * w[j];
    }
    w[i] = acc / static_cast<double>(f.upper.vals[f.diag_pos_upper[i]]);
  }
  return w;
}

std::vector<double> apply_fp(const FpIluFactors& f,
                             const std::vector<double>& y) {
  const int n = f.lower.n;
  if (static_cast<int>(y.size()) != n)
    throw std::invalid_argument("apply_fp: dimension mismatch");
  std::vector<double> z(n), w(n);
  for (int i = 0; i < n; ++i) {
    double acc = y[i];
    for (int k = f.lower.row_ptr[i]; k < f.lower.row_ptr[i + 1]; ++k) {
      const int j = f.lower.col_idx[k];
      if (j != i) acc -= f.lower.vals[k] * z[j];
    }
    z[i] = acc;  // unit diagonal
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = z[i] / f.diag[i];
    for (int k = f.upper.row_ptr[i]; k < f.upper.row_ptr[i + 1]; ++k) {
      const int j = f.upper.col_idx[k];
      if (j != i) acc -= f.upper.vals[k] * w[j];
    }
    w[i] = acc;
  }
  return w;
}

}  // namespace intgmres
