#include "intgmres/split.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace intgmres {

CsrMatrixF from_triplets(int n, std::vector<std::tuple<int, int, double>> t) {
  for (const auto& [i, j, v] : t) {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw std::invalid_argument("from_triplets: index out of range");
  }
  std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b));
  });
  CsrMatrixF m;
  m.n = n;
  m.row_ptr.assign(n + 1, 0);
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto& [i, j, v] = t[k];
    if (!m.col_idx.empty() && k > 0 && std::get<0>(t[k - 1]) == i &&
        std::get<1>(t[k - 1]) == j) {
      m.vals.back() += v;  // merge duplicates
    } else {
      m.col_idx.push_back(j);
      m.vals.push_back(v);
      m.row_ptr[i + 1] += 1;
    }
  }
  for (int i = 0; i < n; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
  return m;
}

std::vector<double> spmv_fp(const CsrMatrixF& a, const std::vector<double>& x) {
  std::vector<double> y(a.n, 0.0);
  for (int i = 0; i < a.n; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      y[i] += a.vals[k] * x[a.col_idx[k]];
  return y;
}

double norm2(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

Residual residual_fp(const CsrMatrixF& a, const std::vector<double>& x,
                     const std::vector<double>& b) {
  Residual res;
  res.r = spmv_fp(a, x);
  for (int i = 0; i < a.n; ++i) res.r[i] = b[i] - res.r[i];
  const double nb = norm2(b);
  res.relnorm = nb == 0.0 ? norm2(res.r) : norm2(res.r) / nb;
  return res;
}

RowScaled row_scale(const CsrMatrixF& a, int alpha_a) {
  RowScaled rs;
  rs.a = a;
  rs.scale.assign(a.n, 0.0);
  for (int i = 0; i < a.n; ++i) {
    double mx = 0.0;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      mx = std::max(mx, std::fabs(a.vals[k]));
    if (mx == 0.0)
      throw std::runtime_error("row_scale: row " + std::to_string(i) +
                               " has no nonzero entry");
    // d_i is a power-of-two rescale of the row max, so the max entry of
    // the scaled row divides out to exactly 2^alpha_a.
    const double d = std::ldexp(mx, -alpha_a);
    rs.scale[i] = d;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) rs.a.vals[k] /= d;
  }
  return rs;
}

std::vector<double> scale_rhs(const std::vector<double>& b,
                              const std::vector<double>& scale) {
  if (b.size() != scale.size())
    throw std::invalid_argument("scale_rhs: length mismatch");
  std::vector<double> out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = b[i] / scale[i];
  return out;
}

SplitMatrix build_split(const CsrMatrixF& a, int alpha_a, int max_components,
                        std::vector<double> scale_diag) {
  if (max_components < 1)
    throw std::invalid_argument("build_split: need at least one component");
  SplitMatrix m;
  m.n = a.n;
  m.alpha_a = alpha_a;
  m.scale_diag = std::move(scale_diag);

  CsrMatrixI comp;
  comp.n = a.n;
  comp.row_ptr = a.row_ptr;
  comp.col_idx = a.col_idx;
  comp.vals.resize(a.vals.size());

  // A_0: integer part. Entries of the scaled matrix are <= 2^alpha_a, far
  // inside int64, so the cast cannot overflow.
  std::vector<double> rem(a.vals.size());
  for (std::size_t k = 0; k < a.vals.size(); ++k) {
    comp.vals[k] = static_cast<std::int64_t>(a.vals[k]);  // trunc toward zero
    rem[k] = a.vals[k] - static_cast<double>(comp.vals[k]);  // exact
  }
  m.components.push_back(comp);
  m.alphas.push_back(0);

  while (static_cast<int>(m.components.size()) < max_components) {
    double mx = 0.0;
    for (double r : rem) mx = std::max(mx, std::fabs(r));
    if (mx == 0.0) break;
    const int alpha = alpha_a - std::ilogb(mx);
    if (alpha <= m.alphas.back())
      throw std::logic_error("build_split: exponents must increase");
    for (std::size_t k = 0; k < rem.size(); ++k) {
      const double scaled = std::ldexp(rem[k], alpha);
      comp.vals[k] = static_cast<std::int64_t>(scaled);
      rem[k] -= std::ldexp(static_cast<double>(comp.vals[k]), -alpha);
    }
    m.components.push_back(comp);
    m.alphas.push_back(alpha);
  }

  double mx = 0.0;
  for (double r : rem) mx = std::max(mx, std::fabs(r));
  m.exact = mx == 0.0;
  return m;
}

FxVector spmv(const SplitMatrix& m, int s, const FxVector& v, FxTrace* t) {
  if (s < 0 || s > m.depth())
    throw std::invalid_argument("spmv: component index out of range");
  if (static_cast<int>(v.size()) != m.n)
    throw std::invalid_argument("spmv: dimension mismatch");
  FxVector out(static_cast<std::size_t>(m.n), v.fmt);
  for (int l = 0; l <= s; ++l) {
    const CsrMatrixI& c = m.components[l];
    const int alpha = m.alphas[l];
    for (int i = 0; i < m.n; ++i) {
      std::int64_t acc = 0;
      for (int k = c.row_ptr[i]; k < c.row_ptr[i + 1]; ++k) {
        acc = detail::add_checked(
            acc, detail::mul_checked(c.vals[k], v.raw[c.col_idx[k]], t), t);
      }
      out.raw[i] =
          detail::add_checked(out.raw[i], detail::asr(acc, alpha), t);
    }
  }
  return out;
}

std::vector<double> spmv_fp(const SplitMatrix& m, int s,
                            const std::vector<double>& x) {
  if (s < 0 || s > m.depth())
    throw std::invalid_argument("spmv_fp: component index out of range");
  std::vector<double> y(m.n, 0.0);
  for (int l = 0; l <= s; ++l) {
    const CsrMatrixI& c = m.components[l];
    const double scale = std::ldexp(1.0, -m.alphas[l]);
    for (int i = 0; i < m.n; ++i) {
      double acc = 0.0;
      for (int k = c.row_ptr[i]; k < c.row_ptr[i + 1]; ++k)
        acc += static_cast<double>(c.vals[k]) * x[c.col_idx[k]];
      y[i] += scale * acc;
    }
  }
  return y;
}

CsrMatrixF reconstruct_fp(const SplitMatrix& m, int s) {
  if (s < 0 || s > m.depth())
    throw std::invalid_argument("reconstruct_fp: component index out of range");
  CsrMatrixF a;
  a.n = m.n;
  a.row_ptr = m.components[0].row_ptr;
  a.col_idx = m.components[0].col_idx;
  a.vals.assign(m.components[0].vals.size(), 0.0);
  for (int l = 0; l <= s; ++l) {
    const CsrMatrixI& c = m.components[l];
    for (std::size_t k = 0; k < a.vals.size(); ++k)
      a.vals[k] += std::ldexp(static_cast<double>(c.vals[k]), -m.alphas[l]);
  }
  return a;
}

}  // namespace intgmres
