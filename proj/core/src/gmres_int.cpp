#include "intgmres/gmres_int.hpp"

#include <cmath>
#include <stdexcept>

namespace intgmres {

void apply_stored_rotations(std::int64_t* h_col, int count,
                            const std::int64_t* cos_raw,
                            const std::int64_t* sin_raw, int givens_b2,
                            QFormat fmt, FxTrace* t) {
  const int f = fmt.frac_bits();
  for (int i = 0; i < count; ++i) {
    const FxScalar c{cos_raw[i], fmt};
    const FxScalar s{sin_raw[i], fmt};
    const FxScalar hi{h_col[i], fmt};
    const FxScalar hn{h_col[i + 1], fmt};
    const FxScalar a = fx_mul(c, hi, 0, givens_b2, f, t);
    const FxScalar b = fx_mul(s, hn, 0, givens_b2, f, t);
    const FxScalar d = fx_mul(c, hn, 0, givens_b2, f, t);
    const FxScalar e = fx_mul(s, hi, 0, givens_b2, f, t);
    h_col[i] = fx_add(a, b, t).raw;
    h_col[i + 1] = fx_sub(d, e, t).raw;
  }
}

std::vector<double> solve_hessenberg(const std::vector<double>& r_cols,
                                     int ld, int dim,
                                     const std::vector<double>& g) {
  std::vector<double> y(dim);
  for (int i = dim - 1; i >= 0; --i) {
    double acc = g[i];
    for (int j = i + 1; j < dim; ++j) acc -= r_cols[j * ld + i] * y[j];
    const double r_ii = r_cols[i * ld + i];
    if (r_ii == 0.0)
      throw std::runtime_error("solve_hessenberg: zero diagonal");
    y[i] = acc / r_ii;
  }
  return y;
}

CycleResult run_cycle(const SplitMatrix& m, const CycleConfig& cfg,
                      const std::vector<double>& b,
                      const std::vector<double>& x0, FxTrace* trace,
                      ArnoldiState* state_out) {
  const int n = m.n;
  if (cfg.m < 1) throw std::invalid_argument("run_cycle: m must be >= 1");
  if (static_cast<int>(b.size()) != n || static_cast<int>(x0.size()) != n)
    throw std::invalid_argument("run_cycle: dimension mismatch");
  if (cfg.s < 0 || cfg.s > m.depth())
    throw std::invalid_argument("run_cycle: splitting depth out of range");
  cfg.shifts.validate(cfg.fmt);

  const QFormat fmt = cfg.fmt;
  const int f = fmt.frac_bits();
  const ShiftPlan& sp = cfg.shifts;

  CycleResult res;
  res.x = x0;

  // Initial residual in floating point; the preconditioner runs in
  // double on the integer factors here, so tiny residuals survive.
  std::vector<double> r0 = b;
  bool x0_nonzero = false;
  for (double v : x0) x0_nonzero = x0_nonzero || v != 0.0;
  if (x0_nonzero) {
    const std::vector<double> ax = spmv_fp(m, cfg.s, x0);
    for (int i = 0; i < n; ++i) r0[i] -= ax[i];
  }
  if (cfg.precond) r0 = apply_inverse_fp(*cfg.precond, r0);
  const double r0n = norm2(r0);
  res.diag.r0_norm = r0n;
  if (r0n == 0.0) return res;  // nothing to correct

  std::vector<FxVector> basis;
  basis.reserve(static_cast<std::size_t>(cfg.m) + 1);
  {
    std::vector<double> v1(n);
    for (int i = 0; i < n; ++i) v1[i] = r0[i] / r0n;
    basis.push_back(encode_vector(v1, fmt));
  }

  const int ld = cfg.m + 1;
  std::vector<std::int64_t> hess(static_cast<std::size_t>(ld) * cfg.m, 0);
  std::vector<std::int64_t> g(static_cast<std::size_t>(ld), 0);
  g[0] = std::int64_t{1} << f;  // e_1: the estimate tracks r/r0_norm
  std::vector<std::int64_t> cos_raw(cfg.m, 0), sin_raw(cfg.m, 0);

  int dim = 0;
  for (int j = 0; j < cfg.m; ++j) {
    if (trace) trace->set_step(j);
    std::int64_t* col = &hess[static_cast<std::size_t>(j) * ld];

    if (trace) trace->set_kernel("spmv");
    FxVector w = spmv(m, cfg.s, basis[static_cast<std::size_t>(j)], trace);
    if (cfg.precond) {
      if (trace) trace->set_kernel("precond");
      w = apply_inverse(*cfg.precond, w, trace);
    }

    for (int i = 0; i <= j; ++i) {
      if (trace) trace->set_kernel("dot");
      const FxScalar hij =
          fx_dot(w, basis[static_cast<std::size_t>(i)], sp.dot_b1, sp.dot_b2,
                 trace);
      col[i] = hij.raw;
      if (trace) trace->set_kernel("axpy");
      fx_axpy_sub(w, hij, basis[static_cast<std::size_t>(i)], sp.axpy_b1,
                  trace);
    }

    if (trace) trace->set_kernel("norm");
    const FxScalar hnext = fx_norm(w, sp.norm_b1, trace);
    col[j + 1] = hnext.raw;
    const bool happy_breakdown = hnext.raw == 0;

    if (!happy_breakdown) {
      if (trace) trace->set_kernel("vec_div");
      FxVector vnext(static_cast<std::size_t>(n), fmt);
      for (int l = 0; l < n; ++l)
        vnext.raw[l] =
            fx_div(FxScalar{w.raw[l], fmt}, hnext, sp.div_b1, sp.div_b2,
                   trace)
                .raw;
      basis.push_back(std::move(vnext));
    }

    if (trace) trace->set_kernel("givens");
    apply_stored_rotations(col, j, cos_raw.data(), sin_raw.data(),
                           sp.givens_b2, fmt, trace);

    if (trace) trace->set_kernel("givens_norm");
    FxVector pair(2, fmt);
    pair.raw[0] = col[j];
    pair.raw[1] = col[j + 1];
    const FxScalar t_mp = fx_norm(pair, sp.norm_b1, trace);
    if (t_mp.raw == 0) break;  // column vanished under rotation: drop it

    if (trace) trace->set_kernel("givens_div");
    const FxScalar c =
        fx_div(FxScalar{col[j], fmt}, t_mp, sp.div_b1, sp.div_b2, trace);
    const FxScalar s =
        fx_div(FxScalar{col[j + 1], fmt}, t_mp, sp.div_b1, sp.div_b2, trace);
    cos_raw[j] = c.raw;
    sin_raw[j] = s.raw;
    col[j] = t_mp.raw;
    col[j + 1] = 0;

    if (trace) trace->set_kernel("rot");
    const FxScalar g_old{g[j], fmt};
    const FxScalar neg_s{detail::sub_checked(0, s.raw, trace), fmt};
    g[j + 1] = fx_mul(neg_s, g_old, sp.rot_b, sp.rot_b, f, trace).raw;
    g[j] = fx_mul(c, g_old, sp.rot_b, sp.rot_b, f, trace).raw;

    dim = j + 1;
    res.diag.g_abs.push_back(std::fabs(decode(FxScalar{g[j + 1], fmt})));
    res.diag.cos.push_back(decode(c));
    res.diag.sin.push_back(decode(s));
    if (happy_breakdown) break;
  }
  res.diag.dim = dim;

  if (dim > 0) {
    // Decode the triangular system and finish in floating point.
    std::vector<double> r_cols(static_cast<std::size_t>(ld) * dim, 0.0);
    std::vector<double> gd(dim);
    for (int j = 0; j < dim; ++j) {
      for (int i = 0; i <= j; ++i)
        r_cols[static_cast<std::size_t>(j) * ld + i] =
            decode(FxScalar{hess[static_cast<std::size_t>(j) * ld + i], fmt});
      gd[j] = decode(FxScalar{g[j], fmt});
    }
    const std::vector<double> y = solve_hessenberg(r_cols, ld, dim, gd);
    for (int j = 0; j < dim; ++j) {
      const FxVector& vj = basis[static_cast<std::size_t>(j)];
      const double w = r0n * y[j];
      for (int l = 0; l < n; ++l)
        res.x[l] += w * decode(FxScalar{vj.raw[l], fmt});
    }
  }

  if (cfg.collect_basis_norms) {
    for (const FxVector& v : basis)
      res.diag.basis_norms.push_back(norm2(decode_vector(v)));
  }
  if (state_out) {
    state_out->basis = std::move(basis);
    state_out->hess = std::move(hess);
    state_out->ld = ld;
    state_out->g = std::move(g);
    state_out->cos_raw = std::move(cos_raw);
    state_out->sin_raw = std::move(sin_raw);
    state_out->fmt = fmt;
  }
  return res;
}

}  // namespace intgmres
