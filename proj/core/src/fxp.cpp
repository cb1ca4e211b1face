#include "intgmres/fxp.hpp"

#include <bit>

namespace intgmres {

FxVector encode_vector(const std::vector<double>& x, QFormat fmt) {
  FxVector v(x.size(), fmt);
  for (std::size_t i = 0; i < x.size(); ++i) v.raw[i] = encode(x[i], fmt).raw;
  return v;
}

std::vector<double> decode_vector(const FxVector& v) {
  std::vector<double> x(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    x[i] = decode(FxScalar{v.raw[i], v.fmt});
  return x;
}

std::uint64_t isqrt(std::uint64_t v) {
  if (v == 0) return 0;
  const int bits = 64 - std::countl_zero(v);
  // Start at 2^ceil(bits/2) >= sqrt(v); Newton iterates decrease
  // monotonically to floor(sqrt(v)) and never drop below it.
  std::uint64_t x = std::uint64_t{1} << ((bits + 1) / 2);
  for (;;) {
    const std::uint64_t nx = (x + v / x) / 2;
    if (nx >= x) break;
    x = nx;
  }
  while (static_cast<unsigned __int128>(x) * x > v) --x;
  return x;
}

FxScalar fx_sqrt(const FxScalar& a, int out_frac, FxTrace* t) {
  if (a.raw < 0) throw std::domain_error("fx_sqrt: negative input");
  const int fin = a.fmt.frac_bits();
  if (fin % 2 != 0)
    throw std::invalid_argument("fx_sqrt: input frac_bits must be even");
  QFormat out_fmt(out_frac);
  const auto r =
      static_cast<std::int64_t>(isqrt(static_cast<std::uint64_t>(a.raw)));
  const int e = out_frac - fin / 2;
  const std::int64_t v =
      e >= 0 ? detail::shl_checked(r, e, t) : detail::asr(r, -e);
  return FxScalar{v, out_fmt};
}

FxScalar fx_dot(const FxVector& v, const FxVector& w, int b1, int b2,
                FxTrace* t) {
  detail::require_same_format(v.fmt, w.fmt, "fx_dot");
  detail::require_shift_range(b1, "fx_dot");
  detail::require_shift_range(b2, "fx_dot");
  if (v.size() != w.size())
    throw std::invalid_argument("fx_dot: length mismatch");
  if (t) t->record_shift(b1, b2);
  std::int64_t acc = 0;
  for (std::size_t l = 0; l < v.size(); ++l) {
    const std::int64_t p = detail::mul_checked(detail::asr(v.raw[l], b1),
                                               detail::asr(w.raw[l], b2), t);
    acc = detail::add_checked(acc, p, t);
  }
  const int e = v.fmt.frac_bits() - b1 - b2;
  const std::int64_t r =
      e >= 0 ? detail::asr(acc, e) : detail::shl_checked(acc, -e, t);
  return FxScalar{r, v.fmt};
}

FxScalar fx_norm(const FxVector& v, int b1, FxTrace* t) {
  detail::require_shift_range(b1, "fx_norm");
  const int f = v.fmt.frac_bits();
  const int acc_frac = 2 * (f - b1);
  if (acc_frac < 0 || acc_frac > 62)
    throw std::invalid_argument(
        "fx_norm: accumulator format not representable (need 2*(f-b1) in "
        "[0, 62])");
  if (t) t->record_shift(b1, b1);
  std::int64_t acc = 0;
  for (std::size_t l = 0; l < v.size(); ++l) {
    const std::int64_t s = detail::asr(v.raw[l], b1);
    acc = detail::add_checked(acc, detail::mul_checked(s, s, t), t);
  }
  if (acc < 0)
    throw std::domain_error("fx_norm: accumulator wrapped negative");
  return fx_sqrt(FxScalar{acc, QFormat(acc_frac)}, f, t);
}

void fx_axpy_sub(FxVector& w, const FxScalar& h, const FxVector& v, int b1,
                 FxTrace* t) {
  detail::require_same_format(w.fmt, v.fmt, "fx_axpy_sub");
  detail::require_same_format(w.fmt, h.fmt, "fx_axpy_sub");
  detail::require_shift_range(b1, "fx_axpy_sub");
  if (v.size() != w.size())
    throw std::invalid_argument("fx_axpy_sub: length mismatch");
  const int post = w.fmt.frac_bits() - b1;
  if (post < 0)
    throw std::invalid_argument("fx_axpy_sub: b1 exceeds frac_bits");
  if (t) t->record_shift(b1, 0);
  const std::int64_t hs = detail::asr(h.raw, b1);
  for (std::size_t l = 0; l < w.size(); ++l) {
    const std::int64_t p = detail::mul_checked(hs, v.raw[l], t);
    w.raw[l] = detail::sub_checked(w.raw[l], detail::asr(p, post), t);
  }
}

void ShiftPlan::validate(QFormat fmt) const {
  const int f = fmt.frac_bits();
  auto check_right = [f](int b, const char* name) {
    if (b < 0 || (b > 0 && b >= f))
      throw std::invalid_argument(std::string("ShiftPlan: ") + name +
                                  " must lie in [0, frac_bits)");
  };
  check_right(dot_b1, "dot_b1");
  check_right(dot_b2, "dot_b2");
  check_right(axpy_b1, "axpy_b1");
  check_right(norm_b1, "norm_b1");
  check_right(div_b2, "div_b2");
  check_right(givens_b2, "givens_b2");
  if (div_b1 < 0 || div_b1 > f)
    throw std::invalid_argument(
        "ShiftPlan: div_b1 must lie in [0, frac_bits]");
  if (rot_b != 0)
    throw std::invalid_argument("ShiftPlan: rot_b must be 0");
  if (2 * (f - norm_b1) > 62)
    throw std::invalid_argument(
        "ShiftPlan: norm accumulator needs 2*(frac_bits - norm_b1) <= 62");
}

ShiftPlan ShiftPlan::default_unpreconditioned(QFormat fmt) {
  ShiftPlan p;
  p.dot_b1 = 16;
  p.dot_b2 = 0;
  p.axpy_b1 = 16;
  p.norm_b1 = 16;
  p.div_b1 = 16;
  p.div_b2 = fmt.frac_bits() - 16;
  p.givens_b2 = 16;
  p.rot_b = 0;
  p.validate(fmt);
  return p;
}

ShiftPlan ShiftPlan::default_preconditioned(QFormat fmt) {
  ShiftPlan p;
  p.div_b1 = fmt.frac_bits();
  p.validate(fmt);
  return p;
}

}  // namespace intgmres
