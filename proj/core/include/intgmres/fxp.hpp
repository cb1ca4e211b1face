#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

// 64-bit two's-complement fixed-point scalars/vectors and the shifted
// arithmetic kernels used by the integer solver. All rounding is floor
// (arithmetic right shift); division truncates toward zero. In checked
// mode every wrapped add/sub/mul/shift is recorded in an FxTrace while
// still producing the wrapped two's-complement value, so a run can be
// replayed bit-exactly regardless of overflow.

namespace intgmres {

// Q(63-f).f format: 1 sign bit, 63-f integer bits, f fractional bits.
class QFormat {
 public:
  static constexpr int word_length = 64;

  explicit constexpr QFormat(int frac_bits) : frac_bits_(frac_bits) {
    if (frac_bits < 0 || frac_bits > word_length - 2)
      throw std::invalid_argument("QFormat: frac_bits must be in [0, 62]");
  }
  constexpr int frac_bits() const { return frac_bits_; }
  constexpr int int_bits() const { return word_length - 1 - frac_bits_; }

  friend constexpr bool operator==(const QFormat&, const QFormat&) = default;

 private:
  int frac_bits_;
};

struct FxScalar {
  std::int64_t raw = 0;
  QFormat fmt{0};
};

struct FxVector {
  std::vector<std::int64_t> raw;
  QFormat fmt{0};

  FxVector() = default;
  FxVector(std::size_t n, QFormat f) : raw(n, 0), fmt(f) {}
  std::size_t size() const { return raw.size(); }
};

struct OverflowEvent {
  std::string kernel;  // which solver kernel was active (set by the caller)
  std::string op;      // which primitive wrapped (add, mul, shl, ...)
  int restart = 0;
  int step = 0;
};

struct ShiftRecord {
  std::string kernel;
  int b1 = 0;
  int b2 = 0;
};

// Side-channel for diagnostics. `checked` turns on overflow recording
// (values wrap either way); `record_shifts` logs the (b1, b2) pair of
// every shifted multiply/divide/dot so a run's shift usage can be
// audited against its ShiftPlan.
class FxTrace {
 public:
  static constexpr std::size_t max_events = 1024;

  explicit FxTrace(bool checked = true, bool record_shifts = false)
      : checked_(checked), record_shifts_(record_shifts) {}

  bool checked() const { return checked_; }
  void set_kernel(const char* name) { kernel_ = name; }
  void set_location(int restart, int step) { restart_ = restart; step_ = step; }
  void set_restart(int restart) { restart_ = restart; }
  void set_step(int step) { step_ = step; }
  const char* kernel() const { return kernel_; }

  void record_overflow(const char* op) {
    ++total_overflows_;
    if (events.size() < max_events)
      events.push_back(OverflowEvent{kernel_, op, restart_, step_});
  }
  void record_shift(int b1, int b2) {
    if (record_shifts_) shifts.push_back(ShiftRecord{kernel_, b1, b2});
  }

  std::uint64_t total_overflows() const { return total_overflows_; }

  std::vector<OverflowEvent> events;  // capped at max_events
  std::vector<ShiftRecord> shifts;

 private:
  bool checked_;
  bool record_shifts_;
  const char* kernel_ = "";
  int restart_ = 0;
  int step_ = 0;
  std::uint64_t total_overflows_ = 0;
};

namespace detail {

// floor(x / 2^s); safe for any s >= 0.
inline std::int64_t asr(std::int64_t x, int s) {
  if (s >= 63) return x >> 63;
  return x >> s;
}

// x * 2^s mod 2^64 (two's complement), s >= 0.
inline std::int64_t wrap_shl(std::int64_t x, int s) {
  if (s >= 64) return 0;
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(x) << s);
}

inline bool checking(const FxTrace* t) { return t != nullptr && t->checked(); }

inline std::int64_t add_checked(std::int64_t a, std::int64_t b, FxTrace* t) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r) && checking(t)) t->record_overflow("add");
  return r;
}

inline std::int64_t sub_checked(std::int64_t a, std::int64_t b, FxTrace* t) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r) && checking(t)) t->record_overflow("sub");
  return r;
}

inline std::int64_t mul_checked(std::int64_t a, std::int64_t b, FxTrace* t) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r) && checking(t)) t->record_overflow("mul");
  return r;
}

inline std::int64_t shl_checked(std::int64_t x, int s, FxTrace* t) {
  std::int64_t r = wrap_shl(x, s);
  if (asr(r, s) != x && checking(t)) t->record_overflow("shl");
  return r;
}

inline std::int64_t div_trunc_checked(std::int64_t num, std::int64_t den,
                                      FxTrace* t) {
  if (num == std::numeric_limits<std::int64_t>::min() && den == -1) {
    if (checking(t)) t->record_overflow("div");
    return num;  // the one quotient that does not fit; wraps to itself
  }
  return num / den;
}

inline void require_same_format(const QFormat& a, const QFormat& b,
                                const char* who) {
  if (!(a == b))
    throw std::invalid_argument(std::string(who) + ": operand formats differ");
}

inline void require_shift_range(int b, const char* who) {
  if (b < 0 || b > 63)
    throw std::invalid_argument(std::string(who) + ": shift out of [0, 63]");
}

}  // namespace detail

// ---- scalar conversions ----

// Truncate-toward-zero quantization of x into fmt. Throws if |x| does not
// fit the integer part (NaN/inf included).
inline FxScalar encode(double x, QFormat fmt) {
  if (!(std::fabs(x) < std::ldexp(1.0, fmt.int_bits())))
    throw std::overflow_error("encode: value outside representable range");
  return FxScalar{static_cast<std::int64_t>(std::ldexp(x, fmt.frac_bits())),
                  fmt};
}

// Exact up to the single int64->double rounding; the power-of-two scaling
// itself is exact.
inline double decode(const FxScalar& a) {
  return std::ldexp(static_cast<double>(a.raw), -a.fmt.frac_bits());
}

FxVector encode_vector(const std::vector<double>& x, QFormat fmt);
std::vector<double> decode_vector(const FxVector& v);

// ---- scalar ops ----

inline FxScalar fx_add(const FxScalar& a, const FxScalar& b,
                       FxTrace* t = nullptr) {
  detail::require_same_format(a.fmt, b.fmt, "fx_add");
  return FxScalar{detail::add_checked(a.raw, b.raw, t), a.fmt};
}

inline FxScalar fx_sub(const FxScalar& a, const FxScalar& b,
                       FxTrace* t = nullptr) {
  detail::require_same_format(a.fmt, b.fmt, "fx_sub");
  return FxScalar{detail::sub_checked(a.raw, b.raw, t), a.fmt};
}

// (a >> b1) * (b >> b2), then shift down into out_frac:
//   result_raw = ((a.raw >> b1) * (b.raw >> b2)) >> (2f - b1 - b2 - out_frac)
inline FxScalar fx_mul(const FxScalar& a, const FxScalar& b, int b1, int b2,
                       int out_frac, FxTrace* t = nullptr) {
  detail::require_same_format(a.fmt, b.fmt, "fx_mul");
  detail::require_shift_range(b1, "fx_mul");
  detail::require_shift_range(b2, "fx_mul");
  QFormat out_fmt(out_frac);
  const int post = 2 * a.fmt.frac_bits() - b1 - b2 - out_frac;
  if (post < 0)
    throw std::invalid_argument("fx_mul: shifts exceed available precision");
  if (t) t->record_shift(b1, b2);
  const std::int64_t p = detail::mul_checked(detail::asr(a.raw, b1),
                                             detail::asr(b.raw, b2), t);
  return FxScalar{detail::asr(p, post), out_fmt};
}

// ((a << b1) / (b >> b2)) * 2^(f - b1 - b2); a negative final exponent is
// an arithmetic right shift. Result keeps the operands' format.
inline FxScalar fx_div(const FxScalar& a, const FxScalar& b, int b1, int b2,
                       FxTrace* t = nullptr) {
  detail::require_same_format(a.fmt, b.fmt, "fx_div");
  detail::require_shift_range(b1, "fx_div");
  detail::require_shift_range(b2, "fx_div");
  if (t) t->record_shift(b1, b2);
  const std::int64_t num = detail::shl_checked(a.raw, b1, t);
  const std::int64_t den = detail::asr(b.raw, b2);
  if (den == 0) throw std::domain_error("fx_div: shifted divisor is zero");
  const std::int64_t q = detail::div_trunc_checked(num, den, t);
  const int e = a.fmt.frac_bits() - b1 - b2;
  const std::int64_t r =
      e >= 0 ? detail::shl_checked(q, e, t) : detail::asr(q, -e);
  return FxScalar{r, a.fmt};
}

// floor(sqrt(v)) for the full uint64 range.
std::uint64_t isqrt(std::uint64_t v);

// Square root of a non-negative scalar whose frac_bits is even: integer
// sqrt of the raw word (which halves the fractional bits), then a shift
// into out_frac.
FxScalar fx_sqrt(const FxScalar& a, int out_frac, FxTrace* t = nullptr);

// ---- vector kernels ----

// sum_l (v_l >> b1) * (w_l >> b2), accumulated in int64, then shifted by
// f - b1 - b2 back into the operands' format.
FxScalar fx_dot(const FxVector& v, const FxVector& w, int b1, int b2,
                FxTrace* t = nullptr);

// 2-norm: accumulate (v_l >> b1)^2 (a Q.2(f-b1) value), integer sqrt,
// shift into the operands' format. Requires 2 * (f - b1) <= 62.
FxScalar fx_norm(const FxVector& v, int b1, FxTrace* t = nullptr);

// w_l -= ((h >> b1) * v_l) >> (f - b1), elementwise, in place.
void fx_axpy_sub(FxVector& w, const FxScalar& h, const FxVector& v, int b1,
                 FxTrace* t = nullptr);

// Per-kernel operand shifts for one solver configuration. b1 shifts the
// first operand, b2 the second; div_b1 is the *left* pre-shift of the
// dividend, all others are destructive right shifts.
struct ShiftPlan {
  int dot_b1 = 0;     // MGS inner products
  int dot_b2 = 0;
  int axpy_b1 = 0;    // basis updates w -= h v
  int norm_b1 = 0;    // vector norms (normalization and rotation setup)
  int div_b1 = 0;     // divisions (normalization and rotation coefficients)
  int div_b2 = 0;
  int givens_b2 = 0;  // applying stored rotations to a new column
  int rot_b = 0;      // residual-estimate update; kept at 0

  void validate(QFormat fmt) const;

  // Headroom for row-scaled operands up to about 2^16.
  static ShiftPlan default_unpreconditioned(QFormat fmt);
  // Preconditioned operands are O(1): no destructive shifts at all.
  static ShiftPlan default_preconditioned(QFormat fmt);
};

}  // namespace intgmres
