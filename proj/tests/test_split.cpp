#include "doctest.h"

#include "intgmres/split.hpp"
#include "oracle.hpp"

#include <cmath>
#include <random>
#include <tuple>
#include <vector>

using namespace intgmres;

namespace {

CsrMatrixF random_sparse(int n, double density, std::mt19937_64& rng,
                         double scale = 1000.0) {
  std::uniform_real_distribution<double> val(-scale, scale);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<std::tuple<int, int, double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, val(rng) + (val(rng) < 0 ? -scale : scale));
    for (int j = 0; j < n; ++j)
      if (j != i && coin(rng) < density) t.emplace_back(i, j, val(rng));
  }
  return from_triplets(n, std::move(t));
}

}  // namespace

TEST_SUITE("split") {

TEST_CASE("from_triplets sorts rows and merges duplicates") {
  CsrMatrixF m = from_triplets(
      3, {{2, 0, 5.0}, {0, 1, 1.0}, {0, 0, 2.0}, {2, 0, 1.5}, {1, 1, -3.0}});
  CHECK(m.n == 3);
  CHECK(m.nnz() == 4);
  CHECK(m.row_ptr == std::vector<int>{0, 2, 3, 4});
  CHECK(m.col_idx == std::vector<int>{0, 1, 1, 0});
  CHECK(m.vals == std::vector<double>{2.0, 1.0, -3.0, 6.5});
  CHECK_THROWS_AS(from_triplets(2, {{0, 2, 1.0}}), std::invalid_argument);
}

TEST_CASE("spmv_fp and residual_fp on a dense-checked example") {
  CsrMatrixF m = from_triplets(2, {{0, 0, 2.0}, {0, 1, -1.0}, {1, 1, 4.0}});
  const std::vector<double> x{1.0, 2.0};
  CHECK(spmv_fp(m, x) == std::vector<double>{0.0, 8.0});
  const Residual res = residual_fp(m, x, {0.0, 10.0});
  CHECK(res.r == std::vector<double>{0.0, 2.0});
  CHECK(res.relnorm == doctest::Approx(0.2));
}

TEST_CASE("row_scale maps each row max to exactly 2^alpha_a") {
  CsrMatrixF m = from_triplets(
      2, {{0, 0, 3.75}, {1, 0, 1.25}, {1, 1, -2.5}});
  const RowScaled rs = row_scale(m, 2);
  CHECK(rs.scale == std::vector<double>{0.9375, 0.625});
  CHECK(rs.a.vals == std::vector<double>{4.0, 2.0, -4.0});

  std::mt19937_64 rng(5);
  CsrMatrixF r = random_sparse(40, 0.2, rng);
  const RowScaled rr = row_scale(r, 16);
  for (int i = 0; i < r.n; ++i) {
    double mx = 0.0;
    for (int k = rr.a.row_ptr[i]; k < rr.a.row_ptr[i + 1]; ++k)
      mx = std::max(mx, std::fabs(rr.a.vals[k]));
    CHECK(mx == std::ldexp(1.0, 16));  // exact, not approximate
  }

  CsrMatrixF empty_row = from_triplets(2, {{0, 0, 1.0}});
  CHECK_THROWS_AS(row_scale(empty_row, 16), std::runtime_error);
}

TEST_CASE("scale_rhs divides elementwise") {
  CHECK(scale_rhs({1.0, 9.0}, {0.5, 3.0}) == std::vector<double>{2.0, 3.0});
  CHECK_THROWS_AS(scale_rhs({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("build_split peels integer layers with increasing exponents") {
  // 5.75 with alpha_a = 2: integer part 5, remainder 0.75; the next layer
  // scales by 2^(2 - ilogb(0.75)) = 2^3 and captures 6, leaving zero.
  CsrMatrixF m = from_triplets(1, {{0, 0, 5.75}});
  const SplitMatrix s = build_split(m, 2, 8);
  REQUIRE(s.components.size() == 2);
  CHECK(s.components[0].vals == std::vector<std::int64_t>{5});
  CHECK(s.alphas == std::vector<int>{0, 3});
  CHECK(s.components[1].vals == std::vector<std::int64_t>{6});
  CHECK(s.exact);
  CHECK(s.depth() == 1);
}

TEST_CASE("build_split on random matrices: pattern, bounds, exactness") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    CsrMatrixF a = random_sparse(30, 0.25, rng);
    const RowScaled rs = row_scale(a, 16);
    const SplitMatrix m = build_split(rs.a, 16, 16, rs.scale);

    // doubles have finite mantissas: the split must terminate exactly
    CHECK(m.exact);
    CHECK(m.scale_diag == rs.scale);

    for (std::size_t l = 0; l < m.components.size(); ++l) {
      CHECK(m.components[l].row_ptr == rs.a.row_ptr);
      CHECK(m.components[l].col_idx == rs.a.col_idx);
      if (l > 0) CHECK(m.alphas[l] > m.alphas[l - 1]);
      for (std::int64_t v : m.components[l].vals)
        CHECK(std::abs(v) <= (std::int64_t{1} << 17));  // < 2^(alpha_a + 1)
      // remainder after components 0..l is below 2^-alpha_l
      const CsrMatrixF rec = reconstruct_fp(m, static_cast<int>(l));
      double mrem = 0.0;
      for (std::size_t k = 0; k < rec.vals.size(); ++k)
        mrem = std::max(mrem, std::fabs(rs.a.vals[k] - rec.vals[k]));
      CHECK(mrem < std::ldexp(1.0, -m.alphas[l]));
    }

    // full reconstruction is bit-exact in double precision
    const CsrMatrixF full = reconstruct_fp(m, m.depth());
    CHECK(full.vals == rs.a.vals);
  }
}

TEST_CASE("integer spmv replays bit-exactly against the oracle") {
  std::mt19937_64 rng(77);
  const QFormat q30{30};
  for (int trial = 0; trial < 10; ++trial) {
    CsrMatrixF a = random_sparse(25, 0.3, rng);
    const RowScaled rs = row_scale(a, 16);
    const SplitMatrix m = build_split(rs.a, 16, 6, rs.scale);

    std::vector<std::vector<std::int64_t>> comp_vals;
    for (const auto& c : m.components) comp_vals.push_back(c.vals);

    // moderate raws (normalized-vector scale) and full-range raws (wrap
    // equivalence) both replay exactly
    std::uniform_int_distribution<std::int64_t> moderate(
        -(std::int64_t{1} << 31), std::int64_t{1} << 31);
    std::uniform_int_distribution<std::int64_t> full(
        std::numeric_limits<std::int64_t>::min(),
        std::numeric_limits<std::int64_t>::max());
    for (int pass = 0; pass < 2; ++pass) {
      FxVector v(static_cast<std::size_t>(m.n), q30);
      for (auto& x : v.raw) x = pass == 0 ? moderate(rng) : full(rng);
      for (int s = 0; s <= m.depth(); ++s) {
        const FxVector y = spmv(m, s, v);
        CHECK(y.raw == oracle::split_spmv(m.n, m.components[0].row_ptr,
                                          m.components[0].col_idx, comp_vals,
                                          m.alphas, s, v.raw));
      }
    }
  }
}

TEST_CASE("integer spmv tracks the floating-point operator") {
  std::mt19937_64 rng(123);
  const QFormat q30{30};
  CsrMatrixF a = random_sparse(50, 0.2, rng);
  const RowScaled rs = row_scale(a, 16);
  const SplitMatrix m = build_split(rs.a, 16, 8, rs.scale);

  std::uniform_real_distribution<double> xv(-1.0, 1.0);
  std::vector<double> x0(50);
  for (auto& v : x0) v = xv(rng);

  // compare on the vector the integer side actually sees, i.e. after
  // quantization, so the bound covers only truncation and floor error
  const FxVector xi = encode_vector(x0, q30);
  const std::vector<double> x = decode_vector(xi);
  for (int s = 0; s <= m.depth(); ++s) {
    const std::vector<double> yd = spmv_fp(rs.a, x);
    const std::vector<double> yi = decode_vector(spmv(m, s, xi));
    // per-component error: n * (2^-alpha_s * ||x||_inf + 2^-frac_bits)
    double xinf = 0.0;
    for (double v : x) xinf = std::max(xinf, std::fabs(v));
    const double bound =
        50.0 * (std::ldexp(1.0, -m.alphas[s]) * xinf + std::ldexp(1.0, -30));
    for (int i = 0; i < 50; ++i) CHECK(std::fabs(yd[i] - yi[i]) <= bound);
  }
}

TEST_CASE("spmv argument validation") {
  CsrMatrixF a = from_triplets(2, {{0, 0, 1.0}, {1, 1, 1.0}});
  const SplitMatrix m = build_split(a, 16, 4);
  const QFormat q30{30};
  CHECK_THROWS_AS(spmv(m, m.depth() + 1, FxVector(2, q30)),
                  std::invalid_argument);
  CHECK_THROWS_AS(spmv(m, 0, FxVector(3, q30)), std::invalid_argument);
  CHECK_THROWS_AS(build_split(a, 16, 0), std::invalid_argument);
}

}  // TEST_SUITE
