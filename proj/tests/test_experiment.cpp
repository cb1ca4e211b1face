#include "doctest.h"

#include "intgmres/experiment.hpp"
#include "intgmres/mm_io.hpp"
#include "test_matrices.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace intgmres;

namespace {

namespace fs = std::filesystem;

// Materialize a matrix under a suite-private temp directory.
std::string stash_matrix(const std::string& name, const CsrMatrixF& a) {
  const fs::path dir = fs::temp_directory_path() / "intgmres_experiment_suite";
  fs::create_directories(dir);
  const std::string path = (dir / name).string();
  save_matrix_market(path, a);
  return path;
}

std::string identity_path() {
  std::vector<std::tuple<int, int, double>> t;
  for (int i = 0; i < 10; ++i) t.emplace_back(i, i, 1.0);
  return stash_matrix("ident10.mtx", from_triplets(10, std::move(t)));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("defaults resolve by preconditioner") {
  ExperimentSpec spec;
  CHECK(effective_alpha(spec) == 16);
  spec.precond = PrecondKind::ilu0;
  CHECK(effective_alpha(spec) == 32);
  spec.alpha_a = 20;
  CHECK(effective_alpha(spec) == 20);

  CHECK(dataset_stem("/data/suite/epb2.mtx") == "epb2");
  CHECK(dataset_stem("wang3.mtx") == "wang3");
  CHECK(dataset_stem("dir/plain") == "plain");
}

TEST_CASE("identity system converges in one restart") {
  ExperimentSpec spec;
  spec.matrix_path = identity_path();
  spec.m = 5;

  const ExperimentResult r = run_experiment(spec);
  CHECK(r.converged);
  CHECK(r.restarts == 1);
  REQUIRE(r.history.size() == 2);
  CHECK(r.history[0].relres == 1.0);
  CHECK(r.history[1].relres < spec.tol);
  CHECK(r.history[1].iters == r.iterations);
  CHECK(r.report.overflow_total == 0);

  const std::string prefix =
      "dataset=ident10 m=5 solver=int precond=none iterations=";
  CHECK(r.summary.substr(0, prefix.size()) == prefix);
  CHECK(r.summary.substr(r.summary.size() - 14) == " converged=yes");
}

TEST_CASE("csv layout is pinned") {
  ExperimentSpec spec;
  spec.matrix_path = identity_path();
  spec.m = 5;

  const ExperimentResult r = run_experiment(spec);
  const std::string header = "restart,iters,relres,gamma,overflows\n";
  REQUIRE(r.csv.substr(0, header.size()) == header);

  // Row 0 is the initial state: unit relative residual, nothing run yet.
  const std::string row0 =
      "0,0,1.0000000000000000e+00,0.0000000000000000e+00,0\n";
  CHECK(r.csv.substr(header.size(), row0.size()) == row0);

  // One line per history row plus the header, each ending in newline.
  std::size_t lines = 0;
  for (char c : r.csv)
    if (c == '\n') ++lines;
  CHECK(lines == r.history.size() + 1);
  CHECK(r.csv.back() == '\n');
}

TEST_CASE("csv file matches the in-memory copy and reruns are identical") {
  const fs::path dir = fs::temp_directory_path() / "intgmres_experiment_suite";
  ExperimentSpec spec;
  spec.matrix_path = stash_matrix("lap8.mtx", testutil::laplacian2d(8));
  spec.m = 6;
  spec.out_path = (dir / "lap8_run.csv").string();

  const ExperimentResult first = run_experiment(spec);
  CHECK(read_file(spec.out_path) == first.csv);

  const ExperimentResult second = run_experiment(spec);
  CHECK(second.csv == first.csv);
  CHECK(second.summary == first.summary);
}

TEST_CASE("double baseline reports no gamma and cumulative iterations") {
  ExperimentSpec spec;
  spec.matrix_path = stash_matrix("lap8.mtx", testutil::laplacian2d(8));
  spec.solver = SolverKind::fp64;
  spec.m = 6;

  const ExperimentResult r = run_experiment(spec);
  CHECK(r.converged);
  REQUIRE(r.history.size() == static_cast<std::size_t>(r.restarts) + 1);
  long prev = -1;
  for (const HistoryRow& row : r.history) {
    CHECK(row.gamma == 0.0);
    CHECK(row.overflows == 0);
    CHECK(row.iters > prev);
    prev = row.iters;
  }
  CHECK(r.history.back().iters == r.iterations);
  CHECK(r.history.back().relres < spec.tol);
}

TEST_CASE("ilu preconditioning shortens the integer run") {
  const std::string path =
      stash_matrix("lap12.mtx", testutil::laplacian2d(12));

  ExperimentSpec plain;
  plain.matrix_path = path;
  plain.m = 6;
  const ExperimentResult r_plain = run_experiment(plain);
  REQUIRE(r_plain.converged);

  ExperimentSpec pre = plain;
  pre.precond = PrecondKind::ilu0;
  const ExperimentResult r_pre = run_experiment(pre);
  REQUIRE(r_pre.converged);

  CHECK(r_pre.iterations < r_plain.iterations);
  CHECK(r_pre.report.overflow_total == 0);
  for (const HistoryRow& row : r_pre.history) CHECK(row.overflows == 0);
}

TEST_CASE("invalid specs are rejected") {
  ExperimentSpec spec;
  spec.matrix_path = "/nonexistent/matrix.mtx";
  CHECK_THROWS_AS(run_experiment(spec), std::runtime_error);

  spec.matrix_path = identity_path();
  spec.s = -1;
  CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);

  spec.s = 0;
  spec.frac_bits = 63;  // no room for sign and integer bits
  CHECK_THROWS(run_experiment(spec));

  spec.frac_bits = 30;
  spec.m = 0;
  CHECK_THROWS_AS(run_experiment(spec), std::invalid_argument);
}

}  // TEST_SUITE
