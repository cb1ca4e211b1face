#pragma once

#include "intgmres/refine.hpp"

#include <optional>
#include <string>
#include <vector>

// One solver run on one Matrix Market file, with the convergence history
// written out as a CSV and condensed into a one-line summary. The right-
// hand side is always a vector of ones (before row scaling); plotting and
// dataset retrieval live outside the library.

namespace intgmres {

enum class SolverKind { integer, fp64 };
enum class PrecondKind { none, ilu0 };

struct ExperimentSpec {
  std::string matrix_path;
  SolverKind solver = SolverKind::integer;
  PrecondKind precond = PrecondKind::none;
  int m = 30;
  int frac_bits = 30;
  int alpha_a = -1;  // negative: 16 without preconditioning, 32 with ILU(0)
  int s = 0;  // correction components requested for the integer operator
              // (capped by where the splitting becomes exact)
  double tol = 1e-8;
  int max_refinements = 1000;
  bool checked = true;
  bool scale_baseline = true;  // double solver runs on the row-scaled system
  std::optional<ShiftPlan> shifts;  // default chosen by precond
  std::string out_path;             // CSV destination; empty keeps it in memory
};

// One CSV row: state after `restart` outer cycles (row 0 is the initial
// state). `iters` is cumulative; `gamma` and `overflows` belong to the
// cycle that produced the row (zero in row 0 and for the double solver).
struct HistoryRow {
  int restart = 0;
  long iters = 0;
  double relres = 0.0;
  double gamma = 0.0;
  std::uint64_t overflows = 0;
};

struct ExperimentResult {
  bool converged = false;
  int restarts = 0;
  long iterations = 0;
  std::vector<HistoryRow> history;
  std::string csv;      // full CSV text, also written to out_path when set
  std::string summary;  // dataset, m, solver, precond, iterations, converged
  SolveReport report;   // integer solver only; default otherwise
  std::vector<double> x;
};

// The alpha_a actually used after applying the precond-dependent default.
int effective_alpha(const ExperimentSpec& spec);

// File name without directory or extension, as reported in the summary.
std::string dataset_stem(const std::string& path);

std::string format_csv(const std::vector<HistoryRow>& rows);

ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace intgmres
