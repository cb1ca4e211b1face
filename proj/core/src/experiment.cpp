#include "intgmres/experiment.hpp"

#include "intgmres/ilu.hpp"
#include "intgmres/mm_io.hpp"
#include "intgmres/refsolve.hpp"
#include "intgmres/split.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace intgmres {

namespace {

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void append_row(std::string& out, const HistoryRow& r) {
  out += std::to_string(r.restart);
  out += ',';
  out += std::to_string(r.iters);
  out += ',';
  out += sci(r.relres);
  out += ',';
  out += sci(r.gamma);
  out += ',';
  out += std::to_string(r.overflows);
  out += '\n';
}

}  // namespace

int effective_alpha(const ExperimentSpec& spec) {
  if (spec.alpha_a >= 0) return spec.alpha_a;
  return spec.precond == PrecondKind::ilu0 ? 32 : 16;
}

std::string dataset_stem(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

std::string format_csv(const std::vector<HistoryRow>& rows) {
  std::string out = "restart,iters,relres,gamma,overflows\n";
  for (const HistoryRow& r : rows) append_row(out, r);
  return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.s < 0)
    throw std::invalid_argument("run_experiment: s must be >= 0");

  const CsrMatrixF raw = load_matrix_market(spec.matrix_path);
  const std::vector<double> ones(static_cast<std::size_t>(raw.n), 1.0);
  const int alpha = effective_alpha(spec);

  ExperimentResult res;

  if (spec.solver == SolverKind::fp64) {
    CsrMatrixF a = raw;
    std::vector<double> b = ones;
    if (spec.scale_baseline) {
      RowScaled rs = row_scale(raw, alpha);
      a = std::move(rs.a);
      b = scale_rhs(ones, rs.scale);
    }
    FpIluFactors factors;
    const bool use_ilu = spec.precond == PrecondKind::ilu0;
    if (use_ilu) factors = factorize_ilu0(a);

    FpGmresConfig cfg;
    cfg.m = spec.m;
    cfg.tol = spec.tol;
    cfg.max_restarts = spec.max_refinements;
    const FpSolveResult f = solve_fp(a, b, cfg, use_ilu ? &factors : nullptr);

    res.converged = f.converged;
    res.restarts = f.restarts;
    res.iterations = f.iterations;
    res.x = f.x;
    res.history.push_back({0, 0, f.relres_history[0], 0.0, 0});
    long cum = 0;
    for (int k = 1; k <= f.restarts; ++k) {
      cum += f.cycle_dims[k - 1];
      res.history.push_back({k, cum, f.relres_history[k], 0.0, 0});
    }
  } else {
    const RowScaled rs = row_scale(raw, alpha);
    const std::vector<double> b = scale_rhs(ones, rs.scale);
    const SplitMatrix split = build_split(rs.a, alpha, spec.s + 1, rs.scale);

    IluFactors factors;
    const bool use_ilu = spec.precond == PrecondKind::ilu0;
    if (use_ilu) factors = split_cast(factorize_ilu0(rs.a));

    const QFormat fmt{spec.frac_bits};
    RefineConfig cfg;
    cfg.tol = spec.tol;
    cfg.max_refinements = spec.max_refinements;
    cfg.m = spec.m;
    cfg.fmt = fmt;
    cfg.shifts = spec.shifts ? *spec.shifts
                 : use_ilu  ? ShiftPlan::default_preconditioned(fmt)
                            : ShiftPlan::default_unpreconditioned(fmt);
    cfg.s = split.depth();  // everything the component cap made available
    cfg.checked = spec.checked;

    SolveResult r =
        solve(split, rs.a, b, cfg, use_ilu ? &factors : nullptr);
    const SolveReport& rep = r.report;

    res.converged = rep.converged;
    res.restarts = rep.refinements;
    res.iterations = rep.total_inner_iterations;
    res.x = std::move(r.x);
    res.history.push_back({0, 0, rep.relres_history[0], 0.0, 0});
    long cum = 0;
    for (int k = 1; k <= rep.refinements; ++k) {
      cum += rep.inner_dims[k - 1];
      res.history.push_back({k, cum, rep.relres_history[k],
                             rep.gamma_history[k - 1],
                             rep.overflow_per_restart[k - 1]});
    }
    res.report = std::move(r.report);
  }

  res.csv = format_csv(res.history);
  if (!spec.out_path.empty()) {
    std::ofstream out(spec.out_path, std::ios::binary);
    out << res.csv;
    if (!out)
      throw std::runtime_error("run_experiment: cannot write " +
                               spec.out_path);
  }

  res.summary = "dataset=" + dataset_stem(spec.matrix_path) +
                " m=" + std::to_string(spec.m) +
                " solver=" + (spec.solver == SolverKind::fp64 ? "double" : "int") +
                " precond=" + (spec.precond == PrecondKind::ilu0 ? "ilu0" : "none") +
                " iterations=" + std::to_string(res.iterations) +
                " converged=" + (res.converged ? "yes" : "no");
  return res;
}

}  // namespace intgmres
