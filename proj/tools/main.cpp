#include "CLI11.hpp"

#include "intgmres/experiment.hpp"

#include <iostream>
#include <string>
#include <vector>

// Benchmark driver: one solver run per invocation, convergence history
// as CSV, one summary line on stdout. Solver failures exit nonzero.

int main(int argc, char** argv) {
  CLI::App app{
      "GMRES(m) with integer-only inner iterations, wrapped in iterative "
      "refinement, next to a double-precision baseline"};

  std::string matrix;
  std::string solver = "int";
  std::string precond = "none";
  std::string checked = "on";
  std::string out;
  int m = 30;
  int df = 30;
  int alpha_a = -1;
  int s = 0;
  int max_refinements = 1000;
  double tol = 1e-8;
  std::vector<int> shifts;
  bool unscaled = false;

  app.add_option("--matrix", matrix, "Matrix Market file (coordinate, real)")
      ->required();
  app.add_option("--solver", solver, "inner-iteration arithmetic")
      ->check(CLI::IsMember({"int", "double"}))
      ->capture_default_str();
  app.add_option("--precond", precond, "left preconditioner")
      ->check(CLI::IsMember({"none", "ilu0"}))
      ->capture_default_str();
  app.add_option("--m", m, "restart length")->capture_default_str();
  app.add_option("--df", df, "fractional bits of the fixed-point format")
      ->capture_default_str();
  app.add_option("--alpha-a", alpha_a,
                 "row-scaling exponent (default 16, or 32 with ilu0)");
  app.add_option("--s", s, "splitting components used by the integer operator")
      ->capture_default_str();
  app.add_option("--tol", tol, "relative-residual convergence threshold")
      ->capture_default_str();
  app.add_option("--max-refinements", max_refinements, "outer cycle cap")
      ->capture_default_str();
  app.add_option("--checked", checked, "record integer overflow events")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  app.add_option("--out", out, "write the convergence history CSV here");
  app.add_option("--shifts", shifts,
                 "override the shift plan: dot_b1 dot_b2 axpy_b1 norm_b1 "
                 "div_b1 div_b2 givens_b2 rot_b")
      ->expected(8);
  app.add_flag("--unscaled", unscaled,
               "double solver only: solve the original system instead of "
               "the row-scaled one");

  CLI11_PARSE(app, argc, argv);

  try {
    intgmres::ExperimentSpec spec;
    spec.matrix_path = matrix;
    spec.solver = solver == "double" ? intgmres::SolverKind::fp64
                                     : intgmres::SolverKind::integer;
    spec.precond = precond == "ilu0" ? intgmres::PrecondKind::ilu0
                                     : intgmres::PrecondKind::none;
    spec.m = m;
    spec.frac_bits = df;
    spec.alpha_a = alpha_a;
    spec.s = s;
    spec.tol = tol;
    spec.max_refinements = max_refinements;
    spec.checked = checked == "on";
    spec.scale_baseline = !unscaled;
    spec.out_path = out;
    if (!shifts.empty()) {
      intgmres::ShiftPlan p;
      p.dot_b1 = shifts[0];
      p.dot_b2 = shifts[1];
      p.axpy_b1 = shifts[2];
      p.norm_b1 = shifts[3];
      p.div_b1 = shifts[4];
      p.div_b2 = shifts[5];
      p.givens_b2 = shifts[6];
      p.rot_b = shifts[7];
      spec.shifts = p;
    }

    const intgmres::ExperimentResult res = intgmres::run_experiment(spec);
    std::cout << res.summary << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
