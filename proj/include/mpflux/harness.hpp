#pragma once

#include <string>
#include <vector>

#include "mpflux/postprocess.hpp"
#include "mpflux/reduce_solve.hpp"

namespace mpflux {

// Closed-form test problem: exact pressure and velocity u = -K grad p,
// source f = div u, boundary data g = p.
struct ManufacturedCase {
  std::string name;
  int dim = 2;
  std::function<double(const Vec&)> p;
  std::function<Vec(const Vec&)> grad_p;
  std::function<Mat(const Vec&)> K;
  std::function<Vec(const Vec&)> u;
  std::function<double(const Vec&)> f;
  double k_lower = 0.0, k_upper = 0.0;

  ProblemData problem() const;
  ExactFields exact() const;
};

const ManufacturedCase& get_case(const std::string& name);
std::vector<std::string> case_names();

// f must match div u under central finite differences at sample points.
// Returns the worst absolute mismatch.
double case_consistency_error(const ManufacturedCase& c, int samples = 100,
                              double step = 1e-5);

struct RunResult {
  ErrorReport report;
  SolveStats stats;
  double conservation = 0.0;      // |B u_h - f_vec|
  double conservation_rel = 0.0;  // relative to |f_vec|
  int dof_u = 0, dof_p = 0;
  double h = 0.0;
};

// Full pipeline on one generated mesh level: assemble, reduce, solve,
// recover, post-process, measure errors. export_dir, when nonempty,
// receives matrix-market dumps of S, B and the right-hand sides.
RunResult run_case(const ManufacturedCase& c, const std::string& family, int level,
                   SchemeOrder order, double tol = 1e-12,
                   const std::string& export_dir = "");

struct StudyRow {
  double h = 0.0;
  int dof_u = 0, dof_p = 0;
  ErrorReport report;
};

std::vector<StudyRow> convergence_study(const ManufacturedCase& c, const std::string& family,
                                        int level_lo, int level_hi, SchemeOrder order,
                                        double tol = 1e-12);

// Deterministic CSV, header
// h,dof_u,dof_p,err_u,eoc_u,err_p,eoc_p,err_proj0,eoc_proj0,err_post,eoc_post
std::string emit_csv(const std::vector<StudyRow>& rows);

}  // namespace mpflux
