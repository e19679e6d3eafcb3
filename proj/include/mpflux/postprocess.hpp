#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "mpflux/assembly.hpp"

namespace mpflux {

// Piecewise polynomial pressure given by monomial coefficients on each
// cell's reference coordinates.
struct CellwisePoly {
  int degree = 0;
  std::vector<Eigen::VectorXd> coeffs;  // per cell

  double eval(const Mesh& mesh, int cell, const Vec& xhat) const;
};

// Local monomial basis of P_k on the reference cell of dimension dim.
const std::vector<Poly>& pk_monomials(int dim, int degree);

// Local pressure reconstruction from the discrete flux: on each cell,
// gradient recovery (grad ptilde, grad q) = -(K^-1 u_h, grad q) over P_k
// with a mean-value constraint matching the cell mean of p_h.
CellwisePoly stenberg_postprocess(const Mesh& mesh, const DofMap& dm, const ProblemData& data,
                                  const Eigen::VectorXd& u, const Eigen::VectorXd& p,
                                  int degree = 2, int quad_degree = 5);

// Cellwise L2 projection of a scalar field onto P_k, k in {0, 1}.
CellwisePoly project_pressure(const Mesh& mesh, int degree,
                              const std::function<double(const Vec&)>& field,
                              int quad_degree = 6);

struct ErrorReport {
  double err_u = 0.0;       // |u - u_h| / |u|
  double err_div = 0.0;     // |div(u - u_h)| / |div u|
  double err_p = 0.0;       // |p - p_h| / |p|
  double err_proj0 = 0.0;   // |pi0(p - p_h)| / |p|
  double err_post = 0.0;    // |p - ptilde_h| / |p|
  int dof_u = 0;
  int dof_p = 0;
  double h = 0.0;
};

struct ExactFields {
  std::function<Vec(const Vec&)> u;
  std::function<double(const Vec&)> div_u;
  std::function<double(const Vec&)> p;
};

ErrorReport error_norms(const Mesh& mesh, const DofMap& dm, const ExactFields& exact,
                        const Eigen::VectorXd& u, const Eigen::VectorXd& p,
                        const CellwisePoly* post = nullptr, int quad_degree = 6);

// Observed convergence orders between consecutive records,
// log(e_i/e_{i+1}) / log(h_i/h_{i+1}).
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& hs);

// Discrete fields evaluated inside one cell at a reference point.
Vec velocity_at(const Mesh& mesh, const DofMap& dm, const Eigen::VectorXd& u, int cell,
                const Vec& xhat);
double pressure_at(const Mesh& mesh, const DofMap& dm, const Eigen::VectorXd& p, int cell,
                   const Vec& xhat);

}  // namespace mpflux
