#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <optional>

#include "mpflux/dofmap.hpp"
#include "mpflux/mesh.hpp"

namespace mpflux {

using SparseMat = Eigen::SparseMatrix<double>;  // column major

// Coefficient and data functions of the flow problem. K maps a point to a
// symmetric positive definite conductivity tensor; declared eigenvalue
// bounds are spot-checked at quadrature points during assembly.
struct ProblemData {
  std::function<Mat(const Vec&)> conductivity;
  std::function<double(const Vec&)> source;    // f
  std::function<double(const Vec&)> boundary;  // g, pressure on the boundary
  double k_lower = 0.0;  // 0 disables the spot check
  double k_upper = 0.0;

  static ProblemData identity_conductivity(int dim);
};

// Block-diagonal lumped mass matrix: one dense SPD block per global
// quadrature node, blocks indexed like DofMap::clusters.
struct LumpedMassMatrix {
  struct Block {
    Eigen::MatrixXd mat;
  };
  std::vector<Block> blocks;
  int n = 0;

  Eigen::VectorXd apply(const DofMap& dm, const Eigen::VectorXd& x) const;
  Eigen::MatrixXd to_dense(const DofMap& dm) const;
};

LumpedMassMatrix assemble_lumped_mass(const Mesh& mesh, const DofMap& dm,
                                      const ProblemData& data);

// Exactly integrated velocity mass matrix (quadrature of the given degree
// for point-dependent K); test oracle for the lumping perturbation and the
// spectral equivalence check.
SparseMat assemble_exact_mass(const Mesh& mesh, const DofMap& dm, const ProblemData& data,
                              int quad_degree = 8);

// Divergence matrix, rows = pressure DOFs, columns = velocity DOFs.
// Entries are exact reference-cell integrals scaled by the gluing signs.
SparseMat assemble_div(const Mesh& mesh, const DofMap& dm);

struct RhsVectors {
  Eigen::VectorXd g_vec;  // velocity sized, <g, n . phi_j> over the boundary
  Eigen::VectorXd f_vec;  // pressure sized, (f, q_i)
};

RhsVectors assemble_rhs(const Mesh& mesh, const DofMap& dm, const ProblemData& data,
                        int quad_degree = 5);

// Values of all local velocity basis functions at the points of a Gauss
// rule, cached per (shape, order, degree); used by error norms and the
// exact mass matrix.
struct BasisAtPoints {
  std::vector<std::vector<Vec>> value;   // [point][basis]
  std::vector<std::vector<double>> div;  // [point][basis]
};
const BasisAtPoints& basis_at_gauss(CellShape shape, SchemeOrder order, int degree);

}  // namespace mpflux
