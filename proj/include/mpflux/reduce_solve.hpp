#pragma once

#include <Eigen/Cholesky>
#include <string>

#include "mpflux/assembly.hpp"

namespace mpflux {

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;  // final relative residual
};

// Cell-centered pressure system obtained by eliminating the velocity
// through the block-diagonal lumped mass matrix:
//   S p = f + B M^-1 g   with  S = B M^-1 B^T.
// Cluster Cholesky factors are retained for velocity recovery.
struct SchurSystem {
  SparseMat S;
  Eigen::VectorXd rhs;
  SparseMat B;
  Eigen::VectorXd g_vec;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> block_llt;  // per cluster
  const DofMap* dm = nullptr;

  Eigen::VectorXd apply_mass_inverse(const Eigen::VectorXd& x) const;
};

SchurSystem reduce(const LumpedMassMatrix& M, const DofMap& dm, const SparseMat& B,
                   const Eigen::VectorXd& g_vec, const Eigen::VectorXd& f_vec);

// Jacobi-preconditioned conjugate gradients down to a relative residual.
// Throws NoConvergence after max(10 n, 10000) iterations.
Eigen::VectorXd cg_solve(const SparseMat& S, const Eigen::VectorXd& rhs, double tol,
                         SolveStats* stats = nullptr);

// u = M^-1 (B^T p - g), using the retained block factorizations.
Eigen::VectorXd recover_velocity(const SchurSystem& sys, const Eigen::VectorXd& p);

struct DiscreteSolution {
  Eigen::VectorXd u;
  Eigen::VectorXd p;
  SolveStats stats;
  double conservation = 0.0;  // |B u - f|
};

// Direct factorization of the indefinite block system
//   [M  -B^T; B  0] [u; p] = [-g; f],
// with M given densely. Test oracle for the reduction path.
DiscreteSolution solve_saddle_dense(const Eigen::MatrixXd& M, const SparseMat& B,
                                    const Eigen::VectorXd& g_vec,
                                    const Eigen::VectorXd& f_vec);

std::string matrix_market(const SparseMat& A);
std::string matrix_market(const Eigen::VectorXd& v);

}  // namespace mpflux
