#include "mpflux/reduce_solve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "mpflux/errors.hpp"

namespace mpflux {

Eigen::VectorXd SchurSystem::apply_mass_inverse(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y(x.size());
  for (std::size_t cl = 0; cl < block_llt.size(); ++cl) {
    const auto& dofs = dm->clusters[cl];
    Eigen::VectorXd local(dofs.size());
    for (std::size_t i = 0; i < dofs.size(); ++i) local[i] = x[dofs[i]];
    local = block_llt[cl].solve(local);
    for (std::size_t i = 0; i < dofs.size(); ++i) y[dofs[i]] = local[i];
  }
  return y;
}

SchurSystem reduce(const LumpedMassMatrix& M, const DofMap& dm, const SparseMat& B,
                   const Eigen::VectorXd& g_vec, const Eigen::VectorXd& f_vec) {
  SchurSystem sys;
  sys.B = B;
  sys.g_vec = g_vec;
  sys.dm = &dm;
  sys.block_llt.resize(M.blocks.size());
  for (std::size_t cl = 0; cl < M.blocks.size(); ++cl) {
    sys.block_llt[cl].compute(M.blocks[cl].mat);
    if (sys.block_llt[cl].info() != Eigen::Success)
      throw NonSPDBlock("cluster block " + std::to_string(cl) +
                        " failed Cholesky factorization");
  }

  // S = sum over clusters of W Mc^-1 W^T with W the B-columns of the
  // cluster restricted to their nonzero rows. Deterministic assembly
  // order: clusters ascending, sorted member/row ids.
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<int> row_of(B.rows(), -1);
  for (std::size_t cl = 0; cl < dm.clusters.size(); ++cl) {
    const auto& dofs = dm.clusters[cl];
    std::vector<int> rows;
    for (int j : dofs)
      for (SparseMat::InnerIterator it(B, j); it; ++it)
        if (row_of[it.row()] < 0) {
          row_of[it.row()] = 0;
          rows.push_back(static_cast<int>(it.row()));
        }
    std::sort(rows.begin(), rows.end());
    for (std::size_t r = 0; r < rows.size(); ++r) row_of[rows[r]] = static_cast<int>(r);

    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(rows.size(), dofs.size());
    for (std::size_t jj = 0; jj < dofs.size(); ++jj)
      for (SparseMat::InnerIterator it(B, dofs[jj]); it; ++it)
        W(row_of[it.row()], jj) = it.value();

    Eigen::MatrixXd local = W * sys.block_llt[cl].solve(W.transpose());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t s = 0; s < rows.size(); ++s)
        trip.emplace_back(rows[r], rows[s], local(r, s));
    for (int row : rows) row_of[row] = -1;
  }
  sys.S.resize(B.rows(), B.rows());
  sys.S.setFromTriplets(trip.begin(), trip.end());
  sys.rhs = f_vec + B * sys.apply_mass_inverse(g_vec);
  return sys;
}

Eigen::VectorXd cg_solve(const SparseMat& S, const Eigen::VectorXd& rhs, double tol,
                         SolveStats* stats) {
  const Eigen::Index n = S.rows();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double rhs_norm = rhs.norm();
  if (stats) *stats = {};
  if (rhs_norm == 0.0) return x;

  Eigen::VectorXd diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double d = S.coeff(i, i);
    if (!(d > 0)) throw NoConvergence("Schur matrix has a non-positive diagonal entry");
    diag[i] = d;
  }

  Eigen::VectorXd r = rhs;
  Eigen::VectorXd z = r.cwiseQuotient(diag);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  const long max_iter = std::max<long>(10 * n, 10000);
  for (long it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd q = S * p;
    double alpha = rz / p.dot(q);
    x += alpha * p;
    r -= alpha * q;
    double rel = r.norm() / rhs_norm;
    if (rel <= tol) {
      if (stats) *stats = {static_cast<int>(it), rel};
      return x;
    }
    z = r.cwiseQuotient(diag);
    double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  throw NoConvergence("conjugate gradients did not reach tolerance " + std::to_string(tol) +
                      " in " + std::to_string(max_iter) + " iterations");
}

Eigen::VectorXd recover_velocity(const SchurSystem& sys, const Eigen::VectorXd& p) {
  return sys.apply_mass_inverse(sys.B.transpose() * p - sys.g_vec);
}

DiscreteSolution solve_saddle_dense(const Eigen::MatrixXd& M, const SparseMat& B,
                                    const Eigen::VectorXd& g_vec,
                                    const Eigen::VectorXd& f_vec) {
  const Eigen::Index nu = M.rows(), np = B.rows();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nu + np, nu + np);
  A.topLeftCorner(nu, nu) = M;
  Eigen::MatrixXd Bd = Eigen::MatrixXd(B);
  A.topRightCorner(nu, np) = -Bd.transpose();
  A.bottomLeftCorner(np, nu) = Bd;
  Eigen::VectorXd rhs(nu + np);
  rhs.head(nu) = -g_vec;
  rhs.tail(np) = f_vec;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::VectorXd udiag = lu.matrixLU().diagonal().cwiseAbs();
  if (udiag.minCoeff() <= 1e-13 * udiag.maxCoeff())
    throw SingularSystem("saddle point system is singular");
  Eigen::VectorXd sol = lu.solve(rhs);
  double scale = A.lpNorm<Eigen::Infinity>() * sol.lpNorm<Eigen::Infinity>() +
                 rhs.lpNorm<Eigen::Infinity>();
  if (!sol.allFinite() || (A * sol - rhs).lpNorm<Eigen::Infinity>() > 1e-8 * (scale + 1e-300))
    throw SingularSystem("saddle point system is singular");

  DiscreteSolution out;
  out.u = sol.head(nu);
  out.p = sol.tail(np);
  out.conservation = (B * out.u - f_vec).norm();
  return out;
}

std::string matrix_market(const SparseMat& A) {
  std::ostringstream os;
  os.precision(17);
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << A.rows() << " " << A.cols() << " " << A.nonZeros() << "\n";
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMat::InnerIterator it(A, k); it; ++it)
      os << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
  return os.str();
}

std::string matrix_market(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os.precision(17);
  os << "%%MatrixMarket matrix array real general\n";
  os << v.size() << " 1\n";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << v[i] << "\n";
  return os.str();
}

}  // namespace mpflux
