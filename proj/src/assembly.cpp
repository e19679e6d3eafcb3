#include "mpflux/assembly.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "mpflux/errors.hpp"
#include "mpflux/quadrature.hpp"

namespace mpflux {

ProblemData ProblemData::identity_conductivity(int dim) {
  ProblemData d;
  d.conductivity = [dim](const Vec&) { return Mat::identity(dim); };
  d.source = [](const Vec&) { return 0.0; };
  d.boundary = [](const Vec&) { return 0.0; };
  d.k_lower = 0.999;
  d.k_upper = 1.001;
  return d;
}

namespace {

// Closed-form eigenvalue range of a symmetric 2x2 or 3x3 matrix.
void sym_eigen_range(const Mat& k, int dim, double& lo, double& hi) {
  if (dim == 2) {
    double mean = 0.5 * (k(0, 0) + k(1, 1));
    double rad = std::sqrt(0.25 * (k(0, 0) - k(1, 1)) * (k(0, 0) - k(1, 1)) +
                           k(0, 1) * k(1, 0));
    lo = mean - rad;
    hi = mean + rad;
    return;
  }
  double p1 = k(0, 1) * k(0, 1) + k(0, 2) * k(0, 2) + k(1, 2) * k(1, 2);
  if (p1 == 0.0) {
    lo = std::min({k(0, 0), k(1, 1), k(2, 2)});
    hi = std::max({k(0, 0), k(1, 1), k(2, 2)});
    return;
  }
  double q = (k(0, 0) + k(1, 1) + k(2, 2)) / 3.0;
  double p2 = (k(0, 0) - q) * (k(0, 0) - q) + (k(1, 1) - q) * (k(1, 1) - q) +
              (k(2, 2) - q) * (k(2, 2) - q) + 2.0 * p1;
  double p = std::sqrt(p2 / 6.0);
  Mat b = k;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b(i, j) = (k(i, j) - (i == j ? q : 0.0)) / p;
  b.d = 3;
  double r = std::clamp(0.5 * b.det(), -1.0, 1.0);
  double phi = std::acos(r) / 3.0;
  hi = q + 2.0 * p * std::cos(phi);
  lo = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
}

// K(x) checks and closed-form inverse at one quadrature point.
Mat checked_k_inverse(const ProblemData& data, const Vec& x, int dim) {
  Mat k = data.conductivity(x);
  k.d = dim;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      if (std::abs(k(i, j) - k(j, i)) > 1e-12 * (1.0 + std::abs(k(i, j))))
        throw SingularConductivity("conductivity is not symmetric");
  double dt = k.det();
  double scale = std::pow(k.norm() + 1e-300, dim);
  if (!(std::abs(dt) > 1e-14 * scale))
    throw SingularConductivity("conductivity is singular at a quadrature point");
  if (data.k_lower > 0.0 || data.k_upper > 0.0) {
    double lo, hi;
    sym_eigen_range(k, dim, lo, hi);
    const double slack = 1e-9;
    if (lo < data.k_lower * (1.0 - slack) - slack || hi > data.k_upper * (1.0 + slack) + slack)
      throw SingularConductivity("conductivity eigenvalues violate declared bounds");
  }
  return k.inverse();
}

struct NodeValues {
  // per quadrature node: local basis indices associated with it and their
  // reference values at that node
  std::vector<std::vector<int>> members;
  std::vector<std::vector<Vec>> values;
};

const NodeValues& node_values(CellShape shape, SchemeOrder order) {
  static std::map<std::pair<int, int>, NodeValues> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(static_cast<int>(shape), static_cast<int>(order));
  auto it = cache.find(key);
  if (it == cache.end()) {
    const auto& def = reference_element(shape, order);
    NodeValues nv;
    nv.members.resize(def.num_nodes());
    nv.values.resize(def.num_nodes());
    for (int i = 0; i < def.velocity_count(); ++i) {
      int n = def.velocity[i].node;
      nv.members[n].push_back(i);
      nv.values[n].push_back(def.velocity[i].value(def.rule.points[n]));
    }
    it = cache.emplace(key, std::move(nv)).first;
  }
  return it->second;
}

// Exact reference integrals (div phi_i, q_j), cached per element.
const Eigen::MatrixXd& div_pressure_table(CellShape shape, SchemeOrder order) {
  static std::map<std::pair<int, int>, Eigen::MatrixXd> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(static_cast<int>(shape), static_cast<int>(order));
  auto it = cache.find(key);
  if (it == cache.end()) {
    const auto& def = reference_element(shape, order);
    Eigen::MatrixXd tab(def.pressure_count(), def.velocity_count());
    for (int q = 0; q < def.pressure_count(); ++q)
      for (int i = 0; i < def.velocity_count(); ++i)
        tab(q, i) = (def.velocity[i].div * def.pressure[q]).integral(shape);
    it = cache.emplace(key, std::move(tab)).first;
  }
  return it->second;
}

}  // namespace

const BasisAtPoints& basis_at_gauss(CellShape shape, SchemeOrder order, int degree) {
  static std::map<std::tuple<int, int, int>, BasisAtPoints> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_tuple(static_cast<int>(shape), static_cast<int>(order), degree);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const auto& def = reference_element(shape, order);
    const auto& rule = cell_gauss(shape, degree);
    BasisAtPoints bp;
    bp.value.resize(rule.points.size());
    bp.div.resize(rule.points.size());
    for (std::size_t g = 0; g < rule.points.size(); ++g) {
      bp.value[g].resize(def.velocity_count());
      bp.div[g].resize(def.velocity_count());
      for (int i = 0; i < def.velocity_count(); ++i) {
        bp.value[g][i] = def.velocity[i].value(rule.points[g]);
        bp.div[g][i] = def.velocity[i].div(rule.points[g]);
      }
    }
    it = cache.emplace(key, std::move(bp)).first;
  }
  return it->second;
}

Eigen::VectorXd LumpedMassMatrix::apply(const DofMap& dm, const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (std::size_t cl = 0; cl < blocks.size(); ++cl) {
    const auto& dofs = dm.clusters[cl];
    const auto& m = blocks[cl].mat;
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      double s = 0;
      for (std::size_t j = 0; j < dofs.size(); ++j) s += m(i, j) * x[dofs[j]];
      y[dofs[i]] += s;
    }
  }
  return y;
}

Eigen::MatrixXd LumpedMassMatrix::to_dense(const DofMap& dm) const {
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t cl = 0; cl < blocks.size(); ++cl) {
    const auto& dofs = dm.clusters[cl];
    for (std::size_t i = 0; i < dofs.size(); ++i)
      for (std::size_t j = 0; j < dofs.size(); ++j)
        full(dofs[i], dofs[j]) = blocks[cl].mat(i, j);
  }
  return full;
}

LumpedMassMatrix assemble_lumped_mass(const Mesh& mesh, const DofMap& dm,
                                      const ProblemData& data) {
  LumpedMassMatrix M;
  M.n = dm.n_velocity;
  M.blocks.resize(dm.clusters.size());
  for (std::size_t cl = 0; cl < dm.clusters.size(); ++cl)
    M.blocks[cl].mat =
        Eigen::MatrixXd::Zero(dm.clusters[cl].size(), dm.clusters[cl].size());

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    const auto& def = reference_element(cell.shape, dm.order);
    const auto& nv = node_values(cell.shape, dm.order);
    const AffineMap& map = mesh.maps[c];
    const double vol = map.det * ref_cell(cell.shape).volume;
    const int nverts = static_cast<int>(ref_cell(cell.shape).vertices.size());

    for (int nloc = 0; nloc < def.num_nodes(); ++nloc) {
      const auto& members = nv.members[nloc];
      Vec x = map.apply(def.rule.points[nloc]);
      Mat kinv = checked_k_inverse(data, x, mesh.dim);

      int cluster = nloc < nverts ? dm.vertex_cluster[cell.vertices[nloc]]
                                  : dm.interior_cluster[c][nloc - nverts];
      auto& block = M.blocks[cluster].mat;
      const double coeff = vol * def.rule.weights[nloc];

      std::vector<Vec> phys(members.size());
      std::vector<int> pos(members.size());
      for (std::size_t i = 0; i < members.size(); ++i) {
        const auto& [gdof, scale] = dm.cell_velocity[c][members[i]];
        phys[i] = map.piola(nv.values[nloc][i]) * scale;
        pos[i] = dm.dof_position[gdof];
      }
      for (std::size_t i = 0; i < members.size(); ++i) {
        Vec ki = kinv * phys[i];
        for (std::size_t j = 0; j < members.size(); ++j)
          block(pos[i], pos[j]) += coeff * dot(ki, phys[j]);
      }
    }
  }

  // blocks must be SPD: K uniformly positive definite and weights positive
  for (std::size_t cl = 0; cl < M.blocks.size(); ++cl) {
    Eigen::LLT<Eigen::MatrixXd> llt(M.blocks[cl].mat);
    if (llt.info() != Eigen::Success)
      throw NonSPDBlock("lumped mass block " + std::to_string(cl) +
                        " is not positive definite");
  }
  return M;
}

SparseMat assemble_exact_mass(const Mesh& mesh, const DofMap& dm, const ProblemData& data,
                              int quad_degree) {
  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    const auto& rule = cell_gauss(cell.shape, quad_degree);
    const auto& bp = basis_at_gauss(cell.shape, dm.order, quad_degree);
    const AffineMap& map = mesh.maps[c];
    const auto& loc2glob = dm.cell_velocity[c];
    const int nb = static_cast<int>(loc2glob.size());

    Eigen::MatrixXd local = Eigen::MatrixXd::Zero(nb, nb);
    for (std::size_t g = 0; g < rule.points.size(); ++g) {
      Vec x = map.apply(rule.points[g]);
      Mat kinv = checked_k_inverse(data, x, mesh.dim);
      const double coeff = map.det * rule.weights[g];
      for (int i = 0; i < nb; ++i) {
        Vec ki = kinv * map.piola(bp.value[g][i]);
        for (int j = 0; j < nb; ++j)
          local(i, j) += coeff * dot(ki, map.piola(bp.value[g][j]));
      }
    }
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j)
        trip.emplace_back(loc2glob[i].first, loc2glob[j].first,
                          loc2glob[i].second * loc2glob[j].second * local(i, j));
  }
  SparseMat M(dm.n_velocity, dm.n_velocity);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

SparseMat assemble_div(const Mesh& mesh, const DofMap& dm) {
  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    const Eigen::MatrixXd& tab = div_pressure_table(cell.shape, dm.order);
    const auto& loc2glob = dm.cell_velocity[c];
    const int poff = dm.pressure_offset[c];
    for (int q = 0; q < tab.rows(); ++q)
      for (int i = 0; i < tab.cols(); ++i) {
        double v = loc2glob[i].second * tab(q, i);
        if (v != 0.0) trip.emplace_back(poff + q, loc2glob[i].first, v);
      }
  }
  SparseMat B(dm.n_pressure, dm.n_velocity);
  B.setFromTriplets(trip.begin(), trip.end());
  return B;
}

RhsVectors assemble_rhs(const Mesh& mesh, const DofMap& dm, const ProblemData& data,
                        int quad_degree) {
  RhsVectors rhs;
  rhs.g_vec = Eigen::VectorXd::Zero(dm.n_velocity);
  rhs.f_vec = Eigen::VectorXd::Zero(dm.n_pressure);

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[c];
    const auto& def = reference_element(cell.shape, dm.order);
    const auto& rule = cell_gauss(cell.shape, quad_degree);
    const AffineMap& map = mesh.maps[c];
    for (std::size_t g = 0; g < rule.points.size(); ++g) {
      const double coeff = map.det * rule.weights[g] * data.source(map.apply(rule.points[g]));
      if (coeff == 0.0) continue;
      for (int q = 0; q < def.pressure_count(); ++q)
        rhs.f_vec[dm.pressure_offset[c] + q] += coeff * def.pressure[q](rule.points[g]);
    }
  }

  for (const auto& facet : mesh.facets) {
    if (!facet.boundary()) continue;
    const int c = facet.cells[0];
    const int lf = facet.local_facet[0];
    const auto& cell = mesh.cells[c];
    const auto& def = reference_element(cell.shape, dm.order);
    const RefCell& ref = ref_cell(cell.shape);
    const AffineMap& map = mesh.maps[c];
    GaussRule frule = facet_gauss(cell.shape, lf, quad_degree);
    const Vec nhat = ref.facets[lf].normal;
    for (int i = 0; i < def.velocity_count(); ++i) {
      const auto& fn = def.velocity[i];
      if (fn.facet != lf) continue;
      double integral = 0;
      for (std::size_t g = 0; g < frule.points.size(); ++g)
        integral += frule.weights[g] * data.boundary(map.apply(frule.points[g])) *
                    dot(nhat, fn.value(frule.points[g]));
      const auto& [gdof, scale] = dm.cell_velocity[c][i];
      rhs.g_vec[gdof] += scale * integral;
    }
  }
  return rhs;
}

}  // namespace mpflux
