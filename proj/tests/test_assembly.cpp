#include <doctest.h>

#include <algorithm>
#include <random>

#include "mpflux/assembly.hpp"
#include "mpflux/errors.hpp"
#include "mpflux/quadrature.hpp"

using namespace mpflux;

namespace {

Mesh reference_triangle_mesh() {
  return build_mesh(2, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}},
                    {{CellShape::Triangle, {0, 1, 2}}});
}

Mesh two_triangle_mesh() {
  return build_mesh(2, {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}},
                    {{CellShape::Triangle, {0, 1, 2}}, {CellShape::Triangle, {0, 2, 3}}});
}

// straightforward dense re-assembly that still respects the node
// association; cross-checks the clustered scatter logic
Eigen::MatrixXd dense_lumped_mass(const Mesh& mesh, const DofMap& dm,
                                  const ProblemData& data) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dm.n_velocity, dm.n_velocity);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& def = reference_element(mesh.cells[c].shape, dm.order);
    const AffineMap& map = mesh.maps[c];
    const double vol = map.det * ref_cell(mesh.cells[c].shape).volume;
    for (int n = 0; n < def.num_nodes(); ++n) {
      Vec x = map.apply(def.rule.points[n]);
      Mat k = data.conductivity(x);
      k.d = mesh.dim;
      Mat kinv = k.inverse();
      for (int i = 0; i < def.velocity_count(); ++i) {
        if (def.velocity[i].node != n) continue;
        const auto& [gi, si] = dm.cell_velocity[c][i];
        Vec vi = map.piola(def.velocity[i].value(def.rule.points[n])) * si;
        for (int j = 0; j < def.velocity_count(); ++j) {
          if (def.velocity[j].node != n) continue;
          const auto& [gj, sj] = dm.cell_velocity[c][j];
          Vec vj = map.piola(def.velocity[j].value(def.rule.points[n])) * sj;
          M(gi, gj) += vol * def.rule.weights[n] * dot(kinv * vi, vj);
        }
      }
    }
  }
  return M;
}

}  // namespace

TEST_CASE("dof counts on small meshes") {
  Mesh tri = reference_triangle_mesh();
  DofMap dm = build_dofmap(tri, SchemeOrder::SecondOrder);
  CHECK(dm.n_velocity == 8);
  CHECK(dm.n_pressure == 3);
  // 3 vertex clusters of size 2, one interior cluster of size 2
  REQUIRE(dm.clusters.size() == 4);
  for (const auto& cl : dm.clusters) CHECK(cl.size() == 2);

  Mesh two = two_triangle_mesh();
  DofMap dm2 = build_dofmap(two, SchemeOrder::SecondOrder);
  CHECK(dm2.n_velocity == 14);  // 16 local minus 2 shared
  CHECK(dm2.n_pressure == 6);
  // the shared-edge endpoints see three incident edges
  int size3 = 0;
  for (int v = 0; v < two.num_vertices(); ++v)
    if (dm2.clusters[dm2.vertex_cluster[v]].size() == 3) ++size3;
  CHECK(size3 == 2);

  Mesh hex = generate("hex-cube", 0);
  DofMap dmh = build_dofmap(hex, SchemeOrder::SecondOrder);
  CHECK(dmh.n_velocity == 27);
  CHECK(dmh.n_pressure == 7);

  // every velocity dof appears in exactly one cluster
  std::vector<int> seen(dm2.n_velocity, 0);
  for (const auto& cl : dm2.clusters)
    for (int dof : cl) seen[dof]++;
  for (int s : seen) CHECK(s == 1);

  // interior clusters have d members, vertex clusters one per incident
  // (facet, endpoint) pair
  for (int v = 0; v < two.num_vertices(); ++v) {
    long incident = 0;
    for (const auto& f : two.facets)
      incident += std::count(f.vertices.begin(), f.vertices.end(), v);
    CHECK(static_cast<long>(dm2.clusters[dm2.vertex_cluster[v]].size()) == incident);
  }
  for (int c = 0; c < two.num_cells(); ++c)
    for (int cl : dm2.interior_cluster[c]) CHECK(dm2.clusters[cl].size() == 2);
}

TEST_CASE("interior mass block on the reference triangle") {
  Mesh mesh = reference_triangle_mesh();
  DofMap dm = build_dofmap(mesh, SchemeOrder::SecondOrder);
  LumpedMassMatrix M = assemble_lumped_mass(mesh, dm, ProblemData::identity_conductivity(2));

  int cl = dm.interior_cluster[0][0];
  const auto& block = M.blocks[cl].mat;
  REQUIRE(block.rows() == 2);
  // (3/4) |T| Gram of {phi_7, phi_8} at the barycenter
  CHECK(block(0, 0) == doctest::Approx(3.0 / 8.0 * 5.0 / 81.0));
  CHECK(block(0, 1) == doctest::Approx(3.0 / 8.0 * -4.0 / 81.0));
  CHECK(block(1, 0) == doctest::Approx(3.0 / 8.0 * -4.0 / 81.0));
  CHECK(block(1, 1) == doctest::Approx(3.0 / 8.0 * 5.0 / 81.0));
}

TEST_CASE("lumped mass is symmetric, block-diagonal, and scales with 1/K") {
  Mesh mesh = generate("hybrid-square", 1);
  DofMap dm = build_dofmap(mesh, SchemeOrder::SecondOrder);
  ProblemData data = ProblemData::identity_conductivity(2);
  LumpedMassMatrix M = assemble_lumped_mass(mesh, dm, data);
  Eigen::MatrixXd full = M.to_dense(dm);
  CHECK((full - full.transpose()).norm() == 0.0);  // exactly symmetric

  // structural zeros outside clusters
  for (int i = 0; i < dm.n_velocity; ++i)
    for (int j = 0; j < dm.n_velocity; ++j)
      if (dm.dof_cluster[i] != dm.dof_cluster[j]) CHECK(full(i, j) == 0.0);

  // dense accumulator agrees entry by entry
  Eigen::MatrixXd dense = dense_lumped_mass(mesh, dm, data);
  CHECK((full - dense).norm() == 0.0);

  ProblemData data2 = data;
  data2.conductivity = [](const Vec&) {
    Mat k = Mat::identity(2);
    k(0, 0) = k(1, 1) = 2.0;
    return k;
  };
  data2.k_lower = 1.9;
  data2.k_upper = 2.1;
  LumpedMassMatrix M2 = assemble_lumped_mass(mesh, dm, data2);
  CHECK((M2.to_dense(dm) - 0.5 * full).norm() < 1e-14 * full.norm());
}

TEST_CASE("singular or out-of-bounds conductivity is reported") {
  Mesh mesh = reference_triangle_mesh();
  DofMap dm = build_dofmap(mesh, SchemeOrder::SecondOrder);
  ProblemData data = ProblemData::identity_conductivity(2);
  data.conductivity = [](const Vec&) { return Mat::zero(2); };
  data.k_lower = data.k_upper = 0.0;
  CHECK_THROWS_AS(assemble_lumped_mass(mesh, dm, data), SingularConductivity);

  ProblemData bad_bounds = ProblemData::identity_conductivity(2);
  bad_bounds.k_lower = 3.0;  // identity violates [3, 4]
  bad_bounds.k_upper = 4.0;
  CHECK_THROWS_AS(assemble_lumped_mass(mesh, dm, bad_bounds), SingularConductivity);
}

TEST_CASE("lumped product is spectrally equivalent to the exact one") {
  for (const char* family : {"tri-square", "quad-square", "hybrid-square"}) {
    Mesh mesh = generate(family, 2);
    DofMap dm = build_dofmap(mesh, SchemeOrder::SecondOrder);
    ProblemData data = ProblemData::identity_conductivity(2);
    LumpedMassMatrix Mh = assemble_lumped_mass(mesh, dm, data);
    SparseMat Mx = assemble_exact_mass(mesh, dm, data);

    std::mt19937 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double cmax = 0;
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXd v(dm.n_velocity);
      for (int i = 0; i < dm.n_velocity; ++i) v[i] = gauss(rng);
      double lumped = v.dot(Mh.apply(dm, v));
      double exact = v.dot(Mx * v);
      REQUIRE(exact > 0);
      double ratio = lumped / exact;
      cmax = std::max({cmax, ratio, 1.0 / ratio});
    }
    MESSAGE("family ", std::string(family), ": equivalence constant <= ", cmax);
    CHECK(cmax < 10.0);
  }
}

TEST_CASE("divergence matrix entries and locality") {
  Mesh mesh = reference_triangle_mesh();
  DofMap dm = build_dofmap(mesh, SchemeOrder::SecondOrder);
  SparseMat B = assemble_div(mesh, dm);
  REQUIRE(B.rows() == 3);
  REQUIRE(B.cols() == 8);
  // interior function phi_8: div = 3x - 1 integrates to zero over the cell
  int dof8 = dm.cell_velocity[0][7].first;
  CHECK(Eigen::MatrixXd(B)(0, dof8) == doctest::Approx(0.0));

  // constant-pressure rows telescope on interior facet dofs
  Mesh two = two_triangle_mesh();
  DofMap dm2 = build_dofmap(two, SchemeOrder::SecondOrder);
  SparseMat B2 = assemble_div(two, dm2);
  Eigen::VectorXd ones = Eigen::VectorXd::Zero(dm2.n_pressure);
  ones[dm2.pressure_offset[0]] = 1.0;  // constant basis function is listed first
  ones[dm2.pressure_offset[1]] = 1.0;
  Eigen::VectorXd flux = B2.transpose() * ones;
  const auto& def = reference_element(CellShape::Triangle, SchemeOrder::SecondOrder);
  for (int f = 0; f < two.num_facets(); ++f) {
    if (two.facets[f].boundary()) continue;
    for (int c : {0, 1})
      for (int i = 0; i < def.velocity_count(); ++i) {
        const auto& fn = def.velocity[i];
        if (fn.facet >= 0 && two.cell_facets[c][fn.facet] == f)
          CHECK(std::abs(flux[dm2.cell_velocity[c][i].first]) < 1e-14);
      }
  }

  // locality: each row only touches columns of its own cell
  Eigen::MatrixXd B2d(B2);
  for (int c = 0; c < two.num_cells(); ++c) {
    std::vector<bool> mine(dm2.n_velocity, false);
    for (const auto& [dof, s] : dm2.cell_velocity[c]) mine[dof] = true;
    for (int q = 0; q < 3; ++q)
      for (int col = 0; col < dm2.n_velocity; ++col)
        if (!mine[col]) CHECK(B2d(dm2.pressure_offset[c] + q, col) == 0.0);
  }
}

TEST_CASE("right-hand sides") {
  Mesh mesh = reference_triangle_mesh();
  DofMap dm = build_dofmap(mesh, SchemeOrder::SecondOrder);
  ProblemData zero = ProblemData::identity_conductivity(2);
  RhsVectors rhs = assemble_rhs(mesh, dm, zero);
  CHECK(rhs.f_vec.norm() == 0.0);
  CHECK(rhs.g_vec.norm() == 0.0);

  ProblemData one = zero;
  one.source = [](const Vec&) { return 1.0; };
  rhs = assemble_rhs(mesh, dm, one);
  CHECK(rhs.f_vec[0] == doctest::Approx(0.5));        // (1, 1)_T = |T|
  CHECK(rhs.f_vec[1] == doctest::Approx(1.0 / 6.0));  // (1, x)_T
  CHECK(rhs.f_vec[2] == doctest::Approx(1.0 / 6.0));  // (1, y)_T

  // interior functions carry no boundary flux
  ProblemData gone = zero;
  gone.boundary = [](const Vec&) { return 1.0; };
  rhs = assemble_rhs(mesh, dm, gone);
  CHECK(rhs.g_vec.norm() > 0);
  CHECK(rhs.g_vec[dm.cell_velocity[0][6].first] == doctest::Approx(0.0));
  CHECK(rhs.g_vec[dm.cell_velocity[0][7].first] == doctest::Approx(0.0));
}

namespace {

// weighted normal flux of the discrete field through one facet, evaluated
// from a given adjacent cell with the sign of the global facet normal
double weighted_flux(const Mesh& mesh, const DofMap& dm, const Eigen::VectorXd& u, int facet,
                     int side) {
  const int cell = mesh.facets[facet].cells[side];
  const int lf = mesh.facets[facet].local_facet[side];
  const auto& def = reference_element(mesh.cells[cell].shape, dm.order);
  GaussRule rule = facet_gauss(mesh.cells[cell].shape, lf, 4);
  const Vec nhat = ref_cell(mesh.cells[cell].shape).facets[lf].normal;
  double val = 0;
  for (std::size_t g = 0; g < rule.points.size(); ++g) {
    Vec x = mesh.maps[cell].apply(rule.points[g]);
    double weight_fn = 1.0 + 2.0 * x.x - x.y + 0.5 * x.z;
    Vec vhat{};
    for (int i = 0; i < def.velocity_count(); ++i) {
      const auto& [gd, sc] = dm.cell_velocity[cell][i];
      vhat += def.velocity[i].value(rule.points[g]) * (sc * u[gd]);
    }
    val += rule.weights[g] * weight_fn * dot(nhat, vhat) * mesh.facet_sign[cell][lf];
  }
  return val;
}

}  // namespace

TEST_CASE("facet sign consistency across cells") {
  // every global dof on an interior facet yields the same weighted normal
  // flux when evaluated from either adjacent cell; exercises all facet
  // types including the hybrid triangle/quadrilateral interface
  struct Setup {
    const char* family;
    int level;
    SchemeOrder order;
  };
  const Setup setups[] = {
      {"hybrid-square", 1, SchemeOrder::FirstOrder},
      {"hybrid-square", 1, SchemeOrder::SecondOrder},
      {"tet-cube", 0, SchemeOrder::SecondOrder},
      {"hex-cube", 1, SchemeOrder::SecondOrder},
      {"prism-cube", 0, SchemeOrder::SecondOrder},
  };
  for (const auto& setup : setups) {
    Mesh mesh = generate(setup.family, setup.level);
    DofMap dm = build_dofmap(mesh, setup.order);
    int checked = 0;
    for (int f = 0; f < mesh.num_facets(); ++f) {
      if (mesh.facets[f].boundary()) continue;
      const int cell = mesh.facets[f].cells[0];
      const auto& def = reference_element(mesh.cells[cell].shape, setup.order);
      for (int i = 0; i < def.velocity_count(); ++i) {
        const auto& fn = def.velocity[i];
        if (fn.facet < 0 || mesh.cell_facets[cell][fn.facet] != f) continue;
        Eigen::VectorXd u = Eigen::VectorXd::Zero(dm.n_velocity);
        u[dm.cell_velocity[cell][i].first] = 1.0;
        double from0 = weighted_flux(mesh, dm, u, f, 0);
        double from1 = weighted_flux(mesh, dm, u, f, 1);
        CHECK(from0 == doctest::Approx(from1).epsilon(1e-12));
        ++checked;
      }
    }
    CHECK(checked > 0);
  }
}
