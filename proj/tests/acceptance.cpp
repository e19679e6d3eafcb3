// Acceptance suite: runs every gate criterion end to end and prints one
// pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "mpflux/errors.hpp"
#include "mpflux/harness.hpp"
#include "mpflux/quadrature.hpp"

using namespace mpflux;

namespace {

int failures = 0;

struct Criterion {
  int id;
  std::string name;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;

  Criterion(int id_, std::string name_) : id(id_), name(std::move(name_)) {}

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }

  ~Criterion() {
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %2d  %-48s (%.1f s)%s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(), sec,
                detail.empty() ? "" : "  -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

template <typename Body>
void run_criterion(int id, const std::string& name, Body body) {
  Criterion c(id, name);
  try {
    body(c);
  } catch (const std::exception& e) {
    c.expect(false, std::string("exception: ") + e.what());
  }
}

const CellShape kShapes[] = {CellShape::Triangle, CellShape::Quadrilateral,
                             CellShape::Tetrahedron, CellShape::Hexahedron, CellShape::Prism};

std::vector<std::pair<CellShape, SchemeOrder>> all_elements() {
  std::vector<std::pair<CellShape, SchemeOrder>> out;
  for (CellShape s : kShapes) out.push_back({s, SchemeOrder::SecondOrder});
  out.push_back({CellShape::Triangle, SchemeOrder::FirstOrder});
  out.push_back({CellShape::Quadrilateral, SchemeOrder::FirstOrder});
  return out;
}

void criterion_1_quadrature(Criterion& c) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (CellShape shape : kShapes) {
    const auto& def = reference_element(shape, SchemeOrder::SecondOrder);
    auto monos = exactness_class(shape, SchemeOrder::SecondOrder);
    for (int trial = 0; trial < 200; ++trial) {
      Poly p;
      for (const auto& m : monos) p = p + m * coeff(rng);
      if (!verify_exactness(def, p)) {
        c.expect(false, std::string(shape_tag(shape)) + " trial " + std::to_string(trial));
        break;
      }
    }
  }
  // a polynomial just outside the class must fail on the triangle rule
  const auto& tri = reference_element(CellShape::Triangle, SchemeOrder::SecondOrder);
  c.expect(!verify_exactness(tri, Poly::monomial(3, 0, 0)),
           "triangle rule unexpectedly integrates x^3");
}

void criterion_2_block_structure(Criterion& c) {
  for (auto [shape, order] : all_elements()) {
    const auto& def = reference_element(shape, order);
    const int d = def.dim();
    for (int n = 0; n < def.num_nodes(); ++n) {
      int nonzero = 0;
      for (int i = 0; i < def.velocity_count(); ++i) {
        Vec v = eval_velocity(def, i, def.rule.points[n]);
        double mag = std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)});
        if (def.velocity[i].node == n) {
          if (mag > 1e-14) ++nonzero;
        } else if (mag > 1e-14) {
          c.expect(false, std::string(shape_tag(shape)) + ": stray function at node " +
                              std::to_string(n));
        }
      }
      c.expect(nonzero == d, std::string(shape_tag(shape)) + ": node " + std::to_string(n) +
                                 " has " + std::to_string(nonzero) + " functions");
    }
  }

  // assembled lumped mass on a level-2 hybrid mesh: entries outside the
  // node clusters are exactly zero
  Mesh mesh = generate("hybrid-square", 2);
  DofMap dm = build_dofmap(mesh, SchemeOrder::SecondOrder);
  LumpedMassMatrix M = assemble_lumped_mass(mesh, dm, ProblemData::identity_conductivity(2));
  Eigen::MatrixXd full = M.to_dense(dm);
  int bad = 0;
  for (int i = 0; i < dm.n_velocity; ++i)
    for (int j = 0; j < dm.n_velocity; ++j)
      if (dm.dof_cluster[i] != dm.dof_cluster[j] && full(i, j) != 0.0) ++bad;
  c.expect(bad == 0, std::to_string(bad) + " nonzeros outside clusters");
}

void criterion_3_reduction_equivalence(Criterion& c) {
  for (const std::string& family : generator_families()) {
    const bool is3d = family.find("cube") != std::string::npos;
    const ManufacturedCase& mc = get_case(is3d ? "smooth3d" : "paper2d");
    for (int level = 0; level <= 2; ++level) {
      Mesh mesh = generate(family, level);
      DofMap dm = build_dofmap(mesh, SchemeOrder::SecondOrder);
      if (dm.n_velocity + dm.n_pressure >= 5000) continue;  // dense oracle precondition

      for (int kind = 0; kind < 2; ++kind) {
        ProblemData data = kind == 0 ? ProblemData::identity_conductivity(mesh.dim)
                                     : mc.problem();
        if (kind == 0) {
          data.source = mc.f;      // nontrivial data with K = I
          data.boundary = mc.p;
        }
        LumpedMassMatrix M = assemble_lumped_mass(mesh, dm, data);
        SparseMat B = assemble_div(mesh, dm);
        RhsVectors rhs = assemble_rhs(mesh, dm, data);
        SchurSystem sys = reduce(M, dm, B, rhs.g_vec, rhs.f_vec);
        Eigen::VectorXd p = cg_solve(sys.S, sys.rhs, 1e-14, nullptr);
        Eigen::VectorXd u = recover_velocity(sys, p);
        DiscreteSolution oracle =
            solve_saddle_dense(M.to_dense(dm), B, rhs.g_vec, rhs.f_vec);
        double rel = ((u - oracle.u).norm() + (p - oracle.p).norm()) /
                     (oracle.u.norm() + oracle.p.norm());
        c.expect(rel < 1e-10, family + " level " + std::to_string(level) +
                                  (kind ? " case-K" : " K=I") + ": rel " + fmt(rel));
      }
    }
  }
}

void criterion_4_patch_test(Criterion& c) {
  for (const std::string& family : generator_families()) {
    const bool is3d = family.find("cube") != std::string::npos;
    const ManufacturedCase& mc = get_case(is3d ? "constant3d" : "constant2d");
    std::vector<SchemeOrder> orders = {SchemeOrder::SecondOrder};
    if (!is3d) orders.push_back(SchemeOrder::FirstOrder);
    for (SchemeOrder order : orders) {
      RunResult r = run_case(mc, family, 1, order, 1e-14);
      double worst = std::max({r.report.err_u, r.report.err_p, r.report.err_proj0});
      c.expect(worst <= 1e-10,
               family + (order == SchemeOrder::FirstOrder ? " order1" : " order2") + ": " +
                   fmt(worst));
    }
  }
}

// Criteria 5-8 share the study runs; conservation is checked on every one.
struct ConservationLog {
  std::vector<std::string> violations;
  double worst = 0.0;
  int runs = 0;
};

std::vector<StudyRow> run_study(const ManufacturedCase& mc, const std::string& family, int lo,
                                int hi, SchemeOrder order, ConservationLog& log) {
  const double tol = 1e-12;
  std::vector<StudyRow> rows;
  for (int level = lo; level <= hi; ++level) {
    RunResult r = run_case(mc, family, level, order, tol);
    ++log.runs;
    log.worst = std::max(log.worst, r.conservation_rel);
    if (r.conservation_rel > 10 * tol)
      log.violations.push_back(family + " level " + std::to_string(level) + ": residual " +
                               fmt(r.conservation_rel));
    rows.push_back({r.h, r.dof_u, r.dof_p, r.report});
  }
  return rows;
}

double last_eoc(const std::vector<StudyRow>& rows, double ErrorReport::*field) {
  std::vector<double> errs, hs;
  for (const auto& r : rows) {
    errs.push_back(r.report.*field);
    hs.push_back(r.h);
  }
  return eoc(errs, hs).back();
}

void criteria_5_to_8_convergence() {
  ConservationLog log;
  std::vector<StudyRow> first, second, tets, hexes;
  std::string trouble;
  try {
    first = run_study(get_case("paper2d"), "hybrid-square", 1, 4, SchemeOrder::FirstOrder, log);
    second = run_study(get_case("paper2d"), "hybrid-square", 1, 4, SchemeOrder::SecondOrder, log);
    tets = run_study(get_case("smooth3d"), "tet-cube", 0, 2, SchemeOrder::SecondOrder, log);
    hexes = run_study(get_case("smooth3d"), "hex-cube", 0, 2, SchemeOrder::SecondOrder, log);
  } catch (const std::exception& e) {
    trouble = std::string("exception: ") + e.what();
  }

  {
    Criterion c5(5, "discrete conservation on every study run");
    c5.detail = std::to_string(log.runs) + " runs, worst residual " + fmt(log.worst);
    c5.expect(trouble.empty(), trouble);
    for (const auto& v : log.violations) c5.expect(false, v);
  }
  {
    Criterion c6(6, "first order orders (u -> 1, pi0 p -> 2)");
    if (!trouble.empty()) {
      c6.expect(false, trouble);
    } else {
      double eu = last_eoc(first, &ErrorReport::err_u);
      double ep0 = last_eoc(first, &ErrorReport::err_proj0);
      c6.detail = "eoc(u) " + fmt(eu) + ", eoc(pi0 p) " + fmt(ep0);
      c6.expect(eu >= 0.9 && eu <= 1.1, "eoc(u) outside [0.9, 1.1]");
      c6.expect(ep0 >= 1.8 && ep0 <= 2.2, "eoc(pi0 p) outside [1.8, 2.2]");
    }
  }
  {
    Criterion c7(7, "second order orders (u, p -> 2, pi0/post -> 3)");
    if (!trouble.empty()) {
      c7.expect(false, trouble);
    } else {
      double eu = last_eoc(second, &ErrorReport::err_u);
      double ep = last_eoc(second, &ErrorReport::err_p);
      double ep0 = last_eoc(second, &ErrorReport::err_proj0);
      double epp = last_eoc(second, &ErrorReport::err_post);
      c7.detail = "eoc " + fmt(eu) + " / " + fmt(ep) + " / " + fmt(ep0) + " / " + fmt(epp);
      c7.expect(eu >= 1.9, "eoc(u) < 1.9");
      c7.expect(ep >= 1.8 && ep <= 2.3, "eoc(p) outside [1.8, 2.3]");
      c7.expect(ep0 >= 2.7 && ep0 <= 3.3, "eoc(pi0 p) outside [2.7, 3.3]");
      c7.expect(epp >= 2.7, "eoc(post p) < 2.7");
    }
  }
  {
    Criterion c8(8, "3d velocity order on tets and hexes");
    if (!trouble.empty()) {
      c8.expect(false, trouble);
    } else {
      double etet = last_eoc(tets, &ErrorReport::err_u);
      double ehex = last_eoc(hexes, &ErrorReport::err_u);
      c8.detail = "tet-cube eoc(u) " + fmt(etet) + ", hex-cube eoc(u) " + fmt(ehex);
      c8.expect(etet >= 1.7, "tet-cube below 1.7");
      c8.expect(ehex >= 1.7, "hex-cube below 1.7");
    }
  }
}

void criterion_9_postprocessing_exactness(Criterion& c) {
  for (const char* family : {"tri-square", "quad-square", "hybrid-square"}) {
    for (int level : {1, 2}) {
      RunResult r = run_case(get_case("linear2d"), family, level, SchemeOrder::SecondOrder,
                             1e-14);
      c.expect(r.report.err_post <= 1e-9,
               std::string(family) + " level " + std::to_string(level) + ": " +
                   fmt(r.report.err_post));
    }
  }
}

void criterion_10_mass_equivalence(Criterion& c) {
  std::mt19937 rng(31);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (const std::string& family : generator_families()) {
    const bool is3d = family.find("cube") != std::string::npos;
    std::vector<SchemeOrder> orders = {SchemeOrder::SecondOrder};
    if (!is3d) orders.push_back(SchemeOrder::FirstOrder);
    Mesh mesh = generate(family, 2);
    for (SchemeOrder order : orders) {
      DofMap dm = build_dofmap(mesh, order);
      ProblemData data = ProblemData::identity_conductivity(mesh.dim);
      LumpedMassMatrix Mh = assemble_lumped_mass(mesh, dm, data);
      SparseMat Mx = assemble_exact_mass(mesh, dm, data);
      double cmax = 0;
      for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd v(dm.n_velocity);
        for (int i = 0; i < dm.n_velocity; ++i) v[i] = gauss(rng);
        double ratio = v.dot(Mh.apply(dm, v)) / v.dot(Mx * v);
        cmax = std::max({cmax, ratio, 1.0 / ratio});
      }
      c.detail += family + (order == SchemeOrder::FirstOrder ? "/1" : "/2") + " c=" +
                  fmt(cmax) + "  ";
      c.expect(cmax < 10.0, family + ": constant " + fmt(cmax));
    }
  }
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  run_criterion(1, "quadrature exactness on the stated classes", criterion_1_quadrature);
  run_criterion(2, "nodal block structure of the velocity bases", criterion_2_block_structure);
  run_criterion(3, "reduction path matches the dense saddle oracle",
                criterion_3_reduction_equivalence);
  run_criterion(4, "constant pressure patch test", criterion_4_patch_test);
  criteria_5_to_8_convergence();
  run_criterion(9, "post-processed pressure exact for linear solutions",
                criterion_9_postprocessing_exactness);
  run_criterion(10, "lumped/exact mass equivalence constant below 10",
                criterion_10_mass_equivalence);
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
