#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "mpflux/errors.hpp"
#include "mpflux/harness.hpp"

namespace {

using namespace mpflux;

SchemeOrder parse_order(int order) {
  if (order == 1) return SchemeOrder::FirstOrder;
  if (order == 2) return SchemeOrder::SecondOrder;
  throw InvalidInput("order must be 1 or 2");
}

void parse_levels(const std::string& spec, int& lo, int& hi) {
  auto pos = spec.find("..");
  if (pos == std::string::npos)
    throw InvalidInput("levels must be given as A..B");
  try {
    lo = std::stoi(spec.substr(0, pos));
    hi = std::stoi(spec.substr(pos + 2));
  } catch (const std::exception&) {
    throw InvalidInput("cannot parse levels '" + spec + "'");
  }
}

void print_report(const RunResult& r) {
  std::printf("h          = %.5e\n", r.h);
  std::printf("dof_u      = %d\n", r.dof_u);
  std::printf("dof_p      = %d\n", r.dof_p);
  std::printf("cg iters   = %d (residual %.3e)\n", r.stats.iterations, r.stats.residual);
  std::printf("consrv     = %.3e (rel %.3e)\n", r.conservation, r.conservation_rel);
  std::printf("err_u      = %.6e\n", r.report.err_u);
  std::printf("err_div    = %.6e\n", r.report.err_div);
  std::printf("err_p      = %.6e\n", r.report.err_p);
  std::printf("err_proj0  = %.6e\n", r.report.err_proj0);
  std::printf("err_post   = %.6e\n", r.report.err_post);
}

int run_main(int argc, char** argv) {
  CLI::App app{"Second order multipoint flux mixed finite element solver"};
  app.require_subcommand(1);

  // study
  auto* study = app.add_subcommand("study", "Convergence study over a level range");
  std::string case_name, family, levels = "1..4", out_file, export_dir;
  int order = 2;
  double tol = 1e-12;
  study->add_option("--case", case_name, "Manufactured case name")->required();
  study->add_option("--family", family, "Mesh generator family")->required();
  study->add_option("--order", order, "Scheme order (1 or 2)");
  study->add_option("--levels", levels, "Refinement range A..B");
  study->add_option("--tol", tol, "CG relative tolerance");
  study->add_option("--out", out_file, "CSV output path");
  study->add_option("--export-matrices", export_dir, "Dump S/B/rhs in matrix-market form");

  // run
  auto* run = app.add_subcommand("run", "Single level run");
  int level = 1;
  run->add_option("--case", case_name, "Manufactured case name")->required();
  run->add_option("--family", family, "Mesh generator family")->required();
  run->add_option("--level", level, "Refinement level");
  run->add_option("--order", order, "Scheme order (1 or 2)");
  run->add_option("--tol", tol, "CG relative tolerance");
  run->add_option("--export-matrices", export_dir, "Dump S/B/rhs in matrix-market form");

  // mesh gen / check
  auto* mesh_cmd = app.add_subcommand("mesh", "Mesh utilities");
  mesh_cmd->require_subcommand(1);
  auto* gen = mesh_cmd->add_subcommand("gen", "Generate a structured mesh");
  std::string mesh_out;
  gen->add_option("--family", family, "Mesh generator family")->required();
  gen->add_option("--level", level, "Refinement level")->required();
  gen->add_option("--out", mesh_out, "Output mesh file")->required();
  auto* check = mesh_cmd->add_subcommand("check", "Validate a mesh file");
  std::string mesh_in;
  check->add_option("file", mesh_in, "Mesh file")->required();

  // dump-element
  auto* dump = app.add_subcommand("dump-element", "Print one reference element");
  std::string shape_name;
  dump->add_option("--shape", shape_name, "tri|quad|tet|hex|prism")->required();
  dump->add_option("--order", order, "Scheme order (1 or 2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  if (*study) {
    const auto& c = get_case(case_name);
    int lo, hi;
    parse_levels(levels, lo, hi);
    auto rows = convergence_study(c, family, lo, hi, parse_order(order), tol);
    if (!export_dir.empty())
      run_case(c, family, hi, parse_order(order), tol, export_dir);
    std::string csv = emit_csv(rows);
    if (out_file.empty()) {
      std::cout << csv;
    } else {
      std::ofstream os(out_file);
      if (!os) throw InvalidInput("cannot open '" + out_file + "' for writing");
      os << csv;
      std::cout << "wrote " << out_file << "\n";
    }
    std::vector<double> hs;
    for (const auto& r : rows) hs.push_back(r.h);
    auto order_of = [&](auto get) {
      std::vector<double> errs;
      for (const auto& r : rows) errs.push_back(get(r));
      return eoc(errs, hs).back();
    };
    std::printf("last-pair eoc: u %.2f, p %.2f, proj0 %.2f, post %.2f\n",
                order_of([](const StudyRow& r) { return r.report.err_u; }),
                order_of([](const StudyRow& r) { return r.report.err_p; }),
                order_of([](const StudyRow& r) { return r.report.err_proj0; }),
                order_of([](const StudyRow& r) { return r.report.err_post; }));
  } else if (*run) {
    const auto& c = get_case(case_name);
    RunResult r = run_case(c, family, level, parse_order(order), tol, export_dir);
    print_report(r);
  } else if (*gen) {
    Mesh mesh = generate(family, level);
    std::ofstream os(mesh_out);
    if (!os) throw InvalidInput("cannot open '" + mesh_out + "' for writing");
    os << write_mesh(mesh);
    std::cout << "wrote " << mesh_out << " (" << mesh.num_vertices() << " vertices, "
              << mesh.num_cells() << " cells, h = " << mesh.h << ")\n";
  } else if (*check) {
    Mesh mesh = read_mesh_file(mesh_in);
    std::cout << mesh_in << ": ok (" << mesh.num_vertices() << " vertices, "
              << mesh.num_cells() << " cells, " << mesh.num_facets() << " facets, h = "
              << mesh.h << ", shape regularity " << mesh.shape_regularity << ")\n";
  } else if (*dump) {
    CellShape shape;
    if (!shape_from_tag(shape_name, shape))
      throw InvalidInput("unknown shape '" + shape_name + "'");
    std::cout << describe_element(reference_element(shape, parse_order(order)));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const mpflux::NoConvergence& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const mpflux::NonSPDBlock& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const mpflux::SingularSystem& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const mpflux::SingularConductivity& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const mpflux::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
