#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mpflux/errors.hpp"
#include "mpflux/harness.hpp"

namespace py = pybind11;
using namespace mpflux;

namespace {

CellShape shape_arg(const std::string& tag) {
  CellShape s;
  if (!shape_from_tag(tag, s)) throw InvalidInput("unknown shape '" + tag + "'");
  return s;
}

SchemeOrder order_arg(int order) {
  if (order == 1) return SchemeOrder::FirstOrder;
  if (order == 2) return SchemeOrder::SecondOrder;
  throw InvalidInput("order must be 1 or 2");
}

py::dict report_dict(const ErrorReport& r) {
  py::dict d;
  d["err_u"] = r.err_u;
  d["err_div"] = r.err_div;
  d["err_p"] = r.err_p;
  d["err_proj0"] = r.err_proj0;
  d["err_post"] = r.err_post;
  d["dof_u"] = r.dof_u;
  d["dof_p"] = r.dof_p;
  d["h"] = r.h;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mpflux, m) {
  m.doc() = "Multipoint flux mixed finite elements with mass lumping";

  py::register_exception<Error>(m, "MpfluxError");

  py::class_<Mesh>(m, "Mesh")
      .def_property_readonly("dim", [](const Mesh& mesh) { return mesh.dim; })
      .def_property_readonly("num_vertices", &Mesh::num_vertices)
      .def_property_readonly("num_cells", &Mesh::num_cells)
      .def_property_readonly("num_facets", &Mesh::num_facets)
      .def_property_readonly("h", [](const Mesh& mesh) { return mesh.h; })
      .def_property_readonly("shape_regularity",
                             [](const Mesh& mesh) { return mesh.shape_regularity; })
      .def("write", [](const Mesh& mesh) { return write_mesh(mesh); });

  m.def("generate_mesh", &generate, py::arg("family"), py::arg("level"));
  m.def("read_mesh", &read_mesh_string, py::arg("text"));
  m.def("generator_families", &generator_families);

  m.def(
      "element_info",
      [](const std::string& shape, int order) {
        const auto& def = reference_element(shape_arg(shape), order_arg(order));
        py::dict d;
        d["dim"] = def.dim();
        d["velocity_count"] = def.velocity_count();
        d["pressure_count"] = def.pressure_count();
        std::vector<std::vector<double>> pts;
        for (const auto& p : def.rule.points) {
          std::vector<double> q{p.x, p.y};
          if (def.dim() == 3) q.push_back(p.z);
          pts.push_back(q);
        }
        d["points"] = pts;
        d["weights"] = def.rule.weights;
        d["exactness"] = def.rule.exactness;
        d["node_blocks"] = node_blocks(def);
        return d;
      },
      py::arg("shape"), py::arg("order") = 2);

  m.def(
      "eval_velocity",
      [](const std::string& shape, int order, int i, std::vector<double> x) {
        Vec p{x.size() > 0 ? x[0] : 0, x.size() > 1 ? x[1] : 0, x.size() > 2 ? x[2] : 0};
        const auto& def = reference_element(shape_arg(shape), order_arg(order));
        Vec v = eval_velocity(def, i, p);
        std::vector<double> out{v.x, v.y};
        if (def.dim() == 3) out.push_back(v.z);
        return out;
      },
      py::arg("shape"), py::arg("order"), py::arg("i"), py::arg("x"));

  m.def(
      "eval_divergence",
      [](const std::string& shape, int order, int i, std::vector<double> x) {
        Vec p{x.size() > 0 ? x[0] : 0, x.size() > 1 ? x[1] : 0, x.size() > 2 ? x[2] : 0};
        return eval_divergence(reference_element(shape_arg(shape), order_arg(order)), i, p);
      },
      py::arg("shape"), py::arg("order"), py::arg("i"), py::arg("x"));

  m.def("describe_element", [](const std::string& shape, int order) {
    return describe_element(reference_element(shape_arg(shape), order_arg(order)));
  });

  m.def("case_names", &case_names);

  m.def(
      "run_case",
      [](const std::string& case_name, const std::string& family, int level, int order,
         double tol) {
        RunResult r = run_case(get_case(case_name), family, level, order_arg(order), tol);
        py::dict d = report_dict(r.report);
        d["iterations"] = r.stats.iterations;
        d["residual"] = r.stats.residual;
        d["conservation"] = r.conservation;
        d["conservation_rel"] = r.conservation_rel;
        return d;
      },
      py::arg("case"), py::arg("family"), py::arg("level"), py::arg("order") = 2,
      py::arg("tol") = 1e-12);

  m.def(
      "convergence_study",
      [](const std::string& case_name, const std::string& family, int lo, int hi, int order,
         double tol) {
        auto rows = convergence_study(get_case(case_name), family, lo, hi, order_arg(order), tol);
        py::list out;
        for (const auto& r : rows) out.append(report_dict(r.report));
        return out;
      },
      py::arg("case"), py::arg("family"), py::arg("level_lo"), py::arg("level_hi"),
      py::arg("order") = 2, py::arg("tol") = 1e-12);

  m.def(
      "study_csv",
      [](const std::string& case_name, const std::string& family, int lo, int hi, int order,
         double tol) {
        return emit_csv(
            convergence_study(get_case(case_name), family, lo, hi, order_arg(order), tol));
      },
      py::arg("case"), py::arg("family"), py::arg("level_lo"), py::arg("level_hi"),
      py::arg("order") = 2, py::arg("tol") = 1e-12);

  m.def("eoc", &eoc, py::arg("errors"), py::arg("hs"));
}
