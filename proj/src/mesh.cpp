#include "mpflux/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "mpflux/errors.hpp"

namespace mpflux {

namespace {

AffineMap make_map(const Mesh& mesh, const MeshCell& cell, int cell_id) {
  const RefCell& ref = ref_cell(cell.shape);
  const int nv = static_cast<int>(ref.vertices.size());
  if (static_cast<int>(cell.vertices.size()) != nv)
    throw InvalidInput("cell " + std::to_string(cell_id) + ": expected " +
                       std::to_string(nv) + " vertices");
  auto v = [&](int k) -> const Vec& { return mesh.vertices[cell.vertices[k]]; };

  AffineMap map;
  map.a = v(0);
  map.B = Mat::zero(mesh.dim);
  // columns of B are the edge vectors from vertex 0 along the reference axes
  int axis_vertex[3] = {1, 2, 3};
  if (cell.shape == CellShape::Quadrilateral) axis_vertex[1] = 3;
  if (cell.shape == CellShape::Hexahedron) axis_vertex[2] = 4;
  for (int ax = 0; ax < mesh.dim; ++ax) {
    Vec e = v(axis_vertex[ax]) - v(0);
    for (int i = 0; i < mesh.dim; ++i) map.B(i, ax) = e[i];
  }
  map.det = map.B.det();
  if (!(map.det > 0))
    throw InvertedCell("cell " + std::to_string(cell_id) +
                       " has non-positive Jacobian determinant");
  map.Binv = map.B.inverse();

  // Remaining vertices must agree with the affine prediction.
  double h_t = 0;
  for (std::size_t i = 0; i < cell.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < cell.vertices.size(); ++j)
      h_t = std::max(h_t, norm(v(int(i)) - v(int(j))));
  for (int k = 0; k < nv; ++k) {
    Vec predicted = map.apply(ref.vertices[k]);
    if (norm(predicted - v(k)) > 1e-10 * h_t)
      throw NonAffineCell("cell " + std::to_string(cell_id) +
                          " is not the affine image of its reference cell");
  }
  return map;
}

// A mesh vertex lying strictly inside another cell's facet (or on one of
// its edges in 3D) is a hanging node.
void check_hanging_nodes(const Mesh& mesh) {
  const double tol = 1e-9;
  for (const auto& facet : mesh.facets) {
    const int c = facet.cells[0];
    const auto& ref = ref_cell(mesh.cells[c].shape);
    const auto& lf = ref.facets[facet.local_facet[0]];
    const auto& cv = mesh.cells[c].vertices;
    Vec a = mesh.vertices[cv[lf.vertices[0]]];
    Vec b = mesh.vertices[cv[lf.vertices[1]]];
    double scale = norm(b - a);

    for (int vid = 0; vid < mesh.num_vertices(); ++vid) {
      if (std::find(facet.vertices.begin(), facet.vertices.end(), vid) !=
          facet.vertices.end())
        continue;
      const Vec& p = mesh.vertices[vid];
      bool on_facet = false;
      if (mesh.dim == 2) {
        Vec ab = b - a, ap = p - a;
        double t = dot(ap, ab) / dot(ab, ab);
        if (t > tol && t < 1.0 - tol) {
          Vec closest = a + t * ab;
          on_facet = norm(p - closest) < tol * scale;
        }
      } else {
        // parametrize by the facet corners (triangle or parallelogram)
        Vec e1 = mesh.vertices[cv[lf.vertices[1]]] - a;
        Vec e2 = mesh.vertices[cv[lf.vertices.back()]] - a;
        Vec nrm = cross(e1, e2);
        double area2 = norm(nrm);
        Vec ap = p - a;
        if (std::abs(dot(ap, nrm)) > tol * area2 * scale) continue;
        // solve ap = s e1 + t e2 in the facet plane
        double g11 = dot(e1, e1), g12 = dot(e1, e2), g22 = dot(e2, e2);
        double r1 = dot(ap, e1), r2 = dot(ap, e2);
        double det = g11 * g22 - g12 * g12;
        double s = (g22 * r1 - g12 * r2) / det;
        double t = (g11 * r2 - g12 * r1) / det;
        bool inside;
        if (lf.vertices.size() == 3)
          inside = s > -tol && t > -tol && s + t < 1.0 + tol;
        else
          inside = s > -tol && t > -tol && s < 1.0 + tol && t < 1.0 + tol;
        if (inside) {
          // exclude the corners themselves
          bool at_corner = false;
          for (int w : facet.vertices)
            if (norm(p - mesh.vertices[w]) < tol * scale) at_corner = true;
          on_facet = !at_corner;
        }
      }
      if (on_facet)
        throw NonConforming("vertex " + std::to_string(vid) +
                            " hangs on a facet of cell " + std::to_string(c));
    }
  }
}

}  // namespace

Mesh build_mesh(int dim, std::vector<Vec> vertices, std::vector<MeshCell> cells) {
  if (dim != 2 && dim != 3) throw InvalidInput("mesh dimension must be 2 or 3");
  Mesh mesh;
  mesh.dim = dim;
  mesh.vertices = std::move(vertices);
  mesh.cells = std::move(cells);

  for (const auto& v : mesh.vertices)
    if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
      throw InvalidInput("non-finite vertex coordinate");
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    if (dim_of(mesh.cells[c].shape) != dim)
      throw InvalidInput("cell " + std::to_string(c) + " has wrong dimension");
    for (int vid : mesh.cells[c].vertices)
      if (vid < 0 || vid >= mesh.num_vertices())
        throw InvalidInput("cell " + std::to_string(c) + " references invalid vertex");
  }

  mesh.maps.reserve(mesh.cells.size());
  mesh.cell_h.reserve(mesh.cells.size());
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    mesh.maps.push_back(make_map(mesh, mesh.cells[c], static_cast<int>(c)));
    double h_t = 0;
    const auto& cv = mesh.cells[c].vertices;
    for (std::size_t i = 0; i < cv.size(); ++i)
      for (std::size_t j = i + 1; j < cv.size(); ++j)
        h_t = std::max(h_t, norm(mesh.vertices[cv[i]] - mesh.vertices[cv[j]]));
    mesh.cell_h.push_back(h_t);
    mesh.h = std::max(mesh.h, h_t);
    mesh.shape_regularity =
        std::max(mesh.shape_regularity, mesh.maps[c].B.norm() * mesh.maps[c].Binv.norm());
  }

  // facet identification by sorted global vertex ids
  std::map<std::vector<int>, int> facet_index;
  mesh.cell_facets.resize(mesh.cells.size());
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const RefCell& ref = ref_cell(mesh.cells[c].shape);
    for (std::size_t lf = 0; lf < ref.facets.size(); ++lf) {
      std::vector<int> key;
      for (int lv : ref.facets[lf].vertices) key.push_back(mesh.cells[c].vertices[lv]);
      std::sort(key.begin(), key.end());
      auto it = facet_index.find(key);
      if (it == facet_index.end()) {
        MeshFacet f;
        f.vertices = key;
        f.cells[0] = static_cast<int>(c);
        f.local_facet[0] = static_cast<int>(lf);
        facet_index.emplace(key, mesh.num_facets());
        mesh.cell_facets[c].push_back(mesh.num_facets());
        mesh.facets.push_back(std::move(f));
      } else {
        MeshFacet& f = mesh.facets[it->second];
        if (f.cells[1] >= 0)
          throw NonConforming("facet shared by more than two cells");
        f.cells[1] = static_cast<int>(c);
        f.local_facet[1] = static_cast<int>(lf);
        mesh.cell_facets[c].push_back(it->second);
      }
    }
  }

  // physical facet measures
  for (auto& f : mesh.facets) {
    const int c = f.cells[0];
    const auto& ref = ref_cell(mesh.cells[c].shape);
    const auto& lf = ref.facets[f.local_facet[0]];
    const auto& cv = mesh.cells[c].vertices;
    Vec a = mesh.vertices[cv[lf.vertices[0]]];
    Vec b = mesh.vertices[cv[lf.vertices[1]]];
    if (mesh.dim == 2) {
      f.measure = norm(b - a);
    } else {
      Vec c2 = mesh.vertices[cv[lf.vertices.back()]];
      double par = norm(cross(b - a, c2 - a));
      f.measure = lf.vertices.size() == 3 ? 0.5 * par : par;
    }
  }

  // orientation: global normal is the outward normal of the first (lower
  // id) adjacent cell; boundary normals point outward
  mesh.facet_sign.resize(mesh.cells.size());
  for (std::size_t c = 0; c < mesh.cells.size(); ++c)
    mesh.facet_sign[c].assign(mesh.cell_facets[c].size(), 1.0);
  for (const auto& f : mesh.facets)
    if (!f.boundary()) mesh.facet_sign[f.cells[1]][f.local_facet[1]] = -1.0;

  check_hanging_nodes(mesh);
  return mesh;
}

namespace {

Mesh grid_mesh_2d(const std::string& family, int level) {
  const bool hybrid = family == "hybrid-square";
  const int n = hybrid ? (2 << level) : (1 << level);
  std::vector<Vec> verts;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      verts.push_back({double(i) / n, double(j) / n, 0});
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };

  std::vector<MeshCell> cells;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      bool tri = family == "tri-square" || (hybrid && i < n / 2);
      if (tri) {
        cells.push_back({CellShape::Triangle, {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)}});
        cells.push_back({CellShape::Triangle, {vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)}});
      } else {
        cells.push_back(
            {CellShape::Quadrilateral, {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)}});
      }
    }
  return build_mesh(2, std::move(verts), std::move(cells));
}

Mesh grid_mesh_3d(const std::string& family, int level) {
  const int n = 1 << level;
  std::vector<Vec> verts;
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        verts.push_back({double(i) / n, double(j) / n, double(k) / n});
  auto vid = [n](int i, int j, int k) { return (k * (n + 1) + j) * (n + 1) + i; };

  std::vector<MeshCell> cells;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (family == "hex-cube") {
          cells.push_back({CellShape::Hexahedron,
                           {vid(i, j, k), vid(i + 1, j, k), vid(i, j + 1, k), vid(i + 1, j + 1, k),
                            vid(i, j, k + 1), vid(i + 1, j, k + 1), vid(i, j + 1, k + 1),
                            vid(i + 1, j + 1, k + 1)}});
        } else if (family == "prism-cube") {
          int b0 = vid(i, j, k), b1 = vid(i + 1, j, k), b2 = vid(i, j + 1, k);
          int b3 = vid(i + 1, j + 1, k);
          int t0 = vid(i, j, k + 1), t1 = vid(i + 1, j, k + 1), t2 = vid(i, j + 1, k + 1);
          int t3 = vid(i + 1, j + 1, k + 1);
          cells.push_back({CellShape::Prism, {b0, b1, b2, t0, t1, t2}});
          cells.push_back({CellShape::Prism, {b3, b2, b1, t3, t2, t1}});
        } else {  // tet-cube, Kuhn subdivision
          const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                   {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
          const bool odd[6] = {false, true, true, false, false, true};
          for (int t = 0; t < 6; ++t) {
            int d[3] = {0, 0, 0};
            int path[4];
            path[0] = vid(i, j, k);
            for (int s = 0; s < 3; ++s) {
              d[perms[t][s]] = 1;
              path[s + 1] = vid(i + d[0], j + d[1], k + d[2]);
            }
            if (odd[t]) std::swap(path[1], path[2]);
            cells.push_back({CellShape::Tetrahedron, {path[0], path[1], path[2], path[3]}});
          }
        }
      }
  return build_mesh(3, std::move(verts), std::move(cells));
}

}  // namespace

std::vector<std::string> generator_families() {
  return {"tri-square", "quad-square", "hybrid-square", "tet-cube", "hex-cube", "prism-cube"};
}

Mesh generate(const std::string& family, int level) {
  if (level < 0) throw InvalidInput("refinement level must be >= 0");
  if (family == "tri-square" || family == "quad-square" || family == "hybrid-square")
    return grid_mesh_2d(family, level);
  if (family == "tet-cube" || family == "hex-cube" || family == "prism-cube")
    return grid_mesh_3d(family, level);
  throw UnknownFamily("unknown mesh family '" + family + "'");
}

Mesh read_mesh(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream probe(line);
      std::string tok;
      if (probe >> tok) {
        out = line;
        return true;
      }
    }
    return false;
  };
  auto fail = [&](const std::string& what) -> ParseError {
    return ParseError("line " + std::to_string(lineno) + ": " + what);
  };

  std::string l;
  if (!next_line(l)) throw fail("missing header");
  std::istringstream hs(l);
  std::string magic;
  int version = 0, dim = 0;
  if (!(hs >> magic >> version >> dim) || magic != "mfem-mesh" || version != 1)
    throw fail("expected header 'mfem-mesh 1 <dim>'");
  if (dim != 2 && dim != 3) throw fail("dimension must be 2 or 3");

  if (!next_line(l)) throw fail("missing vertex section");
  std::istringstream vs(l);
  std::string kw;
  int nv = 0;
  if (!(vs >> kw >> nv) || kw != "vertices" || nv < 0) throw fail("expected 'vertices <n>'");
  std::vector<Vec> verts;
  for (int i = 0; i < nv; ++i) {
    if (!next_line(l)) throw fail("unexpected end of file in vertex list");
    std::istringstream cs(l);
    Vec v;
    if (!(cs >> v.x >> v.y)) throw fail("bad vertex coordinates");
    if (dim == 3 && !(cs >> v.z)) throw fail("expected 3 coordinates");
    std::string extra;
    if (cs >> extra) throw fail("trailing tokens after vertex coordinates");
    verts.push_back(v);
  }

  if (!next_line(l)) throw fail("missing cell section");
  std::istringstream cs(l);
  int nc = 0;
  if (!(cs >> kw >> nc) || kw != "cells" || nc < 0) throw fail("expected 'cells <m>'");
  std::vector<MeshCell> cells;
  for (int i = 0; i < nc; ++i) {
    if (!next_line(l)) throw fail("unexpected end of file in cell list");
    std::istringstream ls(l);
    std::string tag;
    ls >> tag;
    CellShape shape;
    if (!shape_from_tag(tag, shape)) throw fail("unknown shape tag '" + tag + "'");
    MeshCell cell{shape, {}};
    int vid;
    while (ls >> vid) cell.vertices.push_back(vid);
    const std::size_t want = ref_cell(shape).vertices.size();
    if (cell.vertices.size() != want)
      throw fail("shape '" + tag + "' needs " + std::to_string(want) + " vertices, got " +
                 std::to_string(cell.vertices.size()));
    cells.push_back(std::move(cell));
  }
  return build_mesh(dim, std::move(verts), std::move(cells));
}

Mesh read_mesh_string(const std::string& text) {
  std::istringstream is(text);
  return read_mesh(is);
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

std::string write_mesh(const Mesh& mesh) {
  std::ostringstream os;
  os.precision(17);
  os << "mfem-mesh 1 " << mesh.dim << "\n";
  os << "vertices " << mesh.num_vertices() << "\n";
  for (const auto& v : mesh.vertices) {
    os << v.x << " " << v.y;
    if (mesh.dim == 3) os << " " << v.z;
    os << "\n";
  }
  os << "cells " << mesh.num_cells() << "\n";
  for (const auto& c : mesh.cells) {
    os << shape_tag(c.shape);
    for (int v : c.vertices) os << " " << v;
    os << "\n";
  }
  return os.str();
}

}  // namespace mpflux
