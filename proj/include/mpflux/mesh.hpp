#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mpflux/geometry.hpp"

namespace mpflux {

// Affine cell map F_T(xhat) = a + B xhat with positive Jacobian.
struct AffineMap {
  Vec a;
  Mat B;
  Mat Binv;
  double det = 0.0;

  Vec apply(const Vec& xhat) const { return a + B * xhat; }
  // Piola transform of a reference vector value: (1/det) B vhat.
  Vec piola(const Vec& vhat) const { return B * vhat * (1.0 / det); }
};

struct MeshCell {
  CellShape shape;
  std::vector<int> vertices;
};

struct MeshFacet {
  std::vector<int> vertices;   // global vertex ids, ascending
  int cells[2] = {-1, -1};     // adjacent cells, lower id first; -1 = none
  int local_facet[2] = {-1, -1};
  bool boundary() const { return cells[1] < 0; }
  double measure = 0.0;        // physical length/area
};

// Hybrid conforming affine mesh. Immutable after build_mesh; all queries
// are read-only.
struct Mesh {
  int dim = 0;
  std::vector<Vec> vertices;
  std::vector<MeshCell> cells;
  std::vector<MeshFacet> facets;
  std::vector<AffineMap> maps;                 // per cell
  std::vector<std::vector<int>> cell_facets;   // cell -> local facet -> facet id
  std::vector<std::vector<double>> facet_sign; // +1 if global normal is outward
  std::vector<double> cell_h;
  double h = 0.0;
  double shape_regularity = 0.0;  // max over cells of |B| |B^-1|

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_facets() const { return static_cast<int>(facets.size()); }
};

// Validates conformity and orientation, computes connectivity and maps.
// Throws NonConforming, InvertedCell, NonAffineCell, InvalidInput.
Mesh build_mesh(int dim, std::vector<Vec> vertices, std::vector<MeshCell> cells);

// Structured generators: tri-square, quad-square, hybrid-square, tet-cube,
// hex-cube, prism-cube. Mesh size halves per level.
Mesh generate(const std::string& family, int level);
std::vector<std::string> generator_families();

Mesh read_mesh(std::istream& in);
Mesh read_mesh_string(const std::string& text);
Mesh read_mesh_file(const std::string& path);
std::string write_mesh(const Mesh& mesh);

}  // namespace mpflux
