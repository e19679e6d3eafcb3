#include "mpflux/geometry.hpp"

#include <cmath>
#include <map>

namespace mpflux {

namespace {

RefCell make_triangle() {
  RefCell c;
  c.shape = CellShape::Triangle;
  c.dim = 2;
  c.volume = 0.5;
  c.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  const double s2 = std::sqrt(2.0);
  c.facets = {
      {{0, 1}, {0, -1, 0}, 1.0},
      {{1, 2}, {1.0 / s2, 1.0 / s2, 0}, s2},
      {{2, 0}, {-1, 0, 0}, 1.0},
  };
  return c;
}

RefCell make_quad() {
  RefCell c;
  c.shape = CellShape::Quadrilateral;
  c.dim = 2;
  c.volume = 1.0;
  c.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  c.facets = {
      {{0, 1}, {0, -1, 0}, 1.0},
      {{1, 2}, {1, 0, 0}, 1.0},
      {{2, 3}, {0, 1, 0}, 1.0},
      {{3, 0}, {-1, 0, 0}, 1.0},
  };
  return c;
}

RefCell make_tet() {
  RefCell c;
  c.shape = CellShape::Tetrahedron;
  c.dim = 3;
  c.volume = 1.0 / 6.0;
  c.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const double s3 = std::sqrt(3.0);
  c.facets = {
      {{0, 1, 2}, {0, 0, -1}, 0.5},
      {{0, 1, 3}, {0, -1, 0}, 0.5},
      {{0, 2, 3}, {-1, 0, 0}, 0.5},
      {{1, 2, 3}, {1.0 / s3, 1.0 / s3, 1.0 / s3}, s3 / 2.0},
  };
  return c;
}

RefCell make_hex() {
  RefCell c;
  c.shape = CellShape::Hexahedron;
  c.dim = 3;
  c.volume = 1.0;
  c.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0},
                {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
  c.facets = {
      {{0, 1, 3, 2}, {0, 0, -1}, 1.0},
      {{4, 5, 7, 6}, {0, 0, 1}, 1.0},
      {{0, 1, 5, 4}, {0, -1, 0}, 1.0},
      {{2, 3, 7, 6}, {0, 1, 0}, 1.0},
      {{0, 2, 6, 4}, {-1, 0, 0}, 1.0},
      {{1, 3, 7, 5}, {1, 0, 0}, 1.0},
  };
  return c;
}

RefCell make_prism() {
  RefCell c;
  c.shape = CellShape::Prism;
  c.dim = 3;
  c.volume = 0.5;
  c.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {0, 1, 1}};
  const double s2 = std::sqrt(2.0);
  c.facets = {
      {{0, 1, 2}, {0, 0, -1}, 0.5},
      {{3, 4, 5}, {0, 0, 1}, 0.5},
      {{0, 1, 4, 3}, {0, -1, 0}, 1.0},
      {{1, 2, 5, 4}, {1.0 / s2, 1.0 / s2, 0}, s2},
      {{0, 2, 5, 3}, {-1, 0, 0}, 1.0},
  };
  return c;
}

}  // namespace

const RefCell& ref_cell(CellShape shape) {
  static const RefCell tri = make_triangle();
  static const RefCell quad = make_quad();
  static const RefCell tet = make_tet();
  static const RefCell hex = make_hex();
  static const RefCell prism = make_prism();
  switch (shape) {
    case CellShape::Triangle: return tri;
    case CellShape::Quadrilateral: return quad;
    case CellShape::Tetrahedron: return tet;
    case CellShape::Hexahedron: return hex;
    case CellShape::Prism: return prism;
  }
  return tri;  // unreachable
}

const char* shape_tag(CellShape s) {
  switch (s) {
    case CellShape::Triangle: return "tri";
    case CellShape::Quadrilateral: return "quad";
    case CellShape::Tetrahedron: return "tet";
    case CellShape::Hexahedron: return "hex";
    case CellShape::Prism: return "prism";
  }
  return "?";
}

bool shape_from_tag(const std::string& tag, CellShape& out) {
  static const std::map<std::string, CellShape> m = {
      {"tri", CellShape::Triangle},   {"quad", CellShape::Quadrilateral},
      {"tet", CellShape::Tetrahedron}, {"hex", CellShape::Hexahedron},
      {"prism", CellShape::Prism},
  };
  auto it = m.find(tag);
  if (it == m.end()) return false;
  out = it->second;
  return true;
}

}  // namespace mpflux
