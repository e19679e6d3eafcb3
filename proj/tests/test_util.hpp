#pragma once

#include <random>

#include "mpflux/geometry.hpp"

namespace mpflux::testutil {

inline bool inside_cell(CellShape shape, const Vec& p, double tol = 1e-12) {
  switch (shape) {
    case CellShape::Triangle:
      return p.x >= -tol && p.y >= -tol && p.x + p.y <= 1 + tol;
    case CellShape::Quadrilateral:
      return p.x >= -tol && p.x <= 1 + tol && p.y >= -tol && p.y <= 1 + tol;
    case CellShape::Tetrahedron:
      return p.x >= -tol && p.y >= -tol && p.z >= -tol && p.x + p.y + p.z <= 1 + tol;
    case CellShape::Hexahedron:
      return p.x >= -tol && p.x <= 1 + tol && p.y >= -tol && p.y <= 1 + tol &&
             p.z >= -tol && p.z <= 1 + tol;
    case CellShape::Prism:
      return p.x >= -tol && p.y >= -tol && p.x + p.y <= 1 + tol && p.z >= -tol &&
             p.z <= 1 + tol;
  }
  return false;
}

// Uniform-ish interior point, kept away from the boundary so that central
// finite differences stay inside the cell.
inline Vec random_interior_point(CellShape shape, std::mt19937& rng, double margin = 0.05) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int d = dim_of(shape);
  while (true) {
    Vec p{unit(rng), unit(rng), d == 3 ? unit(rng) : 0.0};
    Vec centered = p * (1.0 - 2.0 * margin) +
                   Vec{margin, margin, d == 3 ? margin : 0.0};
    if (inside_cell(shape, centered, -margin / 2)) return centered;
  }
}

}  // namespace mpflux::testutil
