#pragma once

#include <vector>

#include "mpflux/geometry.hpp"

namespace mpflux {

// Gauss rule on a reference cell, exact for polynomials of total degree
// <= degree. Weights sum to the reference cell volume. Simplex directions
// use collapsed tensor Gauss-Legendre rules.
struct GaussRule {
  std::vector<Vec> points;
  std::vector<double> weights;
};

const GaussRule& cell_gauss(CellShape shape, int degree);

// Rule on one facet of a reference cell: points lie on the facet in
// reference coordinates, weights sum to the facet measure.
GaussRule facet_gauss(CellShape shape, int facet, int degree);

// 1D Gauss-Legendre on [0,1], exact through degree 2n-1.
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w);

}  // namespace mpflux
