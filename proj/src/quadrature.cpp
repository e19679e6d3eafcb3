#include "mpflux/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "mpflux/errors.hpp"

namespace mpflux {

// Nodes by Newton iteration on Legendre polynomials, then mapped to [0,1].
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0 = 0, p1 = 0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
      }
      double dp = n * (t * p0 - p1) / (t * t - 1.0);
      double dt = p0 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    p0 = 1.0;
    p1 = 0.0;
    for (int k = 0; k < n; ++k) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
    }
    double dp = n * (t * p0 - p1) / (t * t - 1.0);
    x[i] = 0.5 * (1.0 - t);  // descending t -> ascending x
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
}

namespace {

// Collapsed (Duffy-type) tensor rules. The simplex map x = u(1-v),
// y = v multiplies the integrand degree by at most one per collapsed
// direction, so the 1D point counts below keep the stated exactness.
GaussRule tensor_rule(CellShape shape, int degree) {
  GaussRule r;
  int n = degree / 2 + 1;
  std::vector<double> gx, gw;
  switch (shape) {
    case CellShape::Quadrilateral: {
      gauss_legendre_01(n, gx, gw);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          r.points.push_back({gx[i], gx[j], 0});
          r.weights.push_back(gw[i] * gw[j]);
        }
      return r;
    }
    case CellShape::Hexahedron: {
      gauss_legendre_01(n, gx, gw);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            r.points.push_back({gx[i], gx[j], gx[k]});
            r.weights.push_back(gw[i] * gw[j] * gw[k]);
          }
      return r;
    }
    case CellShape::Triangle: {
      int m = (degree + 1) / 2 + 1;  // extra point absorbs the Jacobian (1-v)
      std::vector<double> hx, hw;
      gauss_legendre_01(m, hx, hw);
      gauss_legendre_01(m, gx, gw);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          double u = gx[i], v = hx[j];
          r.points.push_back({u * (1.0 - v), v, 0});
          r.weights.push_back(gw[i] * hw[j] * (1.0 - v));
        }
      return r;
    }
    case CellShape::Tetrahedron: {
      int m = (degree + 2) / 2 + 1;
      std::vector<double> hx, hw;
      gauss_legendre_01(m, hx, hw);
      gauss_legendre_01(m, gx, gw);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k) {
            double u = gx[i], v = gx[j], t = hx[k];
            // x = u(1-v)(1-t), y = v(1-t), z = t
            r.points.push_back({u * (1.0 - v) * (1.0 - t), v * (1.0 - t), t});
            r.weights.push_back(gw[i] * gw[j] * hw[k] * (1.0 - v) * (1.0 - t) * (1.0 - t));
          }
      return r;
    }
    case CellShape::Prism: {
      GaussRule tri = tensor_rule(CellShape::Triangle, degree);
      gauss_legendre_01(n, gx, gw);
      for (std::size_t i = 0; i < tri.points.size(); ++i)
        for (int k = 0; k < n; ++k) {
          r.points.push_back({tri.points[i].x, tri.points[i].y, gx[k]});
          r.weights.push_back(tri.weights[i] * gw[k]);
        }
      return r;
    }
  }
  return r;
}

}  // namespace

const GaussRule& cell_gauss(CellShape shape, int degree) {
  static std::map<std::pair<int, int>, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(static_cast<int>(shape), degree);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, tensor_rule(shape, degree)).first;
  return it->second;
}

GaussRule facet_gauss(CellShape shape, int facet, int degree) {
  const RefCell& cell = ref_cell(shape);
  if (facet < 0 || facet >= static_cast<int>(cell.facets.size()))
    throw IndexOutOfRange("facet index out of range");
  const auto& f = cell.facets[facet];
  GaussRule r;
  if (cell.dim == 2) {
    std::vector<double> gx, gw;
    gauss_legendre_01(degree / 2 + 1, gx, gw);
    Vec a = cell.vertices[f.vertices[0]], b = cell.vertices[f.vertices[1]];
    for (std::size_t i = 0; i < gx.size(); ++i) {
      r.points.push_back(a + gx[i] * (b - a));
      r.weights.push_back(gw[i] * f.measure);
    }
    return r;
  }
  if (f.vertices.size() == 3) {
    const GaussRule& tri = cell_gauss(CellShape::Triangle, degree);
    Vec a = cell.vertices[f.vertices[0]], b = cell.vertices[f.vertices[1]],
        c = cell.vertices[f.vertices[2]];
    for (std::size_t i = 0; i < tri.points.size(); ++i) {
      double u = tri.points[i].x, v = tri.points[i].y;
      r.points.push_back(a + u * (b - a) + v * (c - a));
      r.weights.push_back(tri.weights[i] / 0.5 * f.measure);
    }
    return r;
  }
  // parallelogram facet, affine image of the unit square
  const GaussRule& quad = cell_gauss(CellShape::Quadrilateral, degree);
  Vec a = cell.vertices[f.vertices[0]], b = cell.vertices[f.vertices[1]],
      d = cell.vertices[f.vertices[3]];
  for (std::size_t i = 0; i < quad.points.size(); ++i) {
    double u = quad.points[i].x, v = quad.points[i].y;
    r.points.push_back(a + u * (b - a) + v * (d - a));
    r.weights.push_back(quad.weights[i] * f.measure);
  }
  return r;
}

}  // namespace mpflux
