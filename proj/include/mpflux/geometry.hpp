#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mpflux {

// Small fixed-size point/vector type. 2D quantities keep z = 0 so that the
// same storage works for hybrid 2D/3D code paths.
struct Vec {
  double x = 0.0, y = 0.0, z = 0.0;

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  Vec operator+(const Vec& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec operator-(const Vec& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec& operator+=(const Vec& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }
inline double dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec& v) { return std::sqrt(dot(v, v)); }
inline Vec cross(const Vec& a, const Vec& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// Dense d x d matrix, d in {2, 3}. Stored 3x3; the unused block of a 2D
// matrix is the identity so that det/inverse remain valid.
struct Mat {
  std::array<std::array<double, 3>, 3> a{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  int d = 3;

  static Mat zero(int dim) {
    Mat m;
    m.d = dim;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m.a[i][j] = (dim == 2 && i == 2 && j == 2) ? 1.0 : 0.0;
    return m;
  }
  static Mat identity(int dim) {
    Mat m;
    m.d = dim;
    return m;
  }

  double operator()(int i, int j) const { return a[i][j]; }
  double& operator()(int i, int j) { return a[i][j]; }

  Vec operator*(const Vec& v) const {
    Vec r;
    for (int i = 0; i < 3; ++i) r[i] = a[i][0] * v.x + a[i][1] * v.y + a[i][2] * v.z;
    return r;
  }

  Mat transpose() const {
    Mat m = *this;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m.a[i][j] = a[j][i];
    return m;
  }

  double det() const {
    if (d == 2) return a[0][0] * a[1][1] - a[0][1] * a[1][0];
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  }

  // Closed-form inverse; caller checks det() != 0.
  Mat inverse() const {
    Mat m = zero(d);
    const double dt = det();
    if (d == 2) {
      m.a[0][0] = a[1][1] / dt;
      m.a[0][1] = -a[0][1] / dt;
      m.a[1][0] = -a[1][0] / dt;
      m.a[1][1] = a[0][0] / dt;
      return m;
    }
    m.a[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / dt;
    m.a[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / dt;
    m.a[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / dt;
    m.a[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / dt;
    m.a[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / dt;
    m.a[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / dt;
    m.a[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / dt;
    m.a[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / dt;
    m.a[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / dt;
    return m;
  }

  // Frobenius norm restricted to the active d x d block.
  double norm() const {
    double s = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) s += a[i][j] * a[i][j];
    return std::sqrt(s);
  }
};

inline Mat operator*(const Mat& A, const Mat& B) {
  Mat m = Mat::zero(A.d);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += A.a[i][k] * B.a[k][j];
      m.a[i][j] = s;
    }
  return m;
}

enum class CellShape : std::uint8_t { Triangle, Quadrilateral, Tetrahedron, Hexahedron, Prism };

inline int dim_of(CellShape s) {
  return (s == CellShape::Triangle || s == CellShape::Quadrilateral) ? 2 : 3;
}

enum class SchemeOrder : std::uint8_t { FirstOrder = 1, SecondOrder = 2 };

// Static description of one reference cell: vertex coordinates and facet
// connectivity with outward unit normals and facet measures.
struct RefCell {
  CellShape shape;
  int dim;
  double volume;
  std::vector<Vec> vertices;
  struct Facet {
    std::vector<int> vertices;  // local vertex ids, cyclic order for quads
    Vec normal;                 // outward unit normal
    double measure;             // length (2D) or area (3D)
  };
  std::vector<Facet> facets;
};

const RefCell& ref_cell(CellShape shape);

const char* shape_tag(CellShape s);                    // "tri", "quad", ...
bool shape_from_tag(const std::string& tag, CellShape& out);

}  // namespace mpflux
