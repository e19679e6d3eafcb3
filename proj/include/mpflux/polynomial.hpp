#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mpflux/geometry.hpp"

namespace mpflux {

// Multivariate polynomial as an explicit coefficient table over monomials
// x^a y^b z^c. All element bases are transcribed into this form, so basis
// evaluation, differentiation and reference-cell integration are exact
// polynomial operations.
class Poly {
public:
  struct Term {
    std::uint8_t a = 0, b = 0, c = 0;
    double coeff = 0.0;
  };

  Poly() = default;
  explicit Poly(double constant);
  static Poly monomial(int a, int b, int c, double coeff = 1.0);
  // Variables named "x","y","z" with exponent 1, e.g. Poly::var(0) == x.
  static Poly var(int axis);

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int degree() const;

  double operator()(const Vec& p) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(double s) const;
  Poly operator-() const { return *this * -1.0; }

  Poly derivative(int axis) const;

  // Exact integral over the given reference cell.
  double integral(CellShape shape) const;

  std::string to_string() const;

private:
  void add_term(int a, int b, int c, double coeff);
  void compress();
  std::vector<Term> terms_;  // sorted by (a,b,c), no zero coefficients
};

inline Poly operator*(double s, const Poly& p) { return p * s; }

// Exact integral of x^a y^b z^c over a reference cell.
double monomial_integral(CellShape shape, int a, int b, int c);

// d-vector valued polynomial; the z slot is the zero polynomial in 2D.
struct VecPoly {
  std::array<Poly, 3> comp;

  Vec operator()(const Vec& p) const {
    return {comp[0](p), comp[1](p), comp[2](p)};
  }
  Poly divergence() const {
    return comp[0].derivative(0) + comp[1].derivative(1) + comp[2].derivative(2);
  }
  VecPoly operator+(const VecPoly& o) const {
    return {comp[0] + o.comp[0], comp[1] + o.comp[1], comp[2] + o.comp[2]};
  }
  VecPoly operator-(const VecPoly& o) const {
    return {comp[0] - o.comp[0], comp[1] - o.comp[1], comp[2] - o.comp[2]};
  }
  VecPoly operator*(double s) const { return {comp[0] * s, comp[1] * s, comp[2] * s}; }
};

}  // namespace mpflux
