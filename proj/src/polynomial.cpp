#include "mpflux/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mpflux/errors.hpp"

namespace mpflux {

namespace {
double int_pow(double x, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}
}  // namespace

Poly::Poly(double constant) {
  if (constant != 0.0) terms_.push_back({0, 0, 0, constant});
}

Poly Poly::monomial(int a, int b, int c, double coeff) {
  Poly p;
  p.add_term(a, b, c, coeff);
  p.compress();
  return p;
}

Poly Poly::var(int axis) {
  return monomial(axis == 0 ? 1 : 0, axis == 1 ? 1 : 0, axis == 2 ? 1 : 0, 1.0);
}

int Poly::degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, int(t.a) + int(t.b) + int(t.c));
  return d;
}

double Poly::operator()(const Vec& p) const {
  double s = 0.0;
  for (const auto& t : terms_)
    s += t.coeff * int_pow(p.x, t.a) * int_pow(p.y, t.b) * int_pow(p.z, t.c);
  return s;
}

void Poly::add_term(int a, int b, int c, double coeff) {
  terms_.push_back({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                    static_cast<std::uint8_t>(c), coeff});
}

void Poly::compress() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& s, const Term& t) {
    return std::tie(s.a, s.b, s.c) < std::tie(t.a, t.b, t.c);
  });
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (!out.empty() && out.back().a == t.a && out.back().b == t.b && out.back().c == t.c)
      out.back().coeff += t.coeff;
    else
      out.push_back(t);
  }
  std::erase_if(out, [](const Term& t) { return t.coeff == 0.0; });
  terms_ = std::move(out);
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  r.terms_.insert(r.terms_.end(), o.terms_.begin(), o.terms_.end());
  r.compress();
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + o * -1.0; }

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (const auto& s : terms_)
    for (const auto& t : o.terms_)
      r.add_term(s.a + t.a, s.b + t.b, s.c + t.c, s.coeff * t.coeff);
  r.compress();
  return r;
}

Poly Poly::operator*(double s) const {
  Poly r = *this;
  for (auto& t : r.terms_) t.coeff *= s;
  std::erase_if(r.terms_, [](const Term& t) { return t.coeff == 0.0; });
  return r;
}

Poly Poly::derivative(int axis) const {
  Poly r;
  for (const auto& t : terms_) {
    int e[3] = {t.a, t.b, t.c};
    if (e[axis] == 0) continue;
    double c = t.coeff * e[axis];
    e[axis] -= 1;
    r.add_term(e[0], e[1], e[2], c);
  }
  r.compress();
  return r;
}

double monomial_integral(CellShape shape, int a, int b, int c) {
  switch (shape) {
    case CellShape::Triangle:
      if (c != 0) throw InvalidInput("triangle monomial has z exponent");
      return factorial(a) * factorial(b) / factorial(a + b + 2);
    case CellShape::Quadrilateral:
      if (c != 0) throw InvalidInput("quad monomial has z exponent");
      return 1.0 / ((a + 1.0) * (b + 1.0));
    case CellShape::Tetrahedron:
      return factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
    case CellShape::Hexahedron:
      return 1.0 / ((a + 1.0) * (b + 1.0) * (c + 1.0));
    case CellShape::Prism:
      return factorial(a) * factorial(b) / factorial(a + b + 2) / (c + 1.0);
  }
  return 0.0;
}

double Poly::integral(CellShape shape) const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.coeff * monomial_integral(shape, t.a, t.b, t.c);
  return s;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    double c = t.coeff;
    if (first) {
      if (c < 0) {
        os << "-";
        c = -c;
      }
    } else {
      os << (c < 0 ? " - " : " + ");
      c = std::abs(c);
    }
    first = false;
    bool has_vars = t.a + t.b + t.c > 0;
    if (!has_vars || c != 1.0) os << c;
    const char* names = "xyz";
    int exps[3] = {t.a, t.b, t.c};
    for (int k = 0; k < 3; ++k) {
      if (exps[k] == 0) continue;
      os << names[k];
      if (exps[k] > 1) os << "^" << exps[k];
    }
  }
  return os.str();
}

}  // namespace mpflux
