#include "mpflux/refelem.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "mpflux/errors.hpp"

namespace mpflux {

namespace {

using P = Poly;

P X() { return P::var(0); }
P Y() { return P::var(1); }
P Z() { return P::var(2); }
P C(double v) { return P(v); }

VecPoly vp(P a, P b) { return {std::move(a), std::move(b), P{}}; }
VecPoly vp(P a, P b, P c) { return {std::move(a), std::move(b), std::move(c)}; }

void finish(VelocityBasisFn& fn) { fn.div = fn.value.divergence(); }

VelocityBasisFn facet_fn(VecPoly v, int node, int facet, int vertex) {
  VelocityBasisFn fn;
  fn.value = std::move(v);
  fn.node = node;
  fn.facet = facet;
  fn.facet_vertex = vertex;
  finish(fn);
  return fn;
}

VelocityBasisFn interior_fn(VecPoly v, int node) {
  VelocityBasisFn fn;
  fn.value = std::move(v);
  fn.node = node;
  finish(fn);
  return fn;
}

// |e_hat| * (n_hat . Phi)(vertex) for facet functions; interior functions
// keep normalization 1.
void compute_normalizations(ReferenceElement& def) {
  const RefCell& cell = ref_cell(def.shape);
  for (auto& fn : def.velocity) {
    if (fn.facet < 0) continue;
    const auto& f = cell.facets[fn.facet];
    Vec value = fn.value(cell.vertices[fn.facet_vertex]);
    fn.normalization = f.measure * dot(f.normal, value);
    if (fn.normalization <= 0)
      throw Error("reference basis normalization must be positive");
  }
}

// --- second order elements, bases transcribed from the printed tables ----

ReferenceElement make_triangle2() {
  ReferenceElement def;
  def.shape = CellShape::Triangle;
  def.order = SchemeOrder::SecondOrder;
  def.rule.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1.0 / 3.0, 1.0 / 3.0, 0}};
  def.rule.weights = {1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0, 3.0 / 4.0};
  def.rule.exactness = "P2";
  def.interior_nodes = 1;
  const P x = X(), y = Y();

  auto phi1 = vp(2 * x * x + x * y - x, y * y + 2 * x * y - y);
  auto phi2 = vp(x * x + 2 * x * y - x, 2 * y * y + x * y - y);
  auto phi3 = vp(-1 * x * x + x * y + x - y, y * y - x * y);
  auto phi4 = vp(-2 * x * x - x * y + 3 * x + y - C(1), -1 * y * y - 2 * x * y + y);
  auto phi5 = vp(-1 * x * x - 2 * x * y + x, -2 * y * y - x * y + x + 3 * y - C(1));
  auto phi6 = vp(x * x - x * y, -1 * y * y + x * y - x + y);
  auto phi7 = vp(x * y, y * y - y);
  auto phi8 = vp(x * x - x, x * y);

  def.velocity = {
      facet_fn(phi1, 1, 1, 1), facet_fn(phi2, 2, 1, 2), facet_fn(phi3, 2, 2, 2),
      facet_fn(phi4, 0, 2, 0), facet_fn(phi5, 0, 0, 0), facet_fn(phi6, 1, 0, 1),
      interior_fn(phi7, 3),    interior_fn(phi8, 3),
  };
  def.pressure = {C(1), x, y};
  return def;
}

ReferenceElement make_quad2() {
  ReferenceElement def;
  def.shape = CellShape::Quadrilateral;
  def.order = SchemeOrder::SecondOrder;
  def.rule.points = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0.5, 0.5, 0}};
  def.rule.weights = {1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0, 1.0 / 12.0, 2.0 / 3.0};
  def.rule.exactness = "P3";
  def.interior_nodes = 1;
  const P x = X(), y = Y();

  auto phi1 = vp(2 * x * x - 2 * x * y, P{});
  auto phi2 = vp(2 * x * x + 2 * x * y - 2 * x, P{});
  auto phi3 = vp(P{}, 2 * y * y + 2 * x * y - 2 * y);
  auto phi4 = vp(P{}, 2 * y * y - 2 * x * y);
  auto phi5 = vp(-2 * x * x + 2 * x * y + 2 * x - 2 * y, P{});
  auto phi6 = vp(-2 * x * x - 2 * x * y + 4 * x + 2 * y - C(2), P{});
  auto phi7 = vp(P{}, -2 * y * y - 2 * x * y + 2 * x + 4 * y - C(2));
  auto phi8 = vp(P{}, -2 * y * y + 2 * x * y - 2 * x + 2 * y);
  auto phi9 = vp(x * x - x, P{});
  auto phi10 = vp(P{}, y * y - y);

  def.velocity = {
      facet_fn(phi1, 1, 1, 1), facet_fn(phi2, 2, 1, 2), facet_fn(phi3, 2, 2, 2),
      facet_fn(phi4, 3, 2, 3), facet_fn(phi5, 3, 3, 3), facet_fn(phi6, 0, 3, 0),
      facet_fn(phi7, 0, 0, 0), facet_fn(phi8, 1, 0, 1), interior_fn(phi9, 4),
      interior_fn(phi10, 4),
  };
  def.pressure = {C(1), x, y};
  return def;
}

ReferenceElement make_tet2() {
  ReferenceElement def;
  def.shape = CellShape::Tetrahedron;
  def.order = SchemeOrder::SecondOrder;
  def.rule.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.25, 0.25, 0.25}};
  def.rule.weights = {1.0 / 20.0, 1.0 / 20.0, 1.0 / 20.0, 1.0 / 20.0, 4.0 / 5.0};
  def.rule.exactness = "P2";
  def.interior_nodes = 1;
  const P x = X(), y = Y(), z = Z();

  auto b13 = vp(x * x - x, x * y, x * z);
  auto b14 = vp(y * x, y * y - y, y * z);
  auto b15 = vp(z * x, z * y, z * z - z);

  auto phi1 = vp(x, P{}, P{}) + b13 * 2 + b14 + b15;
  auto phi2 = vp(P{}, y, P{}) + b13 + b14 * 2 + b15;
  auto phi3 = vp(P{}, P{}, z) + b13 + b14 + b15 * 2;
  auto phi4 = vp(-1 * y, y, P{}) - b13 + b14;
  auto phi5 = vp(-1 * z, P{}, z) - b13 + b15;
  auto phi6 = vp(x + y + z - C(1), P{}, P{}) - b13 * 2 - b14 - b15;
  auto phi7 = vp(P{}, -1 * z, z) - b14 + b15;
  auto phi8 = vp(P{}, x + y + z - C(1), P{}) - b13 - b14 * 2 - b15;
  auto phi9 = vp(x, -1 * x, P{}) + b13 - b14;
  auto phi10 = vp(P{}, P{}, x + y + z - C(1)) - b13 - b14 - b15 * 2;
  auto phi11 = vp(x, P{}, -1 * x) + b13 - b15;
  auto phi12 = vp(P{}, y, -1 * y) + b14 - b15;

  def.velocity = {
      facet_fn(phi1, 1, 3, 1),  facet_fn(phi2, 2, 3, 2),  facet_fn(phi3, 3, 3, 3),
      facet_fn(phi4, 2, 2, 2),  facet_fn(phi5, 3, 2, 3),  facet_fn(phi6, 0, 2, 0),
      facet_fn(phi7, 3, 1, 3),  facet_fn(phi8, 0, 1, 0),  facet_fn(phi9, 1, 1, 1),
      facet_fn(phi10, 0, 0, 0), facet_fn(phi11, 1, 0, 1), facet_fn(phi12, 2, 0, 2),
      interior_fn(b13, 4),      interior_fn(b14, 4),      interior_fn(b15, 4),
  };
  def.pressure = {C(1), x, y, z};
  return def;
}

ReferenceElement make_hex2() {
  ReferenceElement def;
  def.shape = CellShape::Hexahedron;
  def.order = SchemeOrder::SecondOrder;
  const RefCell& cell = ref_cell(CellShape::Hexahedron);
  for (const auto& v : cell.vertices) def.rule.points.push_back(v);
  def.rule.points.push_back({0.5, 0.5, 0.5});
  def.rule.weights.assign(8, 1.0 / 24.0);
  def.rule.weights.push_back(2.0 / 3.0);
  def.rule.exactness = "P3 + span{x^2yz, xy^2z, xyz^3}";
  def.interior_nodes = 1;
  const P x = X(), y = Y(), z = Z();

  // Vertex functions are a(.,.,.) + w(w-1)/2 in one component, where the
  // arguments of a(x,y,z) = xyz are plain or flipped coordinates. The bump
  // makes the function vanish at the barycenter.
  auto hump = [&](int axis) {  // w(w-1)/2
    P w = P::var(axis);
    return w * w * 0.5 - w * 0.5;
  };
  auto afun = [&](bool flip_x, bool flip_y, bool flip_z) {
    P fx = flip_x ? C(1) - x : x;
    P fy = flip_y ? C(1) - y : y;
    P fz = flip_z ? C(1) - z : z;
    return fx * fy * fz;
  };

  struct Row {
    bool fx, fy, fz;
    int comp;
    double sign;
  };
  const Row rows[24] = {
      {false, true, false, 0, 1},  {false, false, false, 0, 1},
      {false, false, true, 0, 1},  {false, true, true, 0, 1},
      {true, true, false, 0, -1},  {true, false, false, 0, -1},
      {true, false, true, 0, -1},  {true, true, true, 0, -1},
      {true, true, false, 1, -1},  {false, true, false, 1, -1},
      {false, true, true, 1, -1},  {true, true, true, 1, -1},
      {true, false, false, 1, 1},  {false, false, false, 1, 1},
      {false, false, true, 1, 1},  {true, false, true, 1, 1},
      {true, true, true, 2, -1},   {false, true, true, 2, -1},
      {false, false, true, 2, -1}, {true, false, true, 2, -1},
      {true, true, false, 2, 1},   {false, true, false, 2, 1},
      {false, false, false, 2, 1}, {true, false, false, 2, 1},
  };
  // face ids in ref_cell order: z0, z1, y0, y1, x0, x1
  auto face_of = [](const Row& r) {
    if (r.comp == 0) return r.fx ? 4 : 5;
    if (r.comp == 1) return r.fy ? 2 : 3;
    return r.fz ? 0 : 1;
  };

  for (const auto& r : rows) {
    P scalar = (afun(r.fx, r.fy, r.fz) + hump(r.comp)) * r.sign;
    VecPoly v;
    v.comp[r.comp] = scalar;
    int vert = (r.fx ? 0 : 1) + 2 * (r.fy ? 0 : 1) + 4 * (r.fz ? 0 : 1);
    def.velocity.push_back(facet_fn(v, vert, face_of(r), vert));
  }
  for (int axis = 0; axis < 3; ++axis) {
    VecPoly v;
    v.comp[axis] = hump(axis) * 2.0;  // w^2 - w
    def.velocity.push_back(interior_fn(v, 8));
  }
  def.pressure = {C(1), x, y, z, x * y, x * z, y * z};  // div of the local space
  return def;
}

ReferenceElement make_prism2() {
  ReferenceElement def;
  def.shape = CellShape::Prism;
  def.order = SchemeOrder::SecondOrder;
  const RefCell& cell = ref_cell(CellShape::Prism);
  for (const auto& v : cell.vertices) def.rule.points.push_back(v);
  const double t = 1.0 / 3.0;
  def.rule.points.push_back({t, t, t});
  def.rule.points.push_back({t, t, 2 * t});
  def.rule.weights.assign(6, 1.0 / 24.0);
  def.rule.weights.push_back(3.0 / 8.0);
  def.rule.weights.push_back(3.0 / 8.0);
  def.rule.exactness = "span{1, x, y, z, xz, yz}";
  def.interior_nodes = 2;
  const P x = X(), y = Y(), z = Z();
  const P one = C(1);

  auto psi1 = vp(x * z, P{}, P{});
  auto psi2 = vp(P{}, y * z, P{});
  auto psi3 = vp(-1 * y * z, y * z, P{});
  auto psi4 = vp((x + y - one) * z, P{}, P{});
  auto psi5 = vp(P{}, (x + y - one) * z, P{});
  auto psi6 = vp(x * z, -1 * x * z, P{});
  auto psi7 = vp(x * (one - z), P{}, P{});
  auto psi8 = vp(P{}, y * (one - z), P{});
  auto psi9 = vp(-1 * y * (one - z), y * (one - z), P{});
  auto psi10 = vp((x + y - one) * (one - z), P{}, P{});
  auto psi11 = vp(P{}, (x + y - one) * (one - z), P{});
  auto psi12 = vp(x * (one - z), -1 * x * (one - z), P{});
  auto psi13 = vp(P{}, P{}, (one - x - y) * z);
  auto psi14 = vp(P{}, P{}, x * z);
  auto psi15 = vp(P{}, P{}, y * z);
  auto psi16 = vp(P{}, P{}, -1 * (one - x - y) * (one - z));
  auto psi17 = vp(P{}, P{}, -1 * x * (one - z));
  auto psi18 = vp(P{}, P{}, -1 * y * (one - z));

  // Interior enrichments as printed.
  auto p19 = vp(P{}, P{}, x * z * z * (one - z)) * 4.5;
  auto p20 = vp(P{}, P{}, x * z * (one - z) * (one - z)) * 4.5;
  auto p21 = vp(x * y * z * (one - x - y), P{}, P{}) * 9.0;
  auto p22 = vp(x * y * (one - z) * (one - x - y), P{}, P{}) * 9.0;
  auto p23 = vp(P{}, x * y * z * (one - x - y), P{}) * 9.0;
  auto p24 = vp(P{}, x * y * (one - z) * (one - x - y), P{}) * 9.0;

  // Vertex functions: combinations that vanish at both interior nodes.
  auto phi1 = psi1 - p21;
  auto phi2 = psi2 - p23;
  auto phi3 = psi3 + p21 - p23;
  auto phi4 = psi4 + p21;
  auto phi5 = psi5 + p23;
  auto phi6 = psi6 - p21 + p23;
  auto phi7 = psi7 - p22;
  auto phi8 = psi8 - p24;
  auto phi9 = psi9 + p22 - p24;
  auto phi10 = psi10 + p22;
  auto phi11 = psi11 + p24;
  auto phi12 = psi12 - p22 + p24;
  auto phi13 = psi13 - p19;
  auto phi14 = psi14 - p19;
  auto phi15 = psi15 - p19;
  auto phi16 = psi16 + p20;
  auto phi17 = psi17 + p20;
  auto phi18 = psi18 + p20;

  // The printed interior sextet is nonzero at both interior quadrature
  // points; the pairwise combinations below are nodal: one z-, x-, and
  // y-type function per interior node, zero at the other node.
  auto phi19 = p20 * 2.0 - p19;  // node (1/3,1/3,1/3)
  auto phi20 = p19 * 2.0 - p20;  // node (1/3,1/3,2/3)
  auto phi21 = p22 * 2.0 - p21;
  auto phi22 = p21 * 2.0 - p22;
  auto phi23 = p24 * 2.0 - p23;
  auto phi24 = p23 * 2.0 - p24;

  // facets: z0, z1, y0, slant, x0
  def.velocity = {
      facet_fn(phi1, 4, 3, 4),  facet_fn(phi2, 5, 3, 5),  facet_fn(phi3, 5, 4, 5),
      facet_fn(phi4, 3, 4, 3),  facet_fn(phi5, 3, 2, 3),  facet_fn(phi6, 4, 2, 4),
      facet_fn(phi7, 1, 3, 1),  facet_fn(phi8, 2, 3, 2),  facet_fn(phi9, 2, 4, 2),
      facet_fn(phi10, 0, 4, 0), facet_fn(phi11, 0, 2, 0), facet_fn(phi12, 1, 2, 1),
      facet_fn(phi13, 3, 1, 3), facet_fn(phi14, 4, 1, 4), facet_fn(phi15, 5, 1, 5),
      facet_fn(phi16, 0, 0, 0), facet_fn(phi17, 1, 0, 1), facet_fn(phi18, 2, 0, 2),
      interior_fn(phi19, 6),    interior_fn(phi20, 7),    interior_fn(phi21, 6),
      interior_fn(phi22, 7),    interior_fn(phi23, 6),    interior_fn(phi24, 7),
  };

  // Frozen basis of div V_hat (P1 plus the enrichment divergences).
  def.pressure = {
      one,
      x,
      y,
      z,
      x * z,
      x * z * z,
      2 * x * y + y * y,
      (y - 2 * x * y - y * y) * z,
      x * x + 2 * x * y,
      (x * x + 2 * x * y) * z,
  };
  return def;
}

// --- first order elements, constructed from DOF functionals --------------
//
// Triangle: BDM1 = P1^2 with the vertex rule.
// Quadrilateral: the nodal variant with bilinear components. The classical
// curl-enriched BDM1 space is inconsistent under vertex lumping (the rule
// does not integrate the x^2 components, and the resulting defect fails to
// telescope across boundary vertices, costing half an order in the
// velocity); with components in span{1,x,y,xy} the lumped product is exact
// on P0 x V_h and the pressure space div V = span{1,x,y} keeps Q = div V.

ReferenceElement make_first_order(CellShape shape) {
  ReferenceElement def;
  def.shape = shape;
  def.order = SchemeOrder::FirstOrder;
  const RefCell& cell = ref_cell(shape);
  const int nv = static_cast<int>(cell.vertices.size());
  for (const auto& v : cell.vertices) def.rule.points.push_back(v);
  def.rule.weights.assign(nv, 1.0 / nv);
  def.rule.exactness = shape == CellShape::Triangle ? "P1" : "span{1, x, y, xy}";
  def.interior_nodes = 0;
  const P x = X(), y = Y();

  std::vector<P> comp_monos = {C(1), x, y};
  if (shape == CellShape::Quadrilateral) comp_monos.push_back(x * y);
  std::vector<VecPoly> monomials;
  for (int comp = 0; comp < 2; ++comp)
    for (const P& m : comp_monos) {
      VecPoly v;
      v.comp[comp] = m;
      monomials.push_back(v);
    }
  const int n = static_cast<int>(monomials.size());

  // DOF functionals: facet-measure-scaled normal component at each edge
  // endpoint.
  struct Dof {
    int facet, vertex;
  };
  std::vector<Dof> dofs;
  for (int f = 0; f < static_cast<int>(cell.facets.size()); ++f)
    for (int v : cell.facets[f].vertices) dofs.push_back({f, v});

  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& f = cell.facets[dofs[i].facet];
      Vec val = monomials[j](cell.vertices[dofs[i].vertex]);
      A(i, j) = f.measure * dot(f.normal, val);
    }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double cond = svd.singularValues()(0) / svd.singularValues()(n - 1);
  if (!(cond < 1e3))
    throw Error("first order DOF matrix is ill conditioned");
  Eigen::MatrixXd Ainv = A.inverse();

  for (int i = 0; i < n; ++i) {
    VecPoly v;
    for (int j = 0; j < n; ++j) {
      v.comp[0] = v.comp[0] + monomials[j].comp[0] * Ainv(j, i);
      v.comp[1] = v.comp[1] + monomials[j].comp[1] * Ainv(j, i);
    }
    def.velocity.push_back(facet_fn(v, dofs[i].vertex, dofs[i].facet, dofs[i].vertex));
  }
  def.pressure = {C(1)};
  if (shape == CellShape::Quadrilateral) {
    def.pressure.push_back(x);  // div V = span{1, x, y}
    def.pressure.push_back(y);
  }
  return def;
}

ReferenceElement build(CellShape shape, SchemeOrder order) {
  ReferenceElement def;
  if (order == SchemeOrder::FirstOrder) {
    if (dim_of(shape) == 3)
      throw UndefinedCombination("first order scheme is defined for 2D shapes only");
    def = make_first_order(shape);
  } else {
    switch (shape) {
      case CellShape::Triangle: def = make_triangle2(); break;
      case CellShape::Quadrilateral: def = make_quad2(); break;
      case CellShape::Tetrahedron: def = make_tet2(); break;
      case CellShape::Hexahedron: def = make_hex2(); break;
      case CellShape::Prism: def = make_prism2(); break;
    }
  }
  compute_normalizations(def);
  return def;
}

}  // namespace

const ReferenceElement& reference_element(CellShape shape, SchemeOrder order) {
  static std::map<std::pair<int, int>, ReferenceElement> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(static_cast<int>(shape), static_cast<int>(order));
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build(shape, order)).first;
  return it->second;
}

Vec eval_velocity(const ReferenceElement& def, int i, const Vec& xhat) {
  if (i < 0 || i >= def.velocity_count())
    throw IndexOutOfRange("velocity basis index out of range");
  return def.velocity[i].value(xhat);
}

double eval_divergence(const ReferenceElement& def, int i, const Vec& xhat) {
  if (i < 0 || i >= def.velocity_count())
    throw IndexOutOfRange("velocity basis index out of range");
  return def.velocity[i].div(xhat);
}

std::vector<std::vector<int>> node_blocks(const ReferenceElement& def) {
  std::vector<std::vector<int>> blocks(def.num_nodes());
  for (int i = 0; i < def.velocity_count(); ++i)
    blocks[def.velocity[i].node].push_back(i);
  return blocks;
}

bool verify_exactness(const ReferenceElement& def, const Poly& f) {
  const RefCell& cell = ref_cell(def.shape);
  double quad = 0.0;
  for (std::size_t n = 0; n < def.rule.points.size(); ++n)
    quad += def.rule.weights[n] * f(def.rule.points[n]);
  double exact = f.integral(def.shape) / cell.volume;
  // magnitude of the integrand: reference cells lie in the positive orthant,
  // so monomial integrals bound each term
  double scale = 0.0;
  for (const auto& t : f.terms())
    scale += std::abs(t.coeff) * monomial_integral(def.shape, t.a, t.b, t.c) / cell.volume;
  return std::abs(quad - exact) <= 1e-12 * std::max(scale, 1e-30);
}

std::vector<Poly> exactness_class(CellShape shape, SchemeOrder order) {
  std::vector<Poly> monos;
  auto add_total_degree = [&](int dim, int max_deg) {
    for (int a = 0; a <= max_deg; ++a)
      for (int b = 0; a + b <= max_deg; ++b) {
        if (dim == 2) {
          monos.push_back(Poly::monomial(a, b, 0));
          continue;
        }
        for (int c = 0; a + b + c <= max_deg; ++c) monos.push_back(Poly::monomial(a, b, c));
      }
  };
  if (order == SchemeOrder::FirstOrder) {
    if (shape == CellShape::Triangle) {
      add_total_degree(2, 1);
    } else {
      monos = {Poly(1.0), Poly::var(0), Poly::var(1), Poly::var(0) * Poly::var(1)};
    }
    return monos;
  }
  switch (shape) {
    case CellShape::Triangle: add_total_degree(2, 2); break;
    case CellShape::Quadrilateral: add_total_degree(2, 3); break;
    case CellShape::Tetrahedron: add_total_degree(3, 2); break;
    case CellShape::Hexahedron:
      add_total_degree(3, 3);
      monos.push_back(Poly::monomial(2, 1, 1));
      monos.push_back(Poly::monomial(1, 2, 1));
      monos.push_back(Poly::monomial(1, 1, 3));
      break;
    case CellShape::Prism:
      monos = {Poly(1.0),          Poly::var(0),        Poly::var(1),
               Poly::var(2),       Poly::monomial(1, 0, 1), Poly::monomial(0, 1, 1)};
      break;
  }
  return monos;
}

std::string describe_element(const ReferenceElement& def) {
  std::ostringstream os;
  os << "shape " << shape_tag(def.shape) << ", order "
     << (def.order == SchemeOrder::FirstOrder ? 1 : 2) << ", dim " << def.dim() << "\n";
  os << "quadrature (" << def.num_nodes() << " nodes, exact on " << def.rule.exactness
     << "):\n";
  for (int n = 0; n < def.num_nodes(); ++n) {
    const Vec& p = def.rule.points[n];
    os << "  node " << n << ": (" << p.x << ", " << p.y;
    if (def.dim() == 3) os << ", " << p.z;
    os << ")  w = " << def.rule.weights[n] << "\n";
  }
  os << "velocity basis (" << def.velocity_count() << " functions):\n";
  for (int i = 0; i < def.velocity_count(); ++i) {
    const auto& fn = def.velocity[i];
    os << "  phi_" << i + 1 << " @node " << fn.node;
    if (fn.facet >= 0)
      os << " facet " << fn.facet << " vertex " << fn.facet_vertex << " scale "
         << fn.normalization;
    else
      os << " interior";
    os << "\n    value = (";
    for (int c = 0; c < def.dim(); ++c)
      os << (c ? ", " : "") << fn.value.comp[c].to_string();
    os << ")\n    div   = " << fn.div.to_string() << "\n";
  }
  os << "pressure basis (" << def.pressure_count() << " functions):";
  for (const auto& q : def.pressure) os << " [" << q.to_string() << "]";
  os << "\n";
  return os.str();
}

}  // namespace mpflux
