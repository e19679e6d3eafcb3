#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mpflux/geometry.hpp"
#include "mpflux/polynomial.hpp"

namespace mpflux {

// Lumping quadrature rule on a reference cell. Weights are normalized to
// sum to one; the physical rule is scaled by the cell volume.
struct QuadratureRule {
  std::vector<Vec> points;
  std::vector<double> weights;
  std::string exactness;  // description of the class integrated exactly
};

// One velocity basis function together with its lumping metadata.
struct VelocityBasisFn {
  VecPoly value;
  Poly div;
  int node = -1;        // quadrature node this function is associated with
  int facet = -1;       // local facet carrying its normal trace, -1 = interior
  int facet_vertex = -1;  // local vertex id of the trace node, -1 = interior
  // Value of the facet-measure-scaled normal trace at the node,
  // |e_hat| * (n_hat . Phi)(r_hat). Global DOFs divide by this so that
  // normal fluxes glue single-valued across cells of different shape.
  double normalization = 1.0;
};

struct ReferenceElement {
  CellShape shape;
  SchemeOrder order;
  QuadratureRule rule;
  std::vector<VelocityBasisFn> velocity;
  std::vector<Poly> pressure;  // basis of the local pressure space
  int interior_nodes = 0;      // rule nodes beyond the cell vertices

  int dim() const { return dim_of(shape); }
  int num_nodes() const { return static_cast<int>(rule.points.size()); }
  int velocity_count() const { return static_cast<int>(velocity.size()); }
  int pressure_count() const { return static_cast<int>(pressure.size()); }
};

// Catalog lookup. Definitions are immutable and cached; safe to share
// across threads. Throws UndefinedCombination for FirstOrder on 3D shapes.
const ReferenceElement& reference_element(CellShape shape, SchemeOrder order);

Vec eval_velocity(const ReferenceElement& def, int i, const Vec& xhat);
double eval_divergence(const ReferenceElement& def, int i, const Vec& xhat);

// Inverse of the node association: node index -> basis indices.
std::vector<std::vector<int>> node_blocks(const ReferenceElement& def);

// Whether the lumping rule integrates f exactly, compared against the exact
// reference-cell integral at 1e-12 relative tolerance.
bool verify_exactness(const ReferenceElement& def, const Poly& f);

// Monomials spanning the rule's stated exactness class.
std::vector<Poly> exactness_class(CellShape shape, SchemeOrder order);

// Catalog description used by the dump-element command.
std::string describe_element(const ReferenceElement& def);

}  // namespace mpflux
