#pragma once

#include <utility>
#include <vector>

#include "mpflux/mesh.hpp"
#include "mpflux/refelem.hpp"

namespace mpflux {

// Global numbering of velocity DOFs (normal fluxes at facet nodes plus
// element-interior values) and discontinuous pressure DOFs, together with
// the quadrature-node clusters that give the lumped mass matrix its
// block-diagonal structure.
struct DofMap {
  SchemeOrder order;
  int n_velocity = 0;
  int n_pressure = 0;

  // per cell, per local velocity basis index: (global dof, coefficient
  // scale). The scale is facet_sign / reference normalization for facet
  // DOFs and 1 for interior DOFs; it makes normal fluxes single-valued
  // across cells.
  std::vector<std::vector<std::pair<int, double>>> cell_velocity;

  std::vector<int> pressure_offset;  // per cell; count follows from shape
  std::vector<int> pressure_cell;    // pressure dof -> owning cell

  std::vector<std::vector<int>> clusters;     // cluster -> sorted member dofs
  std::vector<int> dof_cluster;               // velocity dof -> cluster
  std::vector<int> dof_position;              // velocity dof -> index in its cluster
  std::vector<int> vertex_cluster;            // mesh vertex -> cluster id or -1
  std::vector<std::vector<int>> interior_cluster;  // cell -> interior node -> cluster

  int pressure_count(const Mesh& mesh, int cell) const;
};

DofMap build_dofmap(const Mesh& mesh, SchemeOrder order);

}  // namespace mpflux
