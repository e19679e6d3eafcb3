#include "mpflux/dofmap.hpp"

#include <algorithm>
#include <map>

#include "mpflux/errors.hpp"

namespace mpflux {

int DofMap::pressure_count(const Mesh& mesh, int cell) const {
  return reference_element(mesh.cells[cell].shape, order).pressure_count();
}

DofMap build_dofmap(const Mesh& mesh, SchemeOrder order) {
  DofMap dm;
  dm.order = order;

  // facet-node DOFs, numbered facet by facet; positions within a facet
  // follow the ascending global vertex ids stored in MeshFacet
  std::map<std::pair<int, int>, int> facet_dof;  // (facet, global vertex) -> dof
  int next = 0;
  for (int f = 0; f < mesh.num_facets(); ++f)
    for (int v : mesh.facets[f].vertices) facet_dof[{f, v}] = next++;

  // interior DOFs, cell by cell
  std::vector<int> interior_base(mesh.num_cells(), -1);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& def = reference_element(mesh.cells[c].shape, order);
    interior_base[c] = next;
    next += def.interior_nodes * def.dim();
  }
  dm.n_velocity = next;

  // clusters: one per mesh vertex, one per element interior node
  dm.vertex_cluster.assign(mesh.num_vertices(), -1);
  for (const auto& entry : facet_dof) {
    int v = entry.first.second;
    if (dm.vertex_cluster[v] < 0) {
      dm.vertex_cluster[v] = static_cast<int>(dm.clusters.size());
      dm.clusters.emplace_back();
    }
    dm.clusters[dm.vertex_cluster[v]].push_back(entry.second);
  }
  dm.interior_cluster.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& def = reference_element(mesh.cells[c].shape, order);
    for (int k = 0; k < def.interior_nodes; ++k) {
      dm.interior_cluster[c].push_back(static_cast<int>(dm.clusters.size()));
      std::vector<int> members;
      for (int comp = 0; comp < def.dim(); ++comp)
        members.push_back(interior_base[c] + k * def.dim() + comp);
      dm.clusters.push_back(std::move(members));
    }
  }
  dm.dof_cluster.assign(dm.n_velocity, -1);
  dm.dof_position.assign(dm.n_velocity, -1);
  for (std::size_t cl = 0; cl < dm.clusters.size(); ++cl) {
    std::sort(dm.clusters[cl].begin(), dm.clusters[cl].end());
    for (std::size_t pos = 0; pos < dm.clusters[cl].size(); ++pos) {
      dm.dof_cluster[dm.clusters[cl][pos]] = static_cast<int>(cl);
      dm.dof_position[dm.clusters[cl][pos]] = static_cast<int>(pos);
    }
  }

  // per-cell local-to-global with gluing scales
  dm.cell_velocity.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& def = reference_element(mesh.cells[c].shape, order);
    const auto& cell = mesh.cells[c];
    std::vector<int> interior_seen(def.num_nodes(), 0);
    const int nverts = static_cast<int>(ref_cell(cell.shape).vertices.size());
    for (int i = 0; i < def.velocity_count(); ++i) {
      const auto& fn = def.velocity[i];
      if (fn.facet >= 0) {
        int facet = mesh.cell_facets[c][fn.facet];
        int gvert = cell.vertices[fn.facet_vertex];
        double sign = mesh.facet_sign[c][fn.facet];
        dm.cell_velocity[c].push_back(
            {facet_dof.at({facet, gvert}), sign / fn.normalization});
      } else {
        int k = fn.node - nverts;  // interior node rank
        int slot = interior_seen[fn.node]++;
        dm.cell_velocity[c].push_back({interior_base[c] + k * def.dim() + slot, 1.0});
      }
    }
  }

  // pressure numbering
  dm.pressure_offset.resize(mesh.num_cells());
  int poff = 0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    dm.pressure_offset[c] = poff;
    poff += reference_element(mesh.cells[c].shape, order).pressure_count();
  }
  dm.n_pressure = poff;
  dm.pressure_cell.resize(poff);
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int q = dm.pressure_offset[c];
         q < (c + 1 < mesh.num_cells() ? dm.pressure_offset[c + 1] : poff); ++q)
      dm.pressure_cell[q] = c;

  return dm;
}

}  // namespace mpflux
