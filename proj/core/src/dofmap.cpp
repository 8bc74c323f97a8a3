#include "curvefem/dofmap.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/LU>

namespace curvefem {

AffineMap affine_map(const Mesh& mesh, int triangle) {
  const auto& tri = mesh.triangle(triangle);
  AffineMap map;
  map.origin = mesh.vertex(tri[0]);
  map.jacobian.col(0) = mesh.vertex(tri[1]) - map.origin;
  map.jacobian.col(1) = mesh.vertex(tri[2]) - map.origin;
  map.det = map.jacobian.determinant();
  map.inv_transpose = map.jacobian.inverse().transpose();
  return map;
}

DofMap::DofMap(std::shared_ptr<const Mesh> mesh, int degree, DomainGeometry geometry)
    : mesh_(std::move(mesh)),
      geometry_(std::move(geometry)),
      basis_(degree),
      decomposition_(classify_boundary(*mesh_, geometry_)) {
  const Mesh& m = *mesh_;
  const int k = degree;
  const int nv = m.num_vertices();
  const int nt = m.num_triangles();
  const int nl = basis_.size();
  const int per_edge = k - 1;
  const int per_cell = (k - 1) * (k - 2) / 2;

  // global edge numbering in order of first appearance
  std::unordered_map<std::uint64_t, int> edge_id;
  std::vector<std::array<int, 3>> tri_edges(nt);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = m.triangle(t);
    for (int e = 0; e < 3; ++e) {
      const int a = std::min(tri[e], tri[(e + 1) % 3]);
      const int b = std::max(tri[e], tri[(e + 1) % 3]);
      const auto key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
      auto [it, inserted] = edge_id.try_emplace(key, static_cast<int>(edges_.size()));
      if (inserted) edges_.push_back({a, b});
      tri_edges[t][e] = it->second;
    }
  }
  const int ne = num_edges();
  n_dofs_ = nv + per_edge * ne + per_cell * nt;

  cell_dofs_.resize(static_cast<std::size_t>(nt) * nl);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = m.triangle(t);
    int* dofs = cell_dofs_.data() + static_cast<std::size_t>(t) * nl;
    for (int v = 0; v < 3; ++v) dofs[v] = tri[v];
    for (int e = 0; e < 3; ++e) {
      const bool forward = tri[e] < tri[(e + 1) % 3];
      const int base = nv + per_edge * tri_edges[t][e];
      for (int j = 1; j < k; ++j) {
        dofs[basis_.edge_node(e, j)] = base + (forward ? j : k - j) - 1;
      }
    }
    const int first = basis_.first_interior_node();
    for (int i = 0; i < per_cell; ++i) dofs[first + i] = nv + per_edge * ne + per_cell * t + i;
  }

  support_points_.resize(n_dofs_);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = m.triangle(t);
    const auto dofs = cell_dofs(t);
    for (int i = 0; i < nl; ++i) {
      const auto& b = basis_.nodes()[i];
      support_points_[dofs[i]] = b[0] * m.vertex(tri[0]) + b[1] * m.vertex(tri[1]) + b[2] * m.vertex(tri[2]);
    }
  }
  // vertex positions exactly, not via the barycentric sum
  for (int v = 0; v < nv; ++v) support_points_[v] = m.vertex(v);

  kinds_.assign(n_dofs_, DofKind::interior);
  owner_local_edge_.resize(m.num_boundary_edges());
  for (int be = 0; be < m.num_boundary_edges(); ++be) {
    const auto& edge = m.boundary_edges()[be];
    const auto& tri = m.triangle(edge.owner);
    int local = -1;
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e];
      const int b = tri[(e + 1) % 3];
      if ((a == edge.vertices[0] && b == edge.vertices[1]) ||
          (a == edge.vertices[1] && b == edge.vertices[0])) {
        local = e;
      }
    }
    if (local < 0) throw std::invalid_argument("boundary edge not found in its owner triangle");
    owner_local_edge_[be] = local;

    const DofKind edge_kind = decomposition_.is_gamma(be) ? DofKind::gamma_edge : DofKind::gamma_zero_edge;
    const auto dofs = cell_dofs(edge.owner);
    for (int j = 1; j < k; ++j) kinds_[dofs[basis_.edge_node(local, j)]] = edge_kind;
    kinds_[edge.vertices[0]] = DofKind::boundary_vertex;
    kinds_[edge.vertices[1]] = DofKind::boundary_vertex;
  }
}

std::vector<int> DofMap::boundary_edge_local_nodes(int boundary_edge) const {
  const int e = owner_local_edge_[boundary_edge];
  std::vector<int> nodes{e, (e + 1) % 3};
  for (int j = 1; j < degree(); ++j) nodes.push_back(basis_.edge_node(e, j));
  return nodes;
}

std::vector<int> DofMap::gamma_zero_dofs() const {
  std::vector<int> out;
  for (int be : decomposition_.gamma_zero) {
    const auto dofs = cell_dofs(mesh_->boundary_edges()[be].owner);
    for (int local : boundary_edge_local_nodes(be)) out.push_back(dofs[local]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> DofMap::boundary_dofs() const {
  std::vector<int> out;
  for (int i = 0; i < n_dofs_; ++i) {
    if (kinds_[i] != DofKind::interior) out.push_back(i);
  }
  return out;
}

std::shared_ptr<const DofMap> build_dofmap(std::shared_ptr<const Mesh> mesh, int degree,
                                           const DomainGeometry& geometry) {
  return std::make_shared<const DofMap>(std::move(mesh), degree, geometry);
}

}  // namespace curvefem
