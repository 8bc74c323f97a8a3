#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "curvefem/geometry.hpp"
#include "curvefem/lagrange.hpp"
#include "curvefem/mesh.hpp"

namespace curvefem {

/// Where a global degree of freedom lives relative to the boundary.
enum class DofKind : std::uint8_t {
  interior,         ///< not on the polygon boundary
  boundary_vertex,  ///< a vertex of the polygon boundary
  gamma_zero_edge,  ///< inside a boundary edge on which the gap vanishes
  gamma_edge,       ///< inside a curved (Gamma+ or Gamma-) boundary edge
};

/// Affine map from the reference triangle onto a mesh triangle.
struct AffineMap {
  Point origin;
  Eigen::Matrix2d jacobian;       ///< columns x1 - x0, x2 - x0
  Eigen::Matrix2d inv_transpose;  ///< maps reference gradients to physical ones
  double det = 0.0;

  Point map(const Point& ref) const { return origin + jacobian * ref; }
  Point physical_gradient(const Point& ref_grad) const { return inv_transpose * ref_grad; }
};

AffineMap affine_map(const Mesh& mesh, int triangle);

/// Continuous P_k degree-of-freedom layout over a mesh.
///
/// Global numbering: vertex dofs first (dof i is vertex i), then k-1 dofs per
/// mesh edge ordered from the lower to the higher vertex index, then the
/// interior dofs of each triangle.
class DofMap {
 public:
  DofMap(std::shared_ptr<const Mesh> mesh, int degree, DomainGeometry geometry);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const DomainGeometry& geometry() const { return geometry_; }
  const LagrangeBasis& basis() const { return basis_; }
  const BoundaryDecomposition& decomposition() const { return decomposition_; }

  int degree() const { return basis_.degree(); }
  int num_dofs() const { return n_dofs_; }
  int num_local_dofs() const { return basis_.size(); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  std::span<const int> cell_dofs(int triangle) const {
    return {cell_dofs_.data() + static_cast<std::size_t>(triangle) * num_local_dofs(),
            static_cast<std::size_t>(num_local_dofs())};
  }
  DofKind kind(int dof) const { return kinds_[dof]; }
  const Point& support_point(int dof) const { return support_points_[dof]; }

  /// Local edge index (0..2) of a boundary edge inside its owner triangle.
  int owner_local_edge(int boundary_edge) const { return owner_local_edge_[boundary_edge]; }

  /// Local node indices (in the owner triangle) of all nodes on the closed
  /// boundary edge.
  std::vector<int> boundary_edge_local_nodes(int boundary_edge) const;

  /// Global dofs on the closed Gamma^0 edges.
  std::vector<int> gamma_zero_dofs() const;
  /// Global dofs on the polygon boundary (vertices and edge interiors).
  std::vector<int> boundary_dofs() const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  DomainGeometry geometry_;
  LagrangeBasis basis_;
  BoundaryDecomposition decomposition_;
  int n_dofs_ = 0;
  std::vector<std::array<int, 2>> edges_;
  std::vector<int> cell_dofs_;
  std::vector<DofKind> kinds_;
  std::vector<Point> support_points_;
  std::vector<int> owner_local_edge_;
};

std::shared_ptr<const DofMap> build_dofmap(std::shared_ptr<const Mesh> mesh, int degree,
                                           const DomainGeometry& geometry);

}  // namespace curvefem
