#include "tabulation.hpp"

#include <span>

namespace curvefem::detail {

CellTable tabulate_cell(const LagrangeBasis& basis, int exactness) {
  CellTable t;
  t.rule = triangle_quadrature(exactness);
  t.n = basis.size();
  const std::size_t nq = t.rule.points.size();
  t.phi.resize(nq * t.n);
  t.dphi.resize(nq * t.n);
  for (std::size_t q = 0; q < nq; ++q) {
    basis.values(t.rule.points[q], std::span<double>(t.phi).subspan(q * t.n, t.n));
    basis.gradients(t.rule.points[q], std::span<Point>(t.dphi).subspan(q * t.n, t.n));
  }
  return t;
}

EdgeTable tabulate_edges(const LagrangeBasis& basis, int n_points) {
  EdgeTable t;
  t.rule = edge_quadrature(n_points);
  t.n = basis.size();
  const std::array<Point, 3> corner{Point(0, 0), Point(1, 0), Point(0, 1)};
  const std::size_t nq = t.rule.points.size();
  for (int e = 0; e < 3; ++e) {
    t.ref_points[e].resize(nq);
    t.phi[e].resize(nq * t.n);
    t.dphi[e].resize(nq * t.n);
    for (std::size_t q = 0; q < nq; ++q) {
      const double s = t.rule.points[q];
      const Point ref = (1.0 - s) * corner[e] + s * corner[(e + 1) % 3];
      t.ref_points[e][q] = ref;
      basis.values(ref, std::span<double>(t.phi[e]).subspan(q * t.n, t.n));
      basis.gradients(ref, std::span<Point>(t.dphi[e]).subspan(q * t.n, t.n));
    }
  }
  return t;
}

void sample_boundary_edge(const DofMap& dofmap, const EdgeTable& table, int boundary_edge,
                          EdgeSample& out) {
  const Mesh& mesh = dofmap.mesh();
  const BoundaryEdge& edge = mesh.boundary_edges()[boundary_edge];
  const int local = dofmap.owner_local_edge(boundary_edge);
  const AffineMap map = affine_map(mesh, edge.owner);
  const std::size_t nq = table.rule.points.size();
  const int n = table.n;
  out.x.resize(nq);
  out.weight.resize(nq);
  out.phi.assign(table.phi[local].begin(), table.phi[local].end());
  out.dn.resize(nq * n);
  for (std::size_t q = 0; q < nq; ++q) {
    out.x[q] = map.map(table.ref_points[local][q]);
    out.weight[q] = table.rule.weights[q] * edge.length;
    for (int i = 0; i < n; ++i) {
      out.dn[q * n + i] = map.physical_gradient(table.dphi[local][q * n + i]).dot(edge.normal);
    }
  }
}

}  // namespace curvefem::detail
