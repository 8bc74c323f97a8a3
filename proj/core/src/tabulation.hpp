#pragma once

#include <array>
#include <vector>

#include "curvefem/dofmap.hpp"
#include "curvefem/quadrature.hpp"

namespace curvefem::detail {

/// Basis values and reference gradients at the points of a triangle rule,
/// stored point-major: phi[q * n + i].
struct CellTable {
  TriangleQuadrature rule;
  int n = 0;
  std::vector<double> phi;
  std::vector<Point> dphi;
};

CellTable tabulate_cell(const LagrangeBasis& basis, int exactness);

/// Basis tabulated at the Gauss points of each of the three local edges.
/// Local edge e runs from local vertex e to local vertex (e + 1) % 3.
struct EdgeTable {
  EdgeQuadrature rule;
  int n = 0;
  std::array<std::vector<Point>, 3> ref_points;
  std::array<std::vector<double>, 3> phi;
  std::array<std::vector<Point>, 3> dphi;
};

EdgeTable tabulate_edges(const LagrangeBasis& basis, int n_points);

/// Quantities on one boundary edge at the quadrature points: physical point,
/// weight including the edge length, basis values, and normal derivatives.
struct EdgeSample {
  std::vector<Point> x;
  std::vector<double> weight;
  std::vector<double> phi;  ///< q * n + i
  std::vector<double> dn;   ///< normal derivative of phi_i
};

void sample_boundary_edge(const DofMap& dofmap, const EdgeTable& table, int boundary_edge,
                          EdgeSample& out);

}  // namespace curvefem::detail
