#pragma once

#include <vector>

#include "curvefem/mesh.hpp"

namespace curvefem {

/// Gauss-Legendre rule on [0, 1]. Nodes lie strictly inside the interval.
struct EdgeQuadrature {
  std::vector<double> points;
  std::vector<double> weights;  ///< sum to 1
  int exactness = 0;            ///< 2n - 1
};

/// Rule on the reference triangle (0,0), (1,0), (0,1); points are the
/// reference coordinates (xi, eta) and the weights sum to 1/2.
struct TriangleQuadrature {
  std::vector<Point> points;
  std::vector<double> weights;
  int exactness = 0;
};

constexpr int kMaxTriangleExactness = 40;

/// n-point Gauss-Legendre nodes and weights on [-1, 1], computed by Newton
/// iteration on the Legendre recurrence.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

EdgeQuadrature edge_quadrature(int n_points);

/// Exactness 1 gives the centroid rule; higher orders use the collapsed
/// (Duffy) tensor product of Gauss-Legendre rules. Throws std::invalid_argument
/// outside 1..kMaxTriangleExactness.
TriangleQuadrature triangle_quadrature(int exactness);

}  // namespace curvefem
