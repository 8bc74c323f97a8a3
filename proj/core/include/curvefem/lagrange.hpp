#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "curvefem/mesh.hpp"

namespace curvefem {

using Barycentric = std::array<double, 3>;

constexpr int kMaxDegree = 5;

inline int num_local_dofs(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Equispaced Lagrange element of degree 1..5 on the reference triangle
/// (0,0), (1,0), (0,1).
///
/// Local node order: the three vertices, then k-1 nodes on each edge
/// (v0,v1), (v1,v2), (v2,v0) listed from the first vertex to the second,
/// then the interior nodes.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Barycentric>& nodes() const { return nodes_; }

  /// Local index of the m-th node (1 <= m <= k-1) on local edge e.
  int edge_node(int e, int m) const { return 3 + e * (degree_ - 1) + (m - 1); }
  int first_interior_node() const { return 3 + 3 * (degree_ - 1); }

  /// Shape function values at reference point (xi, eta).
  void values(const Point& ref, std::span<double> out) const;
  /// Reference gradients d/dxi, d/deta, written as out[i] = grad phi_i.
  void gradients(const Point& ref, std::span<Point> out) const;

 private:
  void monomials(const Point& ref, Eigen::VectorXd& p) const;
  void monomial_gradients(const Point& ref, Eigen::VectorXd& dx, Eigen::VectorXd& dy) const;

  int degree_;
  std::vector<Barycentric> nodes_;
  std::vector<std::array<int, 2>> exponents_;
  Eigen::MatrixXd coefficients_;  ///< phi_i = sum_m C(m, i) p_m
};

LagrangeBasis reference_basis(int degree);

inline Point reference_point(const Barycentric& b) { return {b[1], b[2]}; }

}  // namespace curvefem
