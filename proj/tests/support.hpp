#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "curvefem/analysis.hpp"
#include "curvefem/dofmap.hpp"
#include "curvefem/fe_function.hpp"
#include "curvefem/quadrature.hpp"
#include "curvefem/geometry.hpp"
#include "curvefem/mesh.hpp"

namespace curvefem::testing {

/// Solution with f supplied directly (no consistency with u is implied).
inline ManufacturedSolution custom_solution(std::function<double(const Point&)> u,
                                            std::function<Point(const Point&)> grad,
                                            std::function<double(const Point&)> f) {
  ManufacturedSolution s;
  s.name = "custom";
  s.u = std::move(u);
  s.grad_u = std::move(grad);
  s.f = std::move(f);
  s.g = s.u;
  return s;
}

/// Triangle containing x and its barycentric coordinates, by brute force.
inline std::optional<std::pair<int, Barycentric>> locate(const Mesh& mesh, const Point& x) {
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const Point a = mesh.vertex(tri[0]);
    const Point b = mesh.vertex(tri[1]);
    const Point c = mesh.vertex(tri[2]);
    const double det = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    const double l1 = ((x - a).x() * (c - a).y() - (x - a).y() * (c - a).x()) / det;
    const double l2 = ((b - a).x() * (x - a).y() - (b - a).y() * (x - a).x()) / det;
    const double l0 = 1.0 - l1 - l2;
    if (l0 >= -1e-14 && l1 >= -1e-14 && l2 >= -1e-14) return std::pair{t, Barycentric{l0, l1, l2}};
  }
  return std::nullopt;
}

/// Pairwise log-ratio rate.
inline double rate(double e0, double e1, double h0, double h1) {
  return std::log(e0 / e1) / std::log(h0 / h1);
}

/// Largest ||v||_a / (sqrt(hmax) |v|_c) over random vectors supported on the
/// Gamma-edge dofs.
inline double gamma_edge_ratio(const std::shared_ptr<const DofMap>& dm, int n_vectors, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sqrt_h = std::sqrt(dm->mesh().hmax());
  double worst = 0.0;
  for (int s = 0; s < n_vectors; ++s) {
    FeFunction v(dm);
    for (int d = 0; d < dm->num_dofs(); ++d) {
      if (dm->kind(d) == DofKind::gamma_edge) v.coefficients()[d] = normal(rng);
    }
    worst = std::max(worst, energy_norm(v) / (sqrt_h * c_seminorm(v)));
  }
  return worst;
}

/// Gap along the normal for circles, written out from the quadratic formula.
inline double circle_gap(const DomainGeometry& geom, const Point& x, const Point& n) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> radii{geom.radius()};
  if (geom.kind() == DomainKind::annulus) radii.push_back(geom.inner_radius());
  for (double r : radii) {
    const double b = x.dot(n);
    const double disc = b * b - x.squaredNorm() + r * r;
    if (disc < 0.0) continue;
    for (double s : {-b + std::sqrt(disc), -b - std::sqrt(disc)}) {
      if (std::abs(s) < std::abs(best)) best = s;
    }
  }
  return best;
}

struct OracleNorms {
  double l2 = 0.0;
  double h1 = 0.0;
  double boundary = 0.0;
};

/// Error norms of uh against `ref` (value and gradient), integrated with a
/// cell rule of the given exactness and evaluated point by point through
/// evaluate(). The boundary norm uses `edge_points` Gauss points on each
/// Gamma edge.
template <class Ref>
OracleNorms oracle_norms(const FeFunction& uh, const Ref& ref, int exactness, int edge_points) {
  const DofMap& dm = uh.dofmap();
  const Mesh& mesh = dm.mesh();
  const TriangleQuadrature q = triangle_quadrature(exactness);
  double l2 = 0.0;
  double semi = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const Point a = mesh.vertex(tri[0]);
    const Point b = mesh.vertex(tri[1]);
    const Point c = mesh.vertex(tri[2]);
    const double area2 = std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
    for (std::size_t p = 0; p < q.points.size(); ++p) {
      const double xi = q.points[p].x();
      const double eta = q.points[p].y();
      const Point x = (1.0 - xi - eta) * a + xi * b + eta * c;
      const PointValue pv = evaluate(uh, t, {1.0 - xi - eta, xi, eta});
      double value = 0.0;
      Point grad = Point::Zero();
      ref(x, value, grad);
      l2 += q.weights[p] * area2 * (pv.value - value) * (pv.value - value);
      semi += q.weights[p] * area2 * (pv.gradient - grad).squaredNorm();
    }
  }
  const EdgeQuadrature eq = edge_quadrature(edge_points);
  double bdry = 0.0;
  for (int e = 0; e < mesh.num_boundary_edges(); ++e) {
    if (!dm.decomposition().is_gamma(e)) continue;
    const BoundaryEdge& edge = mesh.boundary_edges()[e];
    const auto& tri = mesh.triangle(edge.owner);
    int i0 = 0;
    int i1 = 0;
    for (int v = 0; v < 3; ++v) {
      if (tri[v] == edge.vertices[0]) i0 = v;
      if (tri[v] == edge.vertices[1]) i1 = v;
    }
    const Point a = mesh.vertex(edge.vertices[0]);
    const Point b = mesh.vertex(edge.vertices[1]);
    for (std::size_t p = 0; p < eq.points.size(); ++p) {
      const double s = eq.points[p];
      Barycentric bc{0.0, 0.0, 0.0};
      bc[i0] = 1.0 - s;
      bc[i1] = s;
      const Point x = (1.0 - s) * a + s * b;
      double value = 0.0;
      Point grad = Point::Zero();
      ref(x, value, grad);
      const double err = evaluate(uh, edge.owner, bc).value - value;
      bdry += eq.weights[p] * (b - a).norm() * err * err / std::abs(circle_gap(dm.geometry(), x, edge.normal));
    }
  }
  return {std::sqrt(l2), std::sqrt(l2 + semi), std::sqrt(bdry)};
}

inline auto exact_reference(const ManufacturedSolution& s) {
  return [&s](const Point& x, double& value, Point& grad) {
    value = s.u(x);
    grad = s.grad_u(x);
  };
}

inline void zero_reference(const Point&, double& value, Point& grad) {
  value = 0.0;
  grad = Point::Zero();
}

}  // namespace curvefem::testing
