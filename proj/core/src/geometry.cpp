#include "curvefem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "curvefem/errors.hpp"
#include "curvefem/quadrature.hpp"

namespace curvefem {

ManufacturedSolution disc_solution() {
  ManufacturedSolution s;
  s.name = "disc: u = 1 - r^6";
  s.u = [](const Point& x) {
    const double r2 = x.squaredNorm();
    return 1.0 - r2 * r2 * r2;
  };
  s.grad_u = [](const Point& x) -> Point {
    const double r2 = x.squaredNorm();
    return -6.0 * r2 * r2 * x;
  };
  s.f = [](const Point& x) {
    const double r2 = x.squaredNorm();
    return 36.0 * r2 * r2;
  };
  s.g = [](const Point&) { return 0.0; };
  return s;
}

ManufacturedSolution annulus_solution() {
  ManufacturedSolution s;
  s.name = "annulus: u = r^2 - 5 r^4 + 4 r^6";
  s.u = [](const Point& x) {
    const double r2 = x.squaredNorm();
    return r2 - 5.0 * r2 * r2 + 4.0 * r2 * r2 * r2;
  };
  s.grad_u = [](const Point& x) -> Point {
    const double r2 = x.squaredNorm();
    return (2.0 - 20.0 * r2 + 24.0 * r2 * r2) * x;
  };
  s.f = [](const Point& x) {
    const double r2 = x.squaredNorm();
    return -4.0 + 80.0 * r2 - 144.0 * r2 * r2;
  };
  s.g = [](const Point&) { return 0.0; };
  return s;
}

ManufacturedSolution square_solution(double half_width) {
  const double w = std::numbers::pi / (2.0 * half_width);
  ManufacturedSolution s;
  s.name = "square: u = cos(wx) cos(wy)";
  s.u = [w](const Point& x) { return std::cos(w * x.x()) * std::cos(w * x.y()); };
  s.grad_u = [w](const Point& x) -> Point {
    return {-w * std::sin(w * x.x()) * std::cos(w * x.y()),
            -w * std::cos(w * x.x()) * std::sin(w * x.y())};
  };
  s.f = [w](const Point& x) { return 2.0 * w * w * std::cos(w * x.x()) * std::cos(w * x.y()); };
  s.g = [](const Point&) { return 0.0; };
  return s;
}

ManufacturedSolution affine_solution(double c0, double c1, double c2) {
  ManufacturedSolution s;
  s.name = "affine";
  s.u = [=](const Point& x) { return c0 + c1 * x.x() + c2 * x.y(); };
  s.grad_u = [=](const Point&) -> Point { return {c1, c2}; };
  s.f = [](const Point&) { return 0.0; };
  s.g = s.u;
  return s;
}

DomainGeometry::DomainGeometry(DomainKind kind, double inner, double outer,
                               ManufacturedSolution solution)
    : kind_(kind), inner_(inner), outer_(outer), solution_(std::move(solution)) {}

DomainGeometry DomainGeometry::disc(double radius, ManufacturedSolution solution) {
  if (!(radius > 0.0)) throw std::invalid_argument("disc radius must be positive");
  return DomainGeometry(DomainKind::disc, 0.0, radius, std::move(solution));
}

DomainGeometry DomainGeometry::annulus(double inner_radius, double outer_radius,
                                       ManufacturedSolution solution) {
  if (!(inner_radius > 0.0) || !(inner_radius < outer_radius)) {
    throw std::invalid_argument("annulus requires 0 < inner radius < outer radius");
  }
  return DomainGeometry(DomainKind::annulus, inner_radius, outer_radius, std::move(solution));
}

DomainGeometry DomainGeometry::square(double half_width) {
  return square(half_width, square_solution(half_width));
}

DomainGeometry DomainGeometry::square(double half_width, ManufacturedSolution solution) {
  if (!(half_width > 0.0)) throw std::invalid_argument("square half width must be positive");
  return DomainGeometry(DomainKind::square, 0.0, half_width, std::move(solution));
}

bool DomainGeometry::contains(const Point& x) const {
  switch (kind_) {
    case DomainKind::disc:
      return x.norm() <= outer_;
    case DomainKind::annulus: {
      const double r = x.norm();
      return r >= inner_ && r <= outer_;
    }
    case DomainKind::square:
      return std::abs(x.x()) <= outer_ && std::abs(x.y()) <= outer_;
  }
  return false;
}

namespace {

// Roots of |x + s n|^2 = R^2 for unit n, i.e. s^2 + 2 (x.n) s + (|x|^2 - R^2).
// Uses the cancellation-free pairing q, c/q.
void circle_roots(const Point& x, const Point& n, double radius, std::vector<double>& roots) {
  const double b = x.dot(n);
  const double r = x.norm();
  const double c = (r - radius) * (r + radius);
  const double disc = b * b - c;
  if (disc < 0.0) return;
  const double q = -(b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) {
    roots.push_back(0.0);
    return;
  }
  roots.push_back(q);
  roots.push_back(c / q);
}

void square_roots(const Point& x, const Point& n, double a, std::vector<double>& roots) {
  const double tol = 1e-12 * a;
  for (int axis = 0; axis < 2; ++axis) {
    if (n[axis] == 0.0) continue;
    for (double side : {-a, a}) {
      const double s = (side - x[axis]) / n[axis];
      const double other = x[1 - axis] + s * n[1 - axis];
      if (std::abs(other) <= a + tol) roots.push_back(s);
    }
  }
}

std::optional<double> smallest_root(const std::vector<double>& roots) {
  std::optional<double> best;
  for (double s : roots) {
    if (!best || std::abs(s) < std::abs(*best) || (std::abs(s) == std::abs(*best) && s > *best)) {
      best = s;
    }
  }
  return best;
}

}  // namespace

double signed_delta(const DomainGeometry& geometry, const Point& x, const Point& n,
                    double max_reach) {
  std::vector<double> roots;
  switch (geometry.kind()) {
    case DomainKind::disc:
      circle_roots(x, n, geometry.radius(), roots);
      break;
    case DomainKind::annulus:
      circle_roots(x, n, geometry.radius(), roots);
      circle_roots(x, n, geometry.inner_radius(), roots);
      break;
    case DomainKind::square:
      square_roots(x, n, geometry.radius(), roots);
      break;
  }
  const auto best = smallest_root(roots);
  if (!best || std::abs(*best) > max_reach) throw GeometryError("normal ray misses boundary");
  return *best;
}

double dist(const DomainGeometry& geometry, const Point& x) {
  switch (geometry.kind()) {
    case DomainKind::disc:
      return std::abs(geometry.radius() - x.norm());
    case DomainKind::annulus: {
      const double r = x.norm();
      return std::min(std::abs(geometry.radius() - r), std::abs(r - geometry.inner_radius()));
    }
    case DomainKind::square: {
      const double a = geometry.radius();
      const double dx = std::abs(x.x()) - a;
      const double dy = std::abs(x.y()) - a;
      if (dx <= 0.0 && dy <= 0.0) return -std::max(dx, dy);
      return std::hypot(std::max(dx, 0.0), std::max(dy, 0.0));
    }
  }
  return 0.0;
}

BoundaryDecomposition classify_boundary(const Mesh& mesh, const DomainGeometry& geometry,
                                        int samples_per_edge) {
  const EdgeQuadrature rule = edge_quadrature(samples_per_edge);
  const double zero_tol = 1e-13 * geometry.characteristic_length();
  const double reach = 10.0 * mesh.hmax();
  BoundaryDecomposition dec;
  dec.edge_class.resize(mesh.num_boundary_edges());
  for (int e = 0; e < mesh.num_boundary_edges(); ++e) {
    const auto& edge = mesh.boundary_edges()[e];
    const Point& a = mesh.vertex(edge.vertices[0]);
    const Point& b = mesh.vertex(edge.vertices[1]);
    int n_pos = 0;
    int n_neg = 0;
    for (double t : rule.points) {
      const double d = signed_delta(geometry, (1.0 - t) * a + t * b, edge.normal, reach);
      if (d > zero_tol) {
        ++n_pos;
      } else if (d < -zero_tol) {
        ++n_neg;
      }
    }
    const int n = static_cast<int>(rule.points.size());
    if (n_pos == n) {
      dec.edge_class[e] = EdgeClass::plus;
      dec.gamma_plus.push_back(e);
    } else if (n_neg == n) {
      dec.edge_class[e] = EdgeClass::minus;
      dec.gamma_minus.push_back(e);
    } else if (n_pos == 0 && n_neg == 0) {
      dec.edge_class[e] = EdgeClass::zero;
      dec.gamma_zero.push_back(e);
    } else {
      throw GeometryError("boundary edge " + std::to_string(e) + " changes delta-sign");
    }
  }
  return dec;
}

double ghat(const DomainGeometry& geometry, const Point& x, const Point& n, double max_reach) {
  const double d = signed_delta(geometry, x, n, max_reach);
  return geometry.solution().g(x + d * n);
}

double segment_assumption1_ratio(const DomainGeometry& geometry, const Point& x0, const Point& x1,
                                 const Point& n, double max_reach) {
  std::vector<double> samples = edge_quadrature(8).points;
  const double rel = (x1 - x0).norm() / geometry.characteristic_length();
  if (rel < 1.0) {
    samples.push_back(rel * rel);
    samples.push_back(1.0 - rel * rel);
  }
  double beta = 0.0;
  for (double t : samples) {
    const Point x = (1.0 - t) * x0 + t * x1;
    const double d = std::abs(signed_delta(geometry, x, n, max_reach));
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    beta = std::max(beta, (x - x0).norm() * (x - x1).norm() / d);
  }
  return beta;
}

double check_assumption1(const Mesh& mesh, const DomainGeometry& geometry) {
  const BoundaryDecomposition dec = classify_boundary(mesh, geometry);
  const double reach = 10.0 * mesh.hmax();
  double beta = 0.0;
  for (int e = 0; e < mesh.num_boundary_edges(); ++e) {
    if (!dec.is_gamma(e)) continue;
    const auto& edge = mesh.boundary_edges()[e];
    beta = std::max(beta, segment_assumption1_ratio(geometry, mesh.vertex(edge.vertices[0]),
                                                    mesh.vertex(edge.vertices[1]), edge.normal,
                                                    reach));
  }
  return beta;
}

}  // namespace curvefem
