#include "curvefem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "curvefem/geometry.hpp"

namespace curvefem {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

double triangle_diameter(const Point& a, const Point& b, const Point& c) {
  return std::max({(a - b).norm(), (b - c).norm(), (c - a).norm()});
}

// Triangulates the band between two closed rings whose first vertices sit at
// angle zero. At each step the triangle whose new diagonal is shorter is
// emitted; ties advance the inner ring.
void stitch_rings(const std::vector<Point>& v, int inner_start, int inner_count, int outer_start,
                  int outer_count, std::vector<std::array<int, 3>>& triangles) {
  int i = 0;
  int j = 0;
  while (i < inner_count || j < outer_count) {
    const int a = inner_start + i % inner_count;
    const int a_next = inner_start + (i + 1) % inner_count;
    const int b = outer_start + j % outer_count;
    const int b_next = outer_start + (j + 1) % outer_count;
    bool advance_inner = false;
    if (i == inner_count) {
      advance_inner = false;
    } else if (j == outer_count) {
      advance_inner = true;
    } else {
      advance_inner = (v[a_next] - v[b]).squaredNorm() <= (v[a] - v[b_next]).squaredNorm();
    }
    if (advance_inner) {
      triangles.push_back({a, b, a_next});
      ++i;
    } else {
      triangles.push_back({a, b, b_next});
      ++j;
    }
  }
}

void push_ring(std::vector<Point>& vertices, double radius, int count) {
  for (int j = 0; j < count; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / count;
    vertices.emplace_back(radius * std::cos(theta), radius * std::sin(theta));
  }
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  std::unordered_map<std::uint64_t, int> count;
  count.reserve(triangles_.size() * 3);
  for (const auto& tri : triangles_) {
    for (int e = 0; e < 3; ++e) ++count[edge_key(tri[e], tri[(e + 1) % 3])];
  }
  for (int t = 0; t < num_triangles(); ++t) {
    const auto& tri = triangles_[t];
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e];
      const int b = tri[(e + 1) % 3];
      if (count[edge_key(a, b)] == 1) {
        BoundaryEdge edge;
        edge.vertices = {a, b};
        edge.owner = t;
        finish_boundary_edge(edge);
        boundary_edges_.push_back(edge);
      }
    }
  }
  for (const auto& tri : triangles_) {
    hmax_ = std::max(hmax_, triangle_diameter(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]));
  }
}

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
           const std::vector<std::array<int, 3>>& boundary_edges)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const int nv = num_vertices();
  const int nt = num_triangles();
  for (const auto& tri : triangles_) {
    for (int v : tri) {
      if (v < 0 || v >= nv) throw std::invalid_argument("triangle references unknown vertex");
    }
  }
  for (const auto& [a, b, owner] : boundary_edges) {
    if (a < 0 || a >= nv || b < 0 || b >= nv || owner < 0 || owner >= nt) {
      throw std::invalid_argument("boundary edge references unknown vertex or triangle");
    }
    BoundaryEdge edge;
    edge.vertices = {a, b};
    edge.owner = owner;
    finish_boundary_edge(edge);
    boundary_edges_.push_back(edge);
  }
  for (const auto& tri : triangles_) {
    hmax_ = std::max(hmax_, triangle_diameter(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]));
  }
}

void Mesh::finish_boundary_edge(BoundaryEdge& edge) const {
  const Point& a = vertices_[edge.vertices[0]];
  const Point& b = vertices_[edge.vertices[1]];
  const Point tangent = b - a;
  edge.length = tangent.norm();
  Point normal(tangent.y(), -tangent.x());
  normal /= edge.length;
  const auto& tri = triangles_[edge.owner];
  const Point centroid = (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]) / 3.0;
  if (normal.dot(0.5 * (a + b) - centroid) < 0.0) {
    // owner is clockwise; keep the outward normal and the left-hand ordering
    normal = -normal;
    std::swap(edge.vertices[0], edge.vertices[1]);
  }
  edge.normal = normal;
}

double Mesh::signed_area(int t) const {
  const auto& tri = triangles_[t];
  const Point e1 = vertices_[tri[1]] - vertices_[tri[0]];
  const Point e2 = vertices_[tri[2]] - vertices_[tri[0]];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

Mesh build_disc_mesh(int refinement, int n_boundary_segments, double radius) {
  if (refinement < 1) throw std::invalid_argument("refinement M must be >= 1");
  if (n_boundary_segments < 3) throw std::invalid_argument("need at least 3 boundary segments");
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");

  const int rings = std::max(1, static_cast<int>(std::lround(2.0 * refinement / std::numbers::pi)));
  std::vector<Point> vertices;
  vertices.emplace_back(0.0, 0.0);
  std::vector<int> start(rings + 1, 0);
  std::vector<int> count(rings + 1, 1);
  for (int i = 1; i <= rings; ++i) {
    count[i] = i == rings ? n_boundary_segments
                          : std::max(3, static_cast<int>(std::lround(
                                            static_cast<double>(n_boundary_segments) * i / rings)));
    start[i] = static_cast<int>(vertices.size());
    push_ring(vertices, i == rings ? radius : radius * i / rings, count[i]);
  }

  std::vector<std::array<int, 3>> triangles;
  for (int j = 0; j < count[1]; ++j) {
    triangles.push_back({0, start[1] + j, start[1] + (j + 1) % count[1]});
  }
  for (int i = 1; i < rings; ++i) {
    stitch_rings(vertices, start[i], count[i], start[i + 1], count[i + 1], triangles);
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh build_tangent_fixture(int refinement, double radius) {
  const Mesh disc = build_disc_mesh(refinement, 5 * refinement, radius);
  std::vector<Point> vertices = disc.vertices();
  const int n = static_cast<int>(vertices.size());
  const int segs = 5 * refinement;
  const int a = n - segs;
  const int b = a + 1;
  vertices[b] = vertices[a] + Point(0.0, 1.5 * (vertices[b] - vertices[a]).norm());
  return Mesh(std::move(vertices), disc.triangles());
}

Mesh build_annulus_mesh(int refinement, int outer_segments, int inner_segments,
                        double inner_radius, double outer_radius) {
  if (refinement < 1) throw std::invalid_argument("refinement M must be >= 1");
  if (outer_segments < 3 || inner_segments < 3) {
    throw std::invalid_argument("need at least 3 segments on each boundary circle");
  }
  if (!(inner_radius > 0.0) || !(inner_radius < outer_radius)) {
    throw std::invalid_argument("annulus requires 0 < inner radius < outer radius");
  }

  const double width = outer_radius - inner_radius;
  const int rings = std::max(
      1, static_cast<int>(std::lround(2.0 * refinement * width / (std::numbers::pi * outer_radius))));
  std::vector<Point> vertices;
  std::vector<int> start(rings + 1, 0);
  std::vector<int> count(rings + 1, 0);
  for (int i = 0; i <= rings; ++i) {
    if (i == 0) {
      count[i] = inner_segments;
    } else if (i == rings) {
      count[i] = outer_segments;
    } else {
      const double s = static_cast<double>(i) / rings;
      count[i] = std::max(3, static_cast<int>(std::lround(inner_segments + s * (outer_segments - inner_segments))));
    }
    start[i] = static_cast<int>(vertices.size());
    const double r = i == 0 ? inner_radius
                     : i == rings ? outer_radius
                                  : inner_radius + width * i / rings;
    push_ring(vertices, r, count[i]);
  }

  std::vector<std::array<int, 3>> triangles;
  for (int i = 0; i < rings; ++i) {
    stitch_rings(vertices, start[i], count[i], start[i + 1], count[i + 1], triangles);
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh build_square_mesh(int cells_per_side, double half_width) {
  if (cells_per_side < 1) throw std::invalid_argument("need at least one cell per side");
  if (!(half_width > 0.0)) throw std::invalid_argument("half width must be positive");
  const int n = cells_per_side;
  std::vector<Point> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      // endpoints exact so that boundary vertices sit on the square
      const double x = i == n ? half_width : -half_width + 2.0 * half_width * i / n;
      const double y = j == n ? half_width : -half_width + 2.0 * half_width * j / n;
      vertices.emplace_back(x, y);
    }
  }
  std::vector<std::array<int, 3>> triangles;
  const auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles));
}

MeshStats mesh_stats(const Mesh& mesh) {
  MeshStats stats;
  stats.hmax = mesh.hmax();
  stats.hmin = std::numeric_limits<double>::infinity();
  stats.min_angle = std::numbers::pi;
  stats.n_boundary_segments = mesh.num_boundary_edges();
  for (const auto& tri : mesh.triangles()) {
    std::array<double, 3> len{};
    for (int e = 0; e < 3; ++e) {
      len[e] = (mesh.vertex(tri[(e + 1) % 3]) - mesh.vertex(tri[e])).norm();
      stats.hmin = std::min(stats.hmin, len[e]);
    }
    for (int e = 0; e < 3; ++e) {
      // angle opposite to edge e
      const double a = len[e];
      const double b = len[(e + 1) % 3];
      const double c = len[(e + 2) % 3];
      const double cosine = std::clamp((b * b + c * c - a * a) / (2.0 * b * c), -1.0, 1.0);
      stats.min_angle = std::min(stats.min_angle, std::acos(cosine));
    }
  }
  if (mesh.num_triangles() == 0) stats.hmin = 0.0;
  return stats;
}

std::vector<std::string> validate_mesh(const Mesh& mesh, const DomainGeometry& geometry) {
  std::vector<std::string> violations;
  const int nv = mesh.num_vertices();

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    if (std::any_of(tri.begin(), tri.end(), [nv](int v) { return v < 0 || v >= nv; })) {
      violations.push_back("triangle " + std::to_string(t) + ": invalid vertex index");
      return violations;
    }
    if (!(mesh.signed_area(t) > 0.0)) {
      violations.push_back("triangle " + std::to_string(t) + ": non-positive area");
    }
  }

  std::unordered_map<std::uint64_t, int> count;
  for (const auto& tri : mesh.triangles()) {
    for (int e = 0; e < 3; ++e) ++count[edge_key(tri[e], tri[(e + 1) % 3])];
  }
  int n_single = 0;
  for (const auto& [key, c] : count) {
    if (c > 2) violations.push_back("edge shared by " + std::to_string(c) + " triangles");
    if (c == 1) ++n_single;
  }
  if (n_single != mesh.num_boundary_edges()) {
    violations.push_back("boundary edge list does not match edges with a single triangle");
  }

  std::vector<char> on_boundary(nv, 0);
  for (int e = 0; e < mesh.num_boundary_edges(); ++e) {
    const auto& edge = mesh.boundary_edges()[e];
    const auto key = edge_key(edge.vertices[0], edge.vertices[1]);
    const auto it = count.find(key);
    if (it == count.end() || it->second != 1) {
      violations.push_back("boundary edge " + std::to_string(e) + ": not on exactly one triangle");
    }
    const auto& owner = mesh.triangle(edge.owner);
    const bool in_owner = std::count(owner.begin(), owner.end(), edge.vertices[0]) == 1 &&
                          std::count(owner.begin(), owner.end(), edge.vertices[1]) == 1;
    if (!in_owner) {
      violations.push_back("boundary edge " + std::to_string(e) + ": owner does not contain edge");
    }
    const Point tangent = mesh.vertex(edge.vertices[1]) - mesh.vertex(edge.vertices[0]);
    if (std::abs(edge.normal.dot(tangent)) > 1e-12 * edge.length ||
        std::abs(edge.normal.norm() - 1.0) > 1e-12) {
      violations.push_back("boundary edge " + std::to_string(e) + ": normal not unit/orthogonal");
    }
    const Point centroid =
        (mesh.vertex(owner[0]) + mesh.vertex(owner[1]) + mesh.vertex(owner[2])) / 3.0;
    const Point mid = 0.5 * (mesh.vertex(edge.vertices[0]) + mesh.vertex(edge.vertices[1]));
    if (!(edge.normal.dot(mid - centroid) > 0.0)) {
      violations.push_back("boundary edge " + std::to_string(e) + ": normal points inward");
    }
    on_boundary[edge.vertices[0]] = 1;
    on_boundary[edge.vertices[1]] = 1;
  }

  for (int v = 0; v < nv; ++v) {
    if (on_boundary[v] && !(dist(geometry, mesh.vertex(v)) < 1e-12)) {
      violations.push_back("vertex " + std::to_string(v) + ": vertex off boundary");
    }
  }

  const MeshStats stats = mesh_stats(mesh);
  if (mesh.num_triangles() > 0 && !(stats.hmin > 0.0 && stats.hmax / stats.hmin <= 10.0)) {
    violations.push_back("quasi-uniformity: edge length ratio exceeds 10");
  }
  return violations;
}

}  // namespace curvefem
