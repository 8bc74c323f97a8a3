#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace curvefem {

using Point = Eigen::Vector2d;

class DomainGeometry;

/// Edge of the polygonal boundary. Endpoints are ordered so that the domain
/// lies to the left when walking from vertices[0] to vertices[1].
struct BoundaryEdge {
  std::array<int, 2> vertices{};
  int owner = -1;           ///< index of the single triangle containing the edge
  Point normal = Point::Zero();  ///< unit normal pointing out of the polygon
  double length = 0.0;
};

/// Straight-sided triangulation of a polygonal domain.
///
/// Immutable once constructed. The boundary edge list, outward normals and
/// hmax are derived from the vertex/triangle arrays; no validation happens in
/// the constructor so that malformed meshes can still be inspected with
/// validate_mesh().
class Mesh {
 public:
  Mesh() = default;

  /// Derives boundary edges as the edges that belong to exactly one triangle.
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles);

  /// Uses an explicit boundary edge list given as (i, j, owner) triples.
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
       const std::vector<std::array<int, 3>>& boundary_edges);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_boundary_edges() const { return static_cast<int>(boundary_edges_.size()); }

  const Point& vertex(int i) const { return vertices_[i]; }
  const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }

  /// Largest triangle diameter.
  double hmax() const { return hmax_; }

  double signed_area(int t) const;

 private:
  void finish_boundary_edge(BoundaryEdge& edge) const;

  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<BoundaryEdge> boundary_edges_;
  double hmax_ = 0.0;
};

struct MeshStats {
  double hmax = 0.0;
  double hmin = 0.0;  ///< shortest edge
  int n_boundary_segments = 0;
  double min_angle = 0.0;  ///< radians
};

/// Concentric-ring triangulation of the disc of the given radius centred at
/// the origin. `refinement` sets the number of rings (about 2M/pi), the
/// segment count sets the number of equally spaced boundary vertices; interior
/// rings carry vertex counts proportional to their radius.
Mesh build_disc_mesh(int refinement, int n_boundary_segments, double radius);

/// Ring triangulation of the annulus inner_radius < |x| < outer_radius.
Mesh build_annulus_mesh(int refinement, int outer_segments, int inner_segments,
                        double inner_radius, double outer_radius);

/// Structured n x n square grid on [-half_width, half_width]^2, each cell
/// split along its diagonal. Used where the polygon coincides with the
/// true boundary.
Mesh build_square_mesh(int cells_per_side, double half_width);

/// Disc mesh (segs = 5M) whose first boundary edge is rotated about the
/// vertex (R, 0) onto the tangent line of the circle there and stretched by
/// 1.5 so that the next edge stays outside the circle. The moved vertex
/// leaves the circle. Used to exercise the tangency check.
Mesh build_tangent_fixture(int refinement, double radius);

MeshStats mesh_stats(const Mesh& mesh);

/// Human-readable violations of the mesh invariants; empty when the mesh is
/// well formed and every boundary vertex lies on the boundary of `geometry`.
std::vector<std::string> validate_mesh(const Mesh& mesh, const DomainGeometry& geometry);

/// Text format `curvefem-mesh v1`, 17 significant digits.
void write_mesh(const Mesh& mesh, std::ostream& out);
Mesh read_mesh(std::istream& in);
void write_mesh_file(const Mesh& mesh, const std::string& path);
Mesh read_mesh_file(const std::string& path);

}  // namespace curvefem
