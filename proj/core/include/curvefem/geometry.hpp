#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "curvefem/mesh.hpp"

namespace curvefem {

/// Exact solution u of -Laplace(u) = f with its gradient and boundary trace g.
/// f is defined everywhere, which doubles as its smooth extension outside the
/// domain.
struct ManufacturedSolution {
  std::string name;
  std::function<double(const Point&)> u;
  std::function<Point(const Point&)> grad_u;
  std::function<double(const Point&)> f;
  std::function<double(const Point&)> g;
};

/// u = 1 - r^6, f = 36 r^4; vanishes on the unit circle.
ManufacturedSolution disc_solution();

/// u = r^2 - 5 r^4 + 4 r^6, f = -4 + 80 r^2 - 144 r^4; vanishes on r = 1/2 and
/// r = 1.
ManufacturedSolution annulus_solution();

/// u = cos(pi x / 2a) cos(pi y / 2a) on [-a, a]^2.
ManufacturedSolution square_solution(double half_width);

/// Affine u = c0 + c1 x + c2 y (harmonic, f = 0); g is its trace.
ManufacturedSolution affine_solution(double c0, double c1, double c2);

enum class DomainKind { disc, annulus, square };

/// Analytic description of the true domain boundary.
class DomainGeometry {
 public:
  static DomainGeometry disc(double radius, ManufacturedSolution solution = disc_solution());
  static DomainGeometry annulus(double inner_radius, double outer_radius,
                                ManufacturedSolution solution = annulus_solution());
  /// Square [-a, a]^2. Its polygonal mesh coincides with the boundary, so
  /// the gap vanishes identically.
  static DomainGeometry square(double half_width);
  static DomainGeometry square(double half_width, ManufacturedSolution solution);

  DomainKind kind() const { return kind_; }
  /// Outer radius (disc/annulus) or half width (square).
  double radius() const { return outer_; }
  double inner_radius() const { return inner_; }
  const ManufacturedSolution& solution() const { return solution_; }
  void set_solution(ManufacturedSolution solution) { solution_ = std::move(solution); }

  bool contains(const Point& x) const;
  /// Length scale used to make tolerances relative.
  double characteristic_length() const { return outer_; }

 private:
  DomainGeometry(DomainKind kind, double inner, double outer, ManufacturedSolution solution);

  DomainKind kind_ = DomainKind::disc;
  double inner_ = 0.0;
  double outer_ = 1.0;
  ManufacturedSolution solution_;
};

/// Signed gap s of smallest magnitude with x + s n on the true boundary. Ties
/// go to the positive root. Throws GeometryError when no such s satisfies
/// |s| <= max_reach.
double signed_delta(const DomainGeometry& geometry, const Point& x, const Point& n,
                    double max_reach = std::numeric_limits<double>::infinity());

/// Unsigned distance from x to the true boundary.
double dist(const DomainGeometry& geometry, const Point& x);

enum class EdgeClass { plus, minus, zero };

/// Partition of the boundary edges by the sign of the gap on the open edge.
struct BoundaryDecomposition {
  std::vector<int> gamma_plus;
  std::vector<int> gamma_minus;
  std::vector<int> gamma_zero;
  std::vector<EdgeClass> edge_class;  ///< indexed by boundary edge

  bool is_gamma(int edge) const { return edge_class[edge] != EdgeClass::zero; }
};

/// Samples the gap at interior Gauss points of every boundary edge. Throws
/// GeometryError if the gap changes sign along an edge.
BoundaryDecomposition classify_boundary(const Mesh& mesh, const DomainGeometry& geometry,
                                        int samples_per_edge = 8);

/// Boundary data transported along the normal: g(x + delta(x) n).
double ghat(const DomainGeometry& geometry, const Point& x, const Point& n,
            double max_reach = std::numeric_limits<double>::infinity());

/// max |x - x0| |x - x1| / |delta(x)| over sample points of the segment
/// [x0, x1] with outward normal n. Samples are the Gauss points of the edge
/// plus the points at relative distance (h_e / L)^2 from each endpoint, L the
/// characteristic length. These approach the vertices under refinement, so a
/// tangency there makes the ratio grow.
/// Returns +inf if the gap vanishes at a sample.
double segment_assumption1_ratio(const DomainGeometry& geometry, const Point& x0, const Point& x1,
                                 const Point& n,
                                 double max_reach = std::numeric_limits<double>::infinity());

/// beta = max of segment_assumption1_ratio over the curved (Gamma) edges;
/// 0 when there are none.
double check_assumption1(const Mesh& mesh, const DomainGeometry& geometry);

}  // namespace curvefem
