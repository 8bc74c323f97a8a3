#include <cmath>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

#include "curvefem/analysis.hpp"
#include "curvefem/dofmap.hpp"
#include "curvefem/fe_function.hpp"
#include "curvefem/lagrange.hpp"
#include "curvefem/methods.hpp"
#include "curvefem/quadrature.hpp"
#include "support.hpp"

using namespace curvefem;
using curvefem::testing::custom_solution;
using curvefem::testing::locate;

namespace {

std::vector<Point> random_reference_points(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  while (static_cast<int>(pts.size()) < n) {
    const Point p(u(rng), u(rng));
    if (p.x() + p.y() <= 1.0) pts.push_back(p);
  }
  return pts;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

std::shared_ptr<const Mesh> disc_mesh(int M) {
  return std::make_shared<const Mesh>(build_disc_mesh(M, 5 * M, 1.0));
}

}  // namespace

class BasisDegree : public ::testing::TestWithParam<int> {};

TEST_P(BasisDegree, KroneckerProperty) {
  const LagrangeBasis basis = reference_basis(GetParam());
  const int n = basis.size();
  EXPECT_EQ(n, num_local_dofs(GetParam()));
  std::vector<double> phi(n);
  for (int j = 0; j < n; ++j) {
    basis.values(reference_point(basis.nodes()[j]), phi);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(phi[i], i == j ? 1.0 : 0.0, 1e-12);
  }
}

TEST_P(BasisDegree, PartitionOfUnity) {
  const LagrangeBasis basis = reference_basis(GetParam());
  std::vector<double> phi(basis.size());
  std::vector<Point> grad(basis.size());
  for (const Point& p : random_reference_points(20, 11)) {
    basis.values(p, phi);
    basis.gradients(p, grad);
    double sum = 0.0;
    Point gsum = Point::Zero();
    for (int i = 0; i < basis.size(); ++i) {
      sum += phi[i];
      gsum += grad[i];
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_NEAR(gsum.norm(), 0.0, 1e-10);
  }
}

TEST_P(BasisDegree, GradientsMatchFiniteDifferences) {
  const LagrangeBasis basis = reference_basis(GetParam());
  const int n = basis.size();
  std::vector<double> plus(n), minus(n);
  std::vector<Point> grad(n);
  const double h = 1e-6;
  for (const Point& p : random_reference_points(5, 3)) {
    basis.gradients(p, grad);
    for (int d = 0; d < 2; ++d) {
      Point step = Point::Zero();
      step[d] = h;
      basis.values(p + step, plus);
      basis.values(p - step, minus);
      for (int i = 0; i < n; ++i) EXPECT_NEAR(grad[i][d], (plus[i] - minus[i]) / (2 * h), 1e-6);
    }
  }
}

TEST_P(BasisDegree, NodeLayout) {
  const int k = GetParam();
  const LagrangeBasis basis = reference_basis(k);
  const auto& nodes = basis.nodes();
  for (int v = 0; v < 3; ++v) EXPECT_EQ(nodes[v][v], 1.0);
  for (int e = 0; e < 3; ++e) {
    for (int m = 1; m < k; ++m) {
      const auto& b = nodes[basis.edge_node(e, m)];
      // m-th node from vertex e toward vertex e+1
      EXPECT_NEAR(b[(e + 1) % 3], static_cast<double>(m) / k, 1e-15);
      EXPECT_NEAR(b[e], 1.0 - static_cast<double>(m) / k, 1e-15);
      EXPECT_NEAR(b[(e + 2) % 3], 0.0, 1e-15);
    }
  }
  for (int i = basis.first_interior_node(); i < basis.size(); ++i) {
    for (double c : nodes[i]) EXPECT_GT(c, 0.0);
  }
}

INSTANTIATE_TEST_SUITE_P(AllDegrees, BasisDegree, ::testing::Range(1, kMaxDegree + 1));

TEST(LagrangeBasis, LinearIsBarycentric) {
  const LagrangeBasis basis = reference_basis(1);
  ASSERT_EQ(basis.size(), 3);
  std::vector<double> phi(3);
  for (const Point& p : random_reference_points(5, 5)) {
    basis.values(p, phi);
    EXPECT_NEAR(phi[0], 1.0 - p.x() - p.y(), 1e-14);
    EXPECT_NEAR(phi[1], p.x(), 1e-14);
    EXPECT_NEAR(phi[2], p.y(), 1e-14);
  }
}

TEST(LagrangeBasis, QuadraticHasSixNodes) {
  const LagrangeBasis basis = reference_basis(2);
  EXPECT_EQ(basis.size(), 6);
  EXPECT_NEAR(basis.nodes()[3][0], 0.5, 1e-15);
  EXPECT_NEAR(basis.nodes()[3][1], 0.5, 1e-15);
  EXPECT_EQ(reference_basis(5).size(), 21);
}

TEST(LagrangeBasis, RejectsUnsupportedDegree) {
  EXPECT_THROW(reference_basis(0), std::invalid_argument);
  EXPECT_THROW(reference_basis(6), std::invalid_argument);
}

TEST(TriangleQuadrature, CentroidRule) {
  const auto q = triangle_quadrature(1);
  ASSERT_EQ(q.points.size(), 1u);
  EXPECT_NEAR(q.points[0].x(), 1.0 / 3, 1e-15);
  EXPECT_NEAR(q.points[0].y(), 1.0 / 3, 1e-15);
  EXPECT_NEAR(q.weights[0], 0.5, 1e-15);
}

TEST(TriangleQuadrature, KnownMoment) {
  const auto q = triangle_quadrature(12);
  double sum = 0.0;
  for (std::size_t i = 0; i < q.points.size(); ++i) {
    sum += q.weights[i] * q.points[i].x() * q.points[i].x() * q.points[i].y();
  }
  EXPECT_NEAR(sum, 1.0 / 60.0, 1e-15);
}

TEST(TriangleQuadrature, ExactForAllMonomialsUpToExactness) {
  for (int ex = 1; ex <= 24; ++ex) {
    const auto q = triangle_quadrature(ex);
    EXPECT_GE(q.exactness, ex);
    double wsum = 0.0;
    for (double w : q.weights) wsum += w;
    EXPECT_NEAR(wsum, 0.5, 1e-15);
    for (int a = 0; a <= ex; ++a) {
      for (int b = 0; a + b <= ex; ++b) {
        double sum = 0.0;
        for (std::size_t i = 0; i < q.points.size(); ++i) {
          sum += q.weights[i] * std::pow(q.points[i].x(), a) * std::pow(q.points[i].y(), b);
        }
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        EXPECT_NEAR(sum, exact, 1e-13 * exact) << "exactness " << ex << " x^" << a << " y^" << b;
      }
    }
  }
}

TEST(TriangleQuadrature, RejectsUnsupportedExactness) {
  EXPECT_THROW(triangle_quadrature(0), std::invalid_argument);
  EXPECT_THROW(triangle_quadrature(kMaxTriangleExactness + 1), std::invalid_argument);
}

TEST(EdgeQuadrature, Midpoint) {
  const auto q = edge_quadrature(1);
  ASSERT_EQ(q.points.size(), 1u);
  EXPECT_NEAR(q.points[0], 0.5, 1e-15);
  EXPECT_NEAR(q.weights[0], 1.0, 1e-15);
}

TEST(EdgeQuadrature, FivePointsIntegrateDegreeNine) {
  const auto q = edge_quadrature(5);
  double sum = 0.0;
  for (std::size_t i = 0; i < q.points.size(); ++i) sum += q.weights[i] * std::pow(q.points[i], 9);
  EXPECT_NEAR(sum, 0.1, 1e-13);
}

TEST(EdgeQuadrature, ExactnessAndInteriorPoints) {
  for (int n = 1; n <= 12; ++n) {
    const auto q = edge_quadrature(n);
    EXPECT_EQ(q.exactness, 2 * n - 1);
    for (double t : q.points) {
      EXPECT_GT(t, 0.0);
      EXPECT_LT(t, 1.0);
    }
    for (int d = 0; d <= 2 * n - 1; ++d) {
      double sum = 0.0;
      for (std::size_t i = 0; i < q.points.size(); ++i) sum += q.weights[i] * std::pow(q.points[i], d);
      EXPECT_NEAR(sum, 1.0 / (d + 1), 1e-14) << n << ' ' << d;
    }
  }
}

TEST(DofMap, LinearBoundaryVertexCount) {
  const auto dm = build_dofmap(disc_mesh(16), 1, DomainGeometry::disc(1.0));
  int n = 0;
  for (int i = 0; i < dm->num_dofs(); ++i) n += dm->kind(i) == DofKind::boundary_vertex;
  EXPECT_EQ(n, 80);
}

TEST(DofMap, QuadraticHasOneGammaDofPerBoundaryEdge) {
  const auto mesh = disc_mesh(8);
  const auto dm = build_dofmap(mesh, 2, DomainGeometry::disc(1.0));
  int n = 0;
  for (int i = 0; i < dm->num_dofs(); ++i) n += dm->kind(i) == DofKind::gamma_edge;
  EXPECT_EQ(n, mesh->num_boundary_edges());
}

TEST(DofMap, CountFormulaAndConsistentSupportPoints) {
  const auto mesh = std::make_shared<const Mesh>(build_annulus_mesh(4, 16, 8, 0.5, 1.0));
  const int nv = mesh->num_vertices();
  const int nt = mesh->num_triangles();
  // Euler: every triangle has 3 edges, interior edges are counted twice
  const int ne = (3 * nt + mesh->num_boundary_edges()) / 2;
  for (int k = 1; k <= kMaxDegree; ++k) {
    const auto dm = build_dofmap(mesh, k, DomainGeometry::annulus(0.5, 1.0));
    EXPECT_EQ(dm->num_edges(), ne);
    EXPECT_EQ(dm->num_dofs(), nv + (k - 1) * ne + (k - 1) * (k - 2) / 2 * nt);
    for (int t = 0; t < nt; ++t) {
      const AffineMap map = affine_map(*mesh, t);
      const auto dofs = dm->cell_dofs(t);
      for (int i = 0; i < dm->num_local_dofs(); ++i) {
        const Point x = map.map(reference_point(dm->basis().nodes()[i]));
        EXPECT_NEAR((x - dm->support_point(dofs[i])).norm(), 0.0, 1e-14);
      }
    }
  }
}

TEST(DofMap, GammaZeroOnSquare) {
  const auto mesh = std::make_shared<const Mesh>(build_square_mesh(3, 1.0));
  const auto dm = build_dofmap(mesh, 3, DomainGeometry::square(1.0));
  // 12 boundary edges, 12 vertices + 2 edge nodes each
  EXPECT_EQ(dm->gamma_zero_dofs().size(), 36u);
  EXPECT_EQ(dm->boundary_dofs().size(), 36u);
  for (int d : dm->gamma_zero_dofs()) {
    EXPECT_TRUE(dm->kind(d) == DofKind::gamma_zero_edge || dm->kind(d) == DofKind::boundary_vertex);
  }
}

TEST(Interpolate, ReproducesPolynomialsOfTheElementDegree) {
  const auto mesh = disc_mesh(4);
  for (int k = 1; k <= kMaxDegree; ++k) {
    const auto u = [k](const Point& x) { return std::pow(x.x() - 0.2, k) + x.x() * std::pow(x.y(), k - 1); };
    const auto grad = [k](const Point& x) -> Point {
      return {k * std::pow(x.x() - 0.2, k - 1) + std::pow(x.y(), k - 1),
              k == 1 ? 0.0 : (k - 1) * x.x() * std::pow(x.y(), k - 2)};
    };
    const auto geom = DomainGeometry::disc(1.0, custom_solution(u, grad, [](const Point&) { return 0.0; }));
    const auto dm = build_dofmap(mesh, k, geom);
    const FeFunction ui = interpolate(u, dm);
    EXPECT_LT(error_norms(ui, geom.solution()).h1, 1e-12) << "k=" << k;
  }
}

TEST(Interpolate, ConstantFunction) {
  const auto dm = build_dofmap(disc_mesh(4), 3, DomainGeometry::disc(1.0));
  const FeFunction c = interpolate([](const Point&) { return 2.5; }, dm);
  for (double v : c.coefficients()) EXPECT_EQ(v, 2.5);
}

TEST(Interpolate, H1ErrorRateMatchesDegree) {
  const auto geom = DomainGeometry::disc(1.0);
  for (int k = 1; k <= 3; ++k) {
    std::vector<double> err;
    std::vector<double> h;
    for (int M : {8, 16, 32}) {
      const auto mesh = disc_mesh(M);
      const auto dm = build_dofmap(mesh, k, geom);
      err.push_back(error_norms(interpolate(geom.solution().u, dm), geom.solution()).h1);
      h.push_back(mesh->hmax());
    }
    for (int i = 1; i < 3; ++i) {
      const double r = curvefem::testing::rate(err[i - 1], err[i], h[i - 1], h[i]);
      EXPECT_NEAR(r, k, 0.3) << "k=" << k;
    }
  }
}

TEST(Evaluate, GradientOfLinearFunction) {
  const auto mesh = disc_mesh(4);
  const auto dm = build_dofmap(mesh, 2, DomainGeometry::disc(1.0));
  const FeFunction u = interpolate([](const Point& x) { return x.x(); }, dm);
  for (int t = 0; t < mesh->num_triangles(); t += 7) {
    const PointValue pv = evaluate(u, t, {0.2, 0.3, 0.5});
    EXPECT_NEAR((pv.gradient - Point(1, 0)).norm(), 0.0, 1e-12);
  }
}

TEST(Evaluate, ValueAtNodeIsCoefficient) {
  const auto mesh = disc_mesh(4);
  const auto dm = build_dofmap(mesh, 3, DomainGeometry::disc(1.0));
  const FeFunction u = interpolate([](const Point& x) { return std::sin(3 * x.x()) + x.y(); }, dm);
  for (int t = 0; t < mesh->num_triangles(); t += 5) {
    for (int i = 0; i < dm->num_local_dofs(); ++i) {
      EXPECT_NEAR(evaluate(u, t, dm->basis().nodes()[i]).value, u.coefficients()[dm->cell_dofs(t)[i]], 1e-13);
    }
  }
}

TEST(Evaluate, QuadraticReproducesRadiusSquaredGradient) {
  const auto mesh = disc_mesh(8);
  const Point x(0.3, 0.4);
  const auto loc = locate(*mesh, x);
  ASSERT_TRUE(loc.has_value());
  for (int k = 2; k <= kMaxDegree; ++k) {
    const auto dm = build_dofmap(mesh, k, DomainGeometry::disc(1.0));
    const FeFunction u = interpolate([](const Point& p) { return p.squaredNorm(); }, dm);
    const PointValue pv = evaluate(u, loc->first, loc->second);
    EXPECT_NEAR((pv.gradient - Point(0.6, 0.8)).norm(), 0.0, 1e-10) << "k=" << k;
    EXPECT_NEAR(pv.value, 0.25, 1e-12);
  }
}

TEST(Evaluate, RejectsBadTriangle) {
  const auto dm = build_dofmap(disc_mesh(2), 1, DomainGeometry::disc(1.0));
  const FeFunction u(dm);
  EXPECT_THROW(evaluate(u, -1, {1, 0, 0}), std::out_of_range);
  EXPECT_THROW(evaluate(u, dm->mesh().num_triangles(), {1, 0, 0}), std::out_of_range);
}

TEST(FeFunction, RejectsWrongLength) {
  const auto dm = build_dofmap(disc_mesh(2), 1, DomainGeometry::disc(1.0));
  EXPECT_THROW(FeFunction(dm, std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST(FeFunction, CsvExport) {
  const auto dm = build_dofmap(std::make_shared<const Mesh>(build_disc_mesh(1, 3, 1.0)), 1, DomainGeometry::disc(1.0));
  std::ostringstream out;
  write_csv(interpolate([](const Point& x) { return x.x(); }, dm), out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "dof_index,x,y,value");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0,0,0");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(DofMap, MassRowSumsEqualBasisIntegrals) {
  // independent mass assembly against the load vector with f = 1
  const auto mesh = disc_mesh(4);
  for (int k = 1; k <= 4; ++k) {
    const auto geom = DomainGeometry::disc(
        1.0, custom_solution([](const Point&) { return 0.0; }, [](const Point&) { return Point(0, 0); },
                             [](const Point&) { return 1.0; }));
    const auto dm = build_dofmap(mesh, k, geom);
    std::vector<double> row_sum(dm->num_dofs(), 0.0);
    const auto q = triangle_quadrature(2 * k + 1);
    std::vector<double> phi(dm->num_local_dofs());
    for (int t = 0; t < mesh->num_triangles(); ++t) {
      const double jac = std::abs(affine_map(*mesh, t).det);
      const auto dofs = dm->cell_dofs(t);
      for (std::size_t p = 0; p < q.points.size(); ++p) {
        dm->basis().values(q.points[p], phi);
        for (int i = 0; i < dm->num_local_dofs(); ++i) {
          for (int j = 0; j < dm->num_local_dofs(); ++j) {
            row_sum[dofs[i]] += q.weights[p] * jac * phi[i] * phi[j];
          }
        }
      }
    }
    const Vector load = assemble_load(*dm, MethodConfig{});
    for (int i = 0; i < dm->num_dofs(); ++i) EXPECT_NEAR(row_sum[i], load[i], 1e-10);
  }
}
