#include "curvefem/methods.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "curvefem/errors.hpp"
#include "tabulation.hpp"

namespace curvefem {

namespace {

using detail::EdgeSample;

double reach(const DofMap& dofmap) { return 10.0 * dofmap.mesh().hmax(); }

// Adds w * kernel(i, j) over all local pairs of a boundary edge sample.
template <class Kernel>
void add_edge_block(SparseMatrix& a, std::span<const int> dofs, int n, Kernel&& kernel) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = kernel(i, j);
      if (v != 0.0) a.add(dofs[i], dofs[j], v);
    }
  }
}

LinearSystem start_system(const DofMap& dofmap, const MethodConfig& config) {
  LinearSystem s;
  s.matrix = assemble_stiffness(dofmap);
  s.rhs = assemble_load(dofmap, config);
  return s;
}

// Nitsche-type boundary terms shared by both BDT variants. `symmetric`
// selects M_h, otherwise N_h.
LinearSystem assemble_nitsche(const DofMap& dofmap, const MethodConfig& config, bool symmetric) {
  validate(config);
  LinearSystem s = start_system(dofmap, config);
  const Mesh& mesh = dofmap.mesh();
  const auto& g = dofmap.geometry().solution().g;
  const int n = dofmap.num_local_dofs();
  const detail::EdgeTable table =
      detail::tabulate_edges(dofmap.basis(), boundary_points(dofmap.degree()));
  EdgeSample es;
  std::vector<double> k_val;
  for (int e = 0; e < mesh.num_boundary_edges(); ++e) {
    const BoundaryEdge& edge = mesh.boundary_edges()[e];
    detail::sample_boundary_edge(dofmap, table, e, es);
    const auto dofs = dofmap.cell_dofs(edge.owner);
    const double pen = config.gamma / edge.length;
    for (std::size_t q = 0; q < es.x.size(); ++q) {
      const double delta = signed_delta(dofmap.geometry(), es.x[q], edge.normal, reach(dofmap));
      const double w = es.weight[q];
      const double* phi = &es.phi[q * n];
      const double* dn = &es.dn[q * n];
      const double gh = g(es.x[q] + delta * edge.normal);
      if (symmetric) {
        const double c = pen * delta - 1.0;
        add_edge_block(s.matrix, dofs, n, [&](int i, int j) {
          return w * (c * (delta * dn[i] * dn[j] + dn[j] * phi[i] + dn[i] * phi[j]) +
                      pen * phi[i] * phi[j]);
        });
        for (int i = 0; i < n; ++i) s.rhs[dofs[i]] += w * gh * (c * dn[i] + pen * phi[i]);
      } else {
        add_edge_block(s.matrix, dofs, n, [&](int i, int j) {
          return w * (-dn[j] * phi[i] - (phi[j] + delta * dn[j]) * (dn[i] - pen * phi[i]));
        });
        for (int i = 0; i < n; ++i) s.rhs[dofs[i]] -= w * gh * (dn[i] - pen * phi[i]);
      }
    }
  }
  s.matrix.set_symmetric(symmetric);
  return s;
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::plain: return "plain";
    case Method::bdt: return "bdt";
    case Method::robin: return "robin";
    case Method::bdt_symmetric: return "bdt-sym";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "plain") return Method::plain;
  if (name == "bdt") return Method::bdt;
  if (name == "robin") return Method::robin;
  if (name == "bdt-sym") return Method::bdt_symmetric;
  throw std::invalid_argument("unknown method '" + name + "' (expected plain|bdt|robin|bdt-sym)");
}

std::string to_string(FExtension extension) {
  return extension == FExtension::analytic ? "analytic" : "p1";
}

FExtension parse_f_extension(const std::string& name) {
  if (name == "analytic") return FExtension::analytic;
  if (name == "p1") return FExtension::linear_interpolant;
  throw std::invalid_argument("unknown f extension '" + name + "' (expected analytic|p1)");
}

void validate(const MethodConfig& config) {
  if (config.degree < 1 || config.degree > kMaxDegree) {
    throw std::invalid_argument("degree must be in 1.." + std::to_string(kMaxDegree));
  }
  const bool nitsche = config.method == Method::bdt || config.method == Method::bdt_symmetric;
  if (nitsche && !(config.gamma > 0.0 && std::isfinite(config.gamma))) {
    throw std::invalid_argument("gamma must be positive and finite");
  }
  if (config.method == Method::robin && !(config.epsilon >= 0.0 && std::isfinite(config.epsilon))) {
    throw std::invalid_argument("epsilon must be non-negative and finite");
  }
}

SparseMatrix sparsity_pattern(const DofMap& dofmap) {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(dofmap.num_dofs()));
  for (int t = 0; t < dofmap.mesh().num_triangles(); ++t) {
    const auto dofs = dofmap.cell_dofs(t);
    for (int i : dofs) rows[i].insert(rows[i].end(), dofs.begin(), dofs.end());
  }
  return SparseMatrix::from_pattern(dofmap.num_dofs(), rows);
}

SparseMatrix assemble_stiffness(const DofMap& dofmap) {
  SparseMatrix a = sparsity_pattern(dofmap);
  const detail::CellTable table = detail::tabulate_cell(dofmap.basis(), cell_exactness(dofmap.degree()));
  const int n = table.n;
  const std::size_t nq = table.rule.points.size();
  std::vector<Point> grad(static_cast<std::size_t>(n));
  std::vector<double> local(static_cast<std::size_t>(n * n));
  for (int t = 0; t < dofmap.mesh().num_triangles(); ++t) {
    const AffineMap map = affine_map(dofmap.mesh(), t);
    const double jac = std::abs(map.det);
    std::fill(local.begin(), local.end(), 0.0);
    for (std::size_t q = 0; q < nq; ++q) {
      const double w = table.rule.weights[q] * jac;
      for (int i = 0; i < n; ++i) grad[i] = map.physical_gradient(table.dphi[q * n + i]);
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) local[i * n + j] += w * grad[i].dot(grad[j]);
      }
    }
    const auto dofs = dofmap.cell_dofs(t);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        a.add(dofs[i], dofs[j], local[i * n + j]);
        if (j != i) a.add(dofs[j], dofs[i], local[i * n + j]);
      }
    }
  }
  a.set_symmetric(true);
  return a;
}

Vector assemble_load(const DofMap& dofmap, const MethodConfig& config) {
  const Mesh& mesh = dofmap.mesh();
  const DomainGeometry& geom = dofmap.geometry();
  const auto& f = geom.solution().f;
  const detail::CellTable table = detail::tabulate_cell(dofmap.basis(), cell_exactness(dofmap.degree()));
  const int n = table.n;
  Vector b(static_cast<std::size_t>(dofmap.num_dofs()), 0.0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const AffineMap map = affine_map(mesh, t);
    const double jac = std::abs(map.det);
    const auto& tri = mesh.triangle(t);
    std::array<double, 3> fv{};
    if (config.f_extension == FExtension::linear_interpolant) {
      for (int v = 0; v < 3; ++v) fv[v] = f(mesh.vertex(tri[v]));
    }
    const auto dofs = dofmap.cell_dofs(t);
    for (std::size_t q = 0; q < table.rule.points.size(); ++q) {
      const Point& ref = table.rule.points[q];
      const Point x = map.map(ref);
      double fx;
      if (config.f_extension == FExtension::linear_interpolant && !geom.contains(x)) {
        fx = (1.0 - ref.x() - ref.y()) * fv[0] + ref.x() * fv[1] + ref.y() * fv[2];
      } else {
        fx = f(x);
      }
      const double w = table.rule.weights[q] * jac * fx;
      for (int i = 0; i < n; ++i) b[dofs[i]] += w * table.phi[q * n + i];
    }
  }
  return b;
}

LinearSystem assemble_plain_dirichlet(const DofMap& dofmap, const MethodConfig& config) {
  validate(config);
  LinearSystem s = start_system(dofmap, config);
  const auto& g = dofmap.geometry().solution().g;
  std::vector<std::pair<int, double>> constraints;
  for (int d : dofmap.boundary_dofs()) constraints.emplace_back(d, g(dofmap.support_point(d)));
  apply_constraints(s, std::move(constraints), true);
  s.matrix.set_symmetric(true);
  return s;
}

LinearSystem assemble_bdt(const DofMap& dofmap, const MethodConfig& config) {
  return assemble_nitsche(dofmap, config, false);
}

LinearSystem assemble_bdt_symmetric(const DofMap& dofmap, const MethodConfig& config) {
  return assemble_nitsche(dofmap, config, true);
}

LinearSystem assemble_robin_eps(const DofMap& dofmap, const MethodConfig& config) {
  validate(config);
  LinearSystem s = start_system(dofmap, config);
  const Mesh& mesh = dofmap.mesh();
  const auto& g = dofmap.geometry().solution().g;
  const int n = dofmap.num_local_dofs();
  const detail::EdgeTable table =
      detail::tabulate_edges(dofmap.basis(), boundary_points(dofmap.degree()));
  EdgeSample es;
  for (int e = 0; e < mesh.num_boundary_edges(); ++e) {
    if (!dofmap.decomposition().is_gamma(e)) continue;
    const BoundaryEdge& edge = mesh.boundary_edges()[e];
    detail::sample_boundary_edge(dofmap, table, e, es);
    const auto dofs = dofmap.cell_dofs(edge.owner);
    for (std::size_t q = 0; q < es.x.size(); ++q) {
      const double delta = signed_delta(dofmap.geometry(), es.x[q], edge.normal, reach(dofmap));
      const double sign = delta > 0.0 ? 1.0 : (delta < 0.0 ? -1.0 : 0.0);
      const double denom = config.epsilon * sign + delta;
      if (denom == 0.0) {
        throw GeometryError("boundary edge " + std::to_string(e) +
                            ": Robin weight denominator vanishes at a quadrature point");
      }
      const double w = es.weight[q] / denom;
      const double* phi = &es.phi[q * n];
      add_edge_block(s.matrix, dofs, n, [&](int i, int j) { return w * phi[i] * phi[j]; });
      const double gh = g(es.x[q] + delta * edge.normal);
      if (gh != 0.0) {
        for (int i = 0; i < n; ++i) s.rhs[dofs[i]] += w * gh * phi[i];
      }
    }
  }
  std::vector<std::pair<int, double>> constraints;
  for (int d : dofmap.gamma_zero_dofs()) constraints.emplace_back(d, g(dofmap.support_point(d)));
  apply_constraints(s, std::move(constraints), true);
  s.matrix.set_symmetric(true);
  return s;
}

LinearSystem assemble(const DofMap& dofmap, const MethodConfig& config) {
  switch (config.method) {
    case Method::plain: return assemble_plain_dirichlet(dofmap, config);
    case Method::bdt: return assemble_bdt(dofmap, config);
    case Method::robin: return assemble_robin_eps(dofmap, config);
    case Method::bdt_symmetric: return assemble_bdt_symmetric(dofmap, config);
  }
  throw std::logic_error("unknown method");
}

MethodSolution solve_method(std::shared_ptr<const DofMap> dofmap, const MethodConfig& config,
                            SolverKind solver) {
  LinearSystem system = assemble(*dofmap, config);
  const bool symmetric = system.matrix.symmetric();
  SolveResult report = solve(system, solver);
  FeFunction uh(std::move(dofmap), report.x);
  return {std::move(uh), std::move(report), symmetric};
}

}  // namespace curvefem
