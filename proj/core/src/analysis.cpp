#include "curvefem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "curvefem/errors.hpp"
#include "curvefem/format.hpp"
#include "tabulation.hpp"

namespace curvefem {

namespace {

void require_same_space(const FeFunction& a, const FeFunction& b) {
  if (a.dofmap_ptr() != b.dofmap_ptr()) {
    throw std::invalid_argument("functions are defined on different dofmaps");
  }
}

FeFunction difference(const FeFunction& a, const FeFunction& b) {
  require_same_space(a, b);
  std::vector<double> c(a.coefficients());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.coefficients()[i];
  return FeFunction(a.dofmap_ptr(), std::move(c));
}

struct NoReference {
  void operator()(const Point&, double& value, Point& gradient) const {
    value = 0.0;
    gradient.setZero();
  }
};

struct SolutionReference {
  const ManufacturedSolution& u;
  void operator()(const Point& x, double& value, Point& gradient) const {
    value = u.u(x);
    gradient = u.grad_u(x);
  }
};

// Squared L2 norm and H1 seminorm of v - ref over the polygon.
template <class Ref>
std::pair<double, double> cell_norms_squared(const FeFunction& v, int exactness, const Ref& ref) {
  const DofMap& dm = v.dofmap();
  const detail::CellTable table = detail::tabulate_cell(dm.basis(), exactness);
  const int n = table.n;
  double l2 = 0.0;
  double semi = 0.0;
  double ref_value = 0.0;
  Point ref_gradient = Point::Zero();
  for (int t = 0; t < dm.mesh().num_triangles(); ++t) {
    const AffineMap map = affine_map(dm.mesh(), t);
    const double jac = std::abs(map.det);
    const auto dofs = dm.cell_dofs(t);
    for (std::size_t q = 0; q < table.rule.points.size(); ++q) {
      double val = 0.0;
      Point ref_grad = Point::Zero();
      for (int i = 0; i < n; ++i) {
        const double c = v.coefficients()[dofs[i]];
        val += c * table.phi[q * n + i];
        ref_grad += c * table.dphi[q * n + i];
      }
      ref(map.map(table.rule.points[q]), ref_value, ref_gradient);
      const double w = table.rule.weights[q] * jac;
      val -= ref_value;
      l2 += w * val * val;
      semi += w * (map.physical_gradient(ref_grad) - ref_gradient).squaredNorm();
    }
  }
  return {l2, semi};
}

std::pair<double, double> cell_norms_squared(const FeFunction& v) {
  return cell_norms_squared(v, cell_exactness(v.dofmap().degree()), NoReference{});
}

// Calls fn(edge, weight, value, normal derivative, x) at the quadrature points
// of every boundary edge (only Gamma edges when gamma_only).
template <class Fn>
void for_each_boundary_point(const FeFunction& v, bool gamma_only, Fn&& fn) {
  const DofMap& dm = v.dofmap();
  const int n = dm.num_local_dofs();
  const detail::EdgeTable table = detail::tabulate_edges(dm.basis(), boundary_points(dm.degree()));
  detail::EdgeSample es;
  for (int e = 0; e < dm.mesh().num_boundary_edges(); ++e) {
    if (gamma_only && !dm.decomposition().is_gamma(e)) continue;
    const BoundaryEdge& edge = dm.mesh().boundary_edges()[e];
    detail::sample_boundary_edge(dm, table, e, es);
    const auto dofs = dm.cell_dofs(edge.owner);
    for (std::size_t q = 0; q < es.x.size(); ++q) {
      double val = 0.0;
      double dn = 0.0;
      for (int i = 0; i < n; ++i) {
        const double c = v.coefficients()[dofs[i]];
        val += c * es.phi[q * n + i];
        dn += c * es.dn[q * n + i];
      }
      fn(edge, es.weight[q], val, dn, es.x[q]);
    }
  }
}

template <class Ref>
double c_seminorm_squared(const FeFunction& v, const Ref& ref) {
  const DofMap& dm = v.dofmap();
  const double reach = 10.0 * dm.mesh().hmax();
  double sum = 0.0;
  double ref_value = 0.0;
  Point ref_gradient = Point::Zero();
  for_each_boundary_point(v, true, [&](const BoundaryEdge& edge, double w, double val, double,
                                       const Point& x) {
    const double delta = std::abs(signed_delta(dm.geometry(), x, edge.normal, reach));
    if (delta == 0.0) throw GeometryError("gap vanishes at a boundary quadrature point");
    ref(x, ref_value, ref_gradient);
    sum += w * (val - ref_value) * (val - ref_value) / delta;
  });
  return sum;
}

double c_seminorm_squared(const FeFunction& v) { return c_seminorm_squared(v, NoReference{}); }

}  // namespace

ErrorNorms error_norms(const FeFunction& uh, const FeFunction& ui) {
  const FeFunction e = difference(uh, ui);
  const auto [l2, semi] = cell_norms_squared(e);
  return {std::sqrt(l2), std::sqrt(l2 + semi), std::sqrt(c_seminorm_squared(e))};
}

ErrorNorms error_norms(const FeFunction& uh, const ManufacturedSolution& solution) {
  const SolutionReference ref{solution};
  const int exactness = std::max(cell_exactness(uh.dofmap().degree()), 12);
  const auto [l2, semi] = cell_norms_squared(uh, exactness, ref);
  return {std::sqrt(l2), std::sqrt(l2 + semi), std::sqrt(c_seminorm_squared(uh, ref))};
}

std::string to_string(ErrorReference reference) {
  return reference == ErrorReference::exact ? "exact" : "interpolant";
}

ErrorReference parse_error_reference(const std::string& name) {
  if (name == "exact") return ErrorReference::exact;
  if (name == "interpolant") return ErrorReference::interpolant;
  throw std::invalid_argument("unknown error reference '" + name + "' (expected exact|interpolant)");
}

double energy_norm(const FeFunction& v) { return std::sqrt(cell_norms_squared(v).second); }

double c_seminorm(const FeFunction& v) { return std::sqrt(c_seminorm_squared(v)); }

double triple_norm(const FeFunction& v) {
  double sum = cell_norms_squared(v).second;
  for_each_boundary_point(v, false, [&](const BoundaryEdge& edge, double w, double val, double dn,
                                        const Point&) {
    sum += w * (val * val / edge.length + edge.length * dn * dn);
  });
  return std::sqrt(sum);
}

double interior_error_ratio(const FeFunction& uh, const FeFunction& ui, double interior_radius) {
  require_same_space(uh, ui);
  const Mesh& mesh = uh.dofmap().mesh();
  double inner = 0.0;
  double global = 0.0;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const double err = std::abs(uh.coefficients()[v] - ui.coefficients()[v]);
    global = std::max(global, err);
    if (mesh.vertex(v).norm() < interior_radius) inner = std::max(inner, err);
  }
  return global == 0.0 ? 0.0 : inner / global;
}

void export_error_field(const FeFunction& uh, const FeFunction& ui, std::ostream& out) {
  require_same_space(uh, ui);
  const Mesh& mesh = uh.dofmap().mesh();
  out << "vertex,x,y,error\n";
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const Point& p = mesh.vertex(v);
    out << v << ',' << format_full(p.x()) << ',' << format_full(p.y()) << ','
        << format_full(uh.coefficients()[v] - ui.coefficients()[v]) << '\n';
  }
}

void export_error_field(const FeFunction& uh, const FeFunction& ui, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  export_error_field(uh, ui, out);
  if (!out) throw std::runtime_error("failed writing " + path);
}

void convergence_rates(std::vector<ConvergenceRecord>& records, std::vector<std::string>* warnings) {
  auto rate = [&](double e0, double e1, double h0, double h1, const char* column,
                  int M) -> std::optional<double> {
    if (!(e0 > 0.0) || !(e1 > 0.0)) {
      if (warnings) {
        warnings->push_back(std::string("non-positive ") + column + " error at M=" +
                            std::to_string(M) + "; rate omitted");
      }
      return std::nullopt;
    }
    return std::log(e0 / e1) / std::log(h0 / h1);
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& r = records[i];
    if (i == 0) {
      r.l2_rate = r.h1_rate = r.boundary_rate = std::nullopt;
      continue;
    }
    const auto& p = records[i - 1];
    r.l2_rate = rate(p.l2, r.l2, p.hmax, r.hmax, "l2", r.M);
    r.h1_rate = rate(p.h1, r.h1, p.hmax, r.hmax, "h1", r.M);
    r.boundary_rate = rate(p.boundary, r.boundary, p.hmax, r.hmax, "boundary", r.M);
  }
}

int default_outer_segments(DomainKind domain, int M) {
  return domain == DomainKind::annulus ? 4 * M : 5 * M;
}

int default_inner_segments(int M) { return 2 * M; }

Problem make_problem(const ProblemSpec& spec) {
  const int outer = spec.segs > 0 ? spec.segs : default_outer_segments(spec.domain, spec.M);
  switch (spec.domain) {
    case DomainKind::disc: {
      auto mesh = std::make_shared<const Mesh>(build_disc_mesh(spec.M, outer, spec.radius));
      return {DomainGeometry::disc(spec.radius), std::move(mesh), outer};
    }
    case DomainKind::annulus: {
      const int inner = spec.inner_segs > 0 ? spec.inner_segs : default_inner_segments(spec.M);
      auto mesh = std::make_shared<const Mesh>(
          build_annulus_mesh(spec.M, outer, inner, spec.inner_radius, spec.radius));
      return {DomainGeometry::annulus(spec.inner_radius, spec.radius), std::move(mesh), outer + inner};
    }
    case DomainKind::square: {
      auto mesh = std::make_shared<const Mesh>(build_square_mesh(spec.M, spec.radius));
      return {DomainGeometry::square(spec.radius), std::move(mesh), 4 * spec.M};
    }
  }
  throw std::logic_error("unknown domain");
}

SolveOutcome solve_and_measure(const Problem& problem, const MethodConfig& config, SolverKind solver,
                               ErrorReference reference) {
  auto dofmap = build_dofmap(problem.mesh, config.degree, problem.geometry);
  MethodSolution sol = solve_method(dofmap, config, solver);
  FeFunction ui = interpolate(problem.geometry.solution().u, dofmap);
  const ErrorNorms errors = reference == ErrorReference::exact
                                ? error_norms(sol.uh, problem.geometry.solution())
                                : error_norms(sol.uh, ui);
  return {std::move(sol), std::move(ui), errors, problem.mesh->hmax(), problem.segs};
}

std::vector<ConvergenceRecord> run_sweep(const SweepConfig& config, std::vector<std::string>* warnings) {
  if (config.m_list.empty()) throw std::invalid_argument("M list is empty");
  for (std::size_t i = 1; i < config.m_list.size(); ++i) {
    if (config.m_list[i] <= config.m_list[i - 1]) {
      throw std::invalid_argument("M list must be strictly increasing");
    }
  }
  validate(config.method);
  std::vector<ConvergenceRecord> records;
  for (int M : config.m_list) {
    ProblemSpec spec = config.problem;
    spec.M = M;
    try {
      const Problem problem = make_problem(spec);
      const SolveOutcome out = solve_and_measure(problem, config.method, config.solver, config.reference);
      ConvergenceRecord r;
      r.k = config.method.degree;
      r.M = M;
      r.hmax = out.hmax;
      r.segs = out.segs;
      r.l2 = out.errors.l2;
      r.h1 = out.errors.h1;
      r.boundary = out.errors.boundary;
      records.push_back(r);
    } catch (const SolverError& e) {
      throw SolverError("M=" + std::to_string(M) + ": " + e.what(), e.residual());
    } catch (const GeometryError& e) {
      throw GeometryError("M=" + std::to_string(M) + ": " + e.what());
    }
  }
  convergence_rates(records, warnings);
  return records;
}

namespace {

std::string opt_full(const std::optional<double>& v) { return v ? format_full(*v) : ""; }
std::string opt_rate(const std::optional<double>& v) { return v ? format_rate(*v) : "-"; }

}  // namespace

void write_records_csv(const std::vector<ConvergenceRecord>& records, std::ostream& out) {
  out << "k,M,hmax,segs,l2_err,l2_rate,h1_err,h1_rate,bdry_err,bdry_rate\n";
  for (const auto& r : records) {
    out << r.k << ',' << r.M << ',' << format_full(r.hmax) << ',' << r.segs << ','
        << format_full(r.l2) << ',' << opt_full(r.l2_rate) << ',' << format_full(r.h1) << ','
        << opt_full(r.h1_rate) << ',' << format_full(r.boundary) << ',' << opt_full(r.boundary_rate)
        << '\n';
  }
}

void write_records_markdown(const std::vector<ConvergenceRecord>& records, std::ostream& out) {
  out << "| k | M | hmax | segs | L2 err | rate | H1 err | rate | bdry err | rate |\n"
      << "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : records) {
    out << "| " << r.k << " | " << r.M << " | " << format_short(r.hmax) << " | " << r.segs << " | "
        << format_short(r.l2) << " | " << opt_rate(r.l2_rate) << " | " << format_short(r.h1) << " | "
        << opt_rate(r.h1_rate) << " | " << format_short(r.boundary) << " | "
        << opt_rate(r.boundary_rate) << " |\n";
  }
}

std::vector<EpsRecord> run_eps_sweep(const Problem& problem, MethodConfig config,
                                     const std::vector<double>& eps_list, SolverKind solver,
                                     ErrorReference reference) {
  if (eps_list.empty()) throw std::invalid_argument("epsilon list is empty");
  config.method = Method::robin;
  auto dofmap = build_dofmap(problem.mesh, config.degree, problem.geometry);
  const FeFunction ui = interpolate(problem.geometry.solution().u, dofmap);
  std::vector<EpsRecord> records;
  for (double eps : eps_list) {
    config.epsilon = eps;
    const MethodSolution sol = solve_method(dofmap, config, solver);
    records.push_back({eps, reference == ErrorReference::exact
                                ? error_norms(sol.uh, problem.geometry.solution())
                                : error_norms(sol.uh, ui)});
  }
  return records;
}

void write_eps_csv(const std::vector<EpsRecord>& records, int k, int M, std::ostream& out) {
  out << "k,M,eps,l2_err,h1_err,bdry_err\n";
  for (const auto& r : records) {
    out << k << ',' << M << ',' << format_full(r.epsilon) << ',' << format_full(r.errors.l2) << ','
        << format_full(r.errors.h1) << ',' << format_full(r.errors.boundary) << '\n';
  }
}

void write_eps_markdown(const std::vector<EpsRecord>& records, int k, int M, std::ostream& out) {
  out << "| k | M | eps | L2 err | H1 err | bdry err |\n|---|---|---|---|---|---|\n";
  for (const auto& r : records) {
    out << "| " << k << " | " << M << " | " << format_short(r.epsilon) << " | "
        << format_short(r.errors.l2) << " | " << format_short(r.errors.h1) << " | "
        << format_short(r.errors.boundary) << " |\n";
  }
}

}  // namespace curvefem
