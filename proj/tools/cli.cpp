#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "curvefem/analysis.hpp"
#include "curvefem/errors.hpp"
#include "curvefem/format.hpp"
#include "curvefem/geometry.hpp"
#include "curvefem/mesh.hpp"
#include "curvefem/methods.hpp"
#include "curvefem/solvers.hpp"

namespace curvefem::cli {

namespace {

constexpr int kUsageError = 2;
constexpr int kFailure = 1;

// Flag combinations that CLI11 cannot express on its own.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DomainFlags {
  std::string domain = "disc";
  double radius = 1.0;
  double inner_radius = 0.5;
  int segs = 0;
  int inner_segs = 0;
  int M = 0;
};

struct MethodFlags {
  std::string method = "robin";
  int k = 2;
  double gamma = 100.0;
  double eps = 1e-13;
  std::string f_ext = "analytic";
  std::string solver = "auto";
  std::string error_ref = "exact";
  CLI::Option* gamma_opt = nullptr;
  CLI::Option* eps_opt = nullptr;
};

struct OutputFlags {
  std::string path;
  std::string format = "csv";
};

void add_domain_flags(CLI::App* cmd, DomainFlags& f) {
  cmd->add_option("--domain", f.domain, "disc or annulus")
      ->check(CLI::IsMember({"disc", "annulus"}))
      ->capture_default_str();
  cmd->add_option("--radius", f.radius, "Outer radius")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--inner-radius", f.inner_radius, "Inner radius of the annulus")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--segs,--outer-segs", f.segs, "Boundary segments (outer circle); default 5M disc, 4M annulus")
      ->check(CLI::Range(3, 1 << 24));
  cmd->add_option("--inner-segs", f.inner_segs, "Inner circle segments; default 2M")
      ->check(CLI::Range(3, 1 << 24));
}

void add_method_flags(CLI::App* cmd, MethodFlags& f, bool with_method) {
  if (with_method) {
    cmd->add_option("--method", f.method, "plain, bdt, robin or bdt-sym")
        ->check(CLI::IsMember({"plain", "bdt", "robin", "bdt-sym"}))
        ->capture_default_str();
    f.gamma_opt = cmd->add_option("--gamma", f.gamma, "Nitsche penalty (bdt, bdt-sym)")->check(CLI::PositiveNumber);
  }
  cmd->add_option("--k", f.k, "Polynomial degree")->check(CLI::Range(1, kMaxDegree))->capture_default_str();
  f.eps_opt = cmd->add_option("--eps", f.eps, "Robin regulariser (robin only)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--f-ext", f.f_ext, "Load extension outside the domain: analytic or p1")
      ->check(CLI::IsMember({"analytic", "p1"}))
      ->capture_default_str();
  cmd->add_option("--solver", f.solver, "auto, cg, gmres, direct or dense")
      ->check(CLI::IsMember({"auto", "cg", "gmres", "direct", "dense"}))
      ->capture_default_str();
  cmd->add_option("--error-ref", f.error_ref, "Error reference: exact or interpolant")
      ->check(CLI::IsMember({"exact", "interpolant"}))
      ->capture_default_str();
}

void add_output_flags(CLI::App* cmd, OutputFlags& f) {
  cmd->add_option("-o,--output", f.path, "Output file (default: stdout)");
  cmd->add_option("--format", f.format, "csv or markdown")
      ->check(CLI::IsMember({"csv", "markdown"}))
      ->capture_default_str();
}

MethodConfig method_config(const MethodFlags& f) {
  MethodConfig c;
  c.method = parse_method(f.method);
  c.degree = f.k;
  c.gamma = f.gamma;
  c.epsilon = f.eps;
  c.f_extension = parse_f_extension(f.f_ext);
  const bool nitsche = c.method == Method::bdt || c.method == Method::bdt_symmetric;
  if (f.gamma_opt && f.gamma_opt->count() > 0 && !nitsche) {
    throw UsageError("--gamma only applies to --method bdt or bdt-sym");
  }
  if (f.eps_opt && f.eps_opt->count() > 0 && c.method != Method::robin) {
    throw UsageError("--eps only applies to --method robin");
  }
  return c;
}

ProblemSpec problem_spec(const DomainFlags& f) {
  ProblemSpec p;
  p.domain = f.domain == "annulus" ? DomainKind::annulus : DomainKind::disc;
  p.M = f.M;
  p.radius = f.radius;
  p.inner_radius = f.inner_radius;
  p.segs = f.segs;
  p.inner_segs = f.inner_segs;
  if (p.domain == DomainKind::annulus && !(p.inner_radius < p.radius)) {
    throw UsageError("--inner-radius must be smaller than --radius");
  }
  if (p.domain == DomainKind::disc && f.inner_segs > 0) {
    throw UsageError("--inner-segs only applies to --domain annulus");
  }
  return p;
}

// Relative paths land in $CURVEFEM_OUTPUT_DIR when it is set.
std::string resolve_output(const std::string& path) {
  if (path.empty()) return path;
  const char* dir = std::getenv("CURVEFEM_OUTPUT_DIR");
  const std::filesystem::path p(path);
  if (dir == nullptr || *dir == '\0' || p.is_absolute()) return path;
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / p).string();
}

// Either the given stream or a file opened for writing.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty()) return;
    path_ = resolve_output(path);
    file_ = std::make_unique<std::ofstream>(path_);
    if (!*file_) throw std::runtime_error("cannot open " + path_ + " for writing");
    stream_ = file_.get();
  }
  std::ostream& stream() { return *stream_; }
  const std::string& path() const { return path_; }
  void close() {
    if (!file_) return;
    file_->close();
    if (!*file_) throw std::runtime_error("failed writing " + path_);
  }

 private:
  std::ostream* stream_;
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

int cmd_mesh(const DomainFlags& d, const std::string& output, std::ostream& out) {
  const ProblemSpec spec = problem_spec(d);
  const Problem problem = make_problem(spec);
  const MeshStats s = mesh_stats(*problem.mesh);
  const std::string path =
      output.empty() ? d.domain + "_M" + std::to_string(d.M) + ".mesh" : output;
  Sink sink(path, out);
  write_mesh(*problem.mesh, sink.stream());
  sink.close();
  out << "domain=" << d.domain << " M=" << d.M << " vertices=" << problem.mesh->num_vertices()
      << " triangles=" << problem.mesh->num_triangles() << '\n';
  out << "hmax=" << format_short(s.hmax) << " hmin=" << format_short(s.hmin)
      << " segments=" << s.n_boundary_segments;
  if (spec.domain == DomainKind::annulus) {
    const int outer = spec.segs > 0 ? spec.segs : default_outer_segments(spec.domain, spec.M);
    out << " (outer " << outer << ", inner " << s.n_boundary_segments - outer << ')';
  }
  out << " min_angle=" << format_short(s.min_angle) << '\n';
  const auto violations = validate_mesh(*problem.mesh, problem.geometry);
  for (const auto& v : violations) out << "violation: " << v << '\n';
  out << "wrote " << sink.path() << '\n';
  return 0;
}

int cmd_solve(const DomainFlags& d, const MethodFlags& m, const std::string& field_path,
              const std::string& matrix_path, const std::string& solution_path, std::ostream& out) {
  const MethodConfig config = method_config(m);
  validate(config);
  const Problem problem = make_problem(problem_spec(d));
  const SolverKind solver = parse_solver_kind(m.solver);
  if (!matrix_path.empty()) {
    auto dofmap = build_dofmap(problem.mesh, config.degree, problem.geometry);
    Sink sink(matrix_path, out);
    write_coordinate(assemble(*dofmap, config).matrix, sink.stream());
    sink.close();
    out << "wrote matrix " << sink.path() << '\n';
  }
  const SolveOutcome r = solve_and_measure(problem, config, solver, parse_error_reference(m.error_ref));
  out << "method=" << to_string(config.method) << " k=" << config.degree << " M=" << d.M
      << " hmax=" << format_short(r.hmax) << " segs=" << r.segs
      << " dofs=" << r.solution.uh.dofmap().num_dofs() << '\n';
  out << "solver=" << r.solution.report.method << " symmetric=" << (r.solution.symmetric ? "yes" : "no")
      << " iterations=" << r.solution.report.iterations
      << " residual=" << format_short(r.solution.report.residual) << '\n';
  out << "L2=" << format_short(r.errors.l2) << " H1=" << format_short(r.errors.h1)
      << " bdry=" << format_short(r.errors.boundary) << '\n';
  if (!field_path.empty()) {
    Sink sink(field_path, out);
    export_error_field(r.solution.uh, r.ui, sink.stream());
    sink.close();
    out << "wrote error field " << sink.path() << '\n';
  }
  if (!solution_path.empty()) {
    Sink sink(solution_path, out);
    write_csv(r.solution.uh, sink.stream());
    sink.close();
    out << "wrote solution " << sink.path() << '\n';
  }
  return 0;
}

int cmd_sweep(const DomainFlags& d, const MethodFlags& m, const std::vector<int>& m_list,
              const OutputFlags& o, std::ostream& out, std::ostream& err) {
  SweepConfig sc;
  sc.method = method_config(m);
  sc.problem = problem_spec(d);
  sc.m_list = m_list;
  sc.solver = parse_solver_kind(m.solver);
  sc.reference = parse_error_reference(m.error_ref);
  if (m_list.empty()) throw UsageError("--M-list must not be empty");
  for (std::size_t i = 1; i < m_list.size(); ++i) {
    if (m_list[i] <= m_list[i - 1]) throw UsageError("--M-list must be strictly increasing");
  }
  std::vector<std::string> warnings;
  const auto records = run_sweep(sc, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  Sink sink(o.path, out);
  if (o.format == "markdown") {
    write_records_markdown(records, sink.stream());
  } else {
    write_records_csv(records, sink.stream());
  }
  sink.close();
  return 0;
}

std::vector<double> parse_eps_list(const std::vector<std::string>& items) {
  std::vector<double> values;
  for (const auto& item : items) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw UsageError("--eps-list: '" + item + "' is not a number");
    values.push_back(v);
  }
  return values;
}

int cmd_eps_sweep(const DomainFlags& d, const MethodFlags& m, const std::vector<double>& eps_list,
                  const OutputFlags& o, std::ostream& out) {
  if (eps_list.empty()) throw UsageError("--eps-list must not be empty");
  for (double e : eps_list) {
    if (!(e >= 0.0)) throw UsageError("--eps-list entries must be non-negative");
  }
  MethodFlags robin = m;
  robin.method = "robin";
  const MethodConfig config = method_config(robin);
  const Problem problem = make_problem(problem_spec(d));
  const auto records = run_eps_sweep(problem, config, eps_list, parse_solver_kind(m.solver),
                                     parse_error_reference(m.error_ref));
  Sink sink(o.path, out);
  if (o.format == "markdown") {
    write_eps_markdown(records, config.degree, d.M, sink.stream());
  } else {
    write_eps_csv(records, config.degree, d.M, sink.stream());
  }
  sink.close();
  return 0;
}

struct CheckResult {
  bool classified = false;
  std::string failure;
  BoundaryDecomposition decomposition;
  double beta = 0.0;
};

CheckResult check_mesh(const Mesh& mesh, const DomainGeometry& geometry) {
  CheckResult r;
  try {
    r.decomposition = classify_boundary(mesh, geometry);
    r.classified = true;
    r.beta = check_assumption1(mesh, geometry);
  } catch (const GeometryError& e) {
    r.failure = e.what();
  }
  return r;
}

int cmd_check(const DomainFlags& d, const std::string& fixture, std::ostream& out) {
  ProblemSpec spec = problem_spec(d);
  if (!fixture.empty() && spec.domain != DomainKind::disc) {
    throw UsageError("--fixture tangent requires --domain disc");
  }
  auto build = [&](int M) -> Problem {
    if (fixture.empty()) {
      ProblemSpec s = spec;
      s.M = M;
      if (s.segs > 0) s.segs *= M / spec.M;
      if (s.inner_segs > 0) s.inner_segs *= M / spec.M;
      return make_problem(s);
    }
    auto mesh = std::make_shared<const Mesh>(build_tangent_fixture(M, spec.radius));
    return {DomainGeometry::disc(spec.radius), mesh, mesh->num_boundary_edges()};
  };
  const Problem coarse = build(spec.M);
  const Problem fine = build(2 * spec.M);
  const CheckResult a = check_mesh(*coarse.mesh, coarse.geometry);
  const CheckResult b = check_mesh(*fine.mesh, fine.geometry);

  out << "domain=" << d.domain << (fixture.empty() ? "" : " fixture=" + fixture) << " M=" << spec.M
      << " hmax=" << format_short(coarse.mesh->hmax()) << '\n';
  const auto violations = validate_mesh(*coarse.mesh, coarse.geometry);
  out << "mesh: " << violations.size() << " violation(s)" << '\n';
  for (const auto& v : violations) out << "  " << v << '\n';
  if (!a.classified) {
    out << "Assumption 2: FAIL (" << a.failure << ")\n";
    out << "Assumption 1: FAIL (boundary not classified)\n";
    return 0;
  }
  out << "Assumption 2: gamma+=" << a.decomposition.gamma_plus.size()
      << " gamma-=" << a.decomposition.gamma_minus.size()
      << " gamma0=" << a.decomposition.gamma_zero.size() << ", PASS\n";
  const bool stable = b.classified && std::isfinite(a.beta) && std::isfinite(b.beta) &&
                      b.beta <= 1.5 * a.beta;
  out << "Assumption 1: beta=" << format_short(a.beta) << " (M=" << 2 * spec.M << ": "
      << (b.classified ? format_short(b.beta) : std::string("n/a")) << "), "
      << (stable ? "PASS" : "FAIL") << '\n';
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Poisson on curved domains approximated by polygons"};
  app.name("curvefem");
  app.set_config("--config", "", "Read options from a TOML/INI file; flags win");
  app.require_subcommand(1);

  DomainFlags dom;
  MethodFlags solve_met;
  MethodFlags sweep_met;
  MethodFlags eps_met;
  OutputFlags outf;
  std::string mesh_out;
  std::string field_path;
  std::string matrix_path;
  std::string solution_path;
  std::vector<int> m_list;
  std::vector<std::string> eps_list;
  std::string fixture;

  CLI::App* mesh = app.add_subcommand("mesh", "Generate a mesh and print its statistics");
  add_domain_flags(mesh, dom);
  mesh->add_option("--M", dom.M, "Refinement parameter")->required()->check(CLI::PositiveNumber);
  mesh->add_option("-o,--output", mesh_out, "Mesh file (default <domain>_M<M>.mesh)");

  CLI::App* solve = app.add_subcommand("solve", "Solve once and report the errors");
  add_domain_flags(solve, dom);
  add_method_flags(solve, solve_met, true);
  solve->add_option("--M", dom.M, "Refinement parameter")->required()->check(CLI::PositiveNumber);
  solve->add_option("--export-field", field_path, "Write the vertex error field as CSV");
  solve->add_option("--dump-matrix", matrix_path, "Write the system matrix as `i j value` lines");
  solve->add_option("-o,--output", solution_path, "Write the solution coefficients as CSV");

  CLI::App* sweep = app.add_subcommand("sweep", "Convergence study over a list of M");
  add_domain_flags(sweep, dom);
  add_method_flags(sweep, sweep_met, true);
  add_output_flags(sweep, outf);
  sweep->add_option("--M-list", m_list, "Comma-separated, strictly increasing")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);

  CLI::App* eps = app.add_subcommand("eps-sweep", "Robin solves over a list of epsilon");
  add_domain_flags(eps, dom);
  add_method_flags(eps, eps_met, false);
  add_output_flags(eps, outf);
  eps->add_option("--M", dom.M, "Refinement parameter")->required()->check(CLI::PositiveNumber);
  eps->add_option("--eps-list", eps_list, "Comma-separated epsilon values")->required()->delimiter(',');

  CLI::App* check = app.add_subcommand("check", "Check the boundary assumptions at M and 2M");
  add_domain_flags(check, dom);
  check->add_option("--M", dom.M, "Refinement parameter")->required()->check(CLI::PositiveNumber);
  check->add_option("--fixture", fixture, "Replace the mesh by a test fixture")
      ->check(CLI::IsMember({"tangent"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  try {
    if (*mesh) return cmd_mesh(dom, mesh_out, out);
    if (*solve) return cmd_solve(dom, solve_met, field_path, matrix_path, solution_path, out);
    if (*sweep) return cmd_sweep(dom, sweep_met, m_list, outf, out, err);
    if (*eps) return cmd_eps_sweep(dom, eps_met, parse_eps_list(eps_list), outf, out);
    if (*check) return cmd_check(dom, fixture, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsageError;
}

}  // namespace curvefem::cli
