#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "curvefem/fe_function.hpp"
#include "curvefem/methods.hpp"

namespace curvefem {

struct ErrorNorms {
  double l2 = 0.0;
  double h1 = 0.0;        ///< full H1 norm (L2 part included)
  double boundary = 0.0;  ///< | |delta|^{-1/2} (u_h - u_I) | in L2(Gamma)
};

/// Norms of u_h - u_I over the polygon. Throws std::invalid_argument if the
/// two functions live on different dofmaps.
ErrorNorms error_norms(const FeFunction& uh, const FeFunction& ui);

/// Norms of u_h - u against the closed-form solution, evaluated at the
/// quadrature points. The cell rule has exactness max(2k + 2, 12), exact for
/// the squared error of the polynomial test solutions.
ErrorNorms error_norms(const FeFunction& uh, const ManufacturedSolution& solution);

/// What the sweeps measure the discrete solution against.
enum class ErrorReference {
  exact,       ///< the closed-form solution u
  interpolant  ///< the Lagrange interpolant u_I of the same degree
};

std::string to_string(ErrorReference reference);
/// Accepts exact|interpolant.
ErrorReference parse_error_reference(const std::string& name);

/// sqrt(a_h(v, v)).
double energy_norm(const FeFunction& v);

/// sqrt(int_Gamma v^2 / |delta|), Gauss rule with k + 2 points per edge.
double c_seminorm(const FeFunction& v);

/// sqrt(a_h(v, v) + sum_e (h_e^{-1} int_e v^2 + h_e int_e (dv/dn)^2)) over all
/// boundary edges.
double triple_norm(const FeFunction& v);

/// max |u_h - u_I| over vertices with |x| < interior_radius divided by the max
/// over all vertices; 0 when the error vanishes.
double interior_error_ratio(const FeFunction& uh, const FeFunction& ui, double interior_radius);

/// Vertex CSV `vertex,x,y,error` with error = u_h - u_I.
void export_error_field(const FeFunction& uh, const FeFunction& ui, std::ostream& out);
void export_error_field(const FeFunction& uh, const FeFunction& ui, const std::string& path);

struct ConvergenceRecord {
  int k = 0;
  int M = 0;
  double hmax = 0.0;
  int segs = 0;
  double l2 = 0.0;
  double h1 = 0.0;
  double boundary = 0.0;
  std::optional<double> l2_rate;
  std::optional<double> h1_rate;
  std::optional<double> boundary_rate;
};

/// Fills the rate fields with log(e_prev / e_cur) / log(h_prev / h_cur). A
/// rate is left empty (with a line on `warnings`, if given) when either error
/// is not positive.
void convergence_rates(std::vector<ConvergenceRecord>& records,
                       std::vector<std::string>* warnings = nullptr);

/// Description of one mesh/geometry instance. Zero segment counts pick the
/// defaults: 5M on the disc, 4M outer and 2M inner on the annulus.
struct ProblemSpec {
  DomainKind domain = DomainKind::disc;
  int M = 16;
  double radius = 1.0;
  double inner_radius = 0.5;
  int segs = 0;
  int inner_segs = 0;
};

int default_outer_segments(DomainKind domain, int M);
int default_inner_segments(int M);

struct Problem {
  DomainGeometry geometry;
  std::shared_ptr<const Mesh> mesh;
  int segs = 0;  ///< boundary segments in total
};

Problem make_problem(const ProblemSpec& spec);

/// Solves one configuration and measures the error against `reference`. The
/// interpolant is returned in either case.
struct SolveOutcome {
  MethodSolution solution;
  FeFunction ui;
  ErrorNorms errors;
  double hmax = 0.0;
  int segs = 0;
};

SolveOutcome solve_and_measure(const Problem& problem, const MethodConfig& config,
                               SolverKind solver = SolverKind::automatic,
                               ErrorReference reference = ErrorReference::exact);

struct SweepConfig {
  MethodConfig method;
  ProblemSpec problem;  ///< M is overwritten from m_list
  std::vector<int> m_list;
  SolverKind solver = SolverKind::automatic;
  ErrorReference reference = ErrorReference::exact;
};

/// Throws std::invalid_argument for an empty or non-increasing M list and
/// rethrows solver failures with the offending M in the message.
std::vector<ConvergenceRecord> run_sweep(const SweepConfig& config,
                                         std::vector<std::string>* warnings = nullptr);

/// Header `k,M,hmax,segs,l2_err,l2_rate,h1_err,h1_rate,bdry_err,bdry_rate`.
void write_records_csv(const std::vector<ConvergenceRecord>& records, std::ostream& out);
void write_records_markdown(const std::vector<ConvergenceRecord>& records, std::ostream& out);

struct EpsRecord {
  double epsilon = 0.0;
  ErrorNorms errors;
};

std::vector<EpsRecord> run_eps_sweep(const Problem& problem, MethodConfig config,
                                     const std::vector<double>& eps_list,
                                     SolverKind solver = SolverKind::automatic,
                                     ErrorReference reference = ErrorReference::exact);

/// Header `k,M,eps,l2_err,h1_err,bdry_err`.
void write_eps_csv(const std::vector<EpsRecord>& records, int k, int M, std::ostream& out);
void write_eps_markdown(const std::vector<EpsRecord>& records, int k, int M, std::ostream& out);

}  // namespace curvefem
