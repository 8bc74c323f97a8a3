#pragma once

#include <memory>
#include <string>

#include "curvefem/dofmap.hpp"
#include "curvefem/fe_function.hpp"
#include "curvefem/solvers.hpp"
#include "curvefem/sparse_matrix.hpp"

namespace curvefem {

enum class Method {
  plain,          ///< polygonal Dirichlet: u_h = g_I on the whole polygon boundary
  bdt,            ///< Bramble-Dupont-Thomee correction of Nitsche's method (nonsymmetric)
  robin,          ///< epsilon-regularised symmetric Robin-type correction
  bdt_symmetric,  ///< symmetrised BDT form
};

/// How the load is extended to the part of the polygon outside the domain.
enum class FExtension {
  analytic,           ///< evaluate the closed-form f everywhere
  linear_interpolant  ///< P1 interpolant of f on triangles, used outside the domain
};

struct MethodConfig {
  Method method = Method::robin;
  int degree = 2;
  double gamma = 100.0;    ///< Nitsche penalty (bdt, bdt_symmetric)
  double epsilon = 1e-13;  ///< regulariser of the Robin weight
  FExtension f_extension = FExtension::analytic;
};

std::string to_string(Method method);
/// Accepts plain|bdt|robin|bdt-sym.
Method parse_method(const std::string& name);
std::string to_string(FExtension extension);
/// Accepts analytic|p1.
FExtension parse_f_extension(const std::string& name);

/// Throws std::invalid_argument when gamma/epsilon are out of range for the
/// chosen method or the degree is unsupported.
void validate(const MethodConfig& config);

/// All couplings between dofs of a common triangle, zero valued.
SparseMatrix sparsity_pattern(const DofMap& dofmap);

/// a_h(u, v) = integral of grad u . grad v over the polygon.
SparseMatrix assemble_stiffness(const DofMap& dofmap);

/// Entries integral of F phi_i over the polygon.
Vector assemble_load(const DofMap& dofmap, const MethodConfig& config);

/// Standard Galerkin system with every boundary dof fixed to g at its node.
LinearSystem assemble_plain_dirichlet(const DofMap& dofmap, const MethodConfig& config);

/// N_h(u, v) = a_h(u, v) - int u_n v - int (u + delta u_n)(v_n - gamma/h_e v)
/// over all boundary edges; h_e is the local edge length. Homogeneous data.
LinearSystem assemble_bdt(const DofMap& dofmap, const MethodConfig& config);

/// b_h(u, v) = a_h(u, v) + int_Gamma (eps sign(delta) + delta)^{-1} u v with
/// the matching transported-data term on the right; Gamma^0 dofs fixed to g.
/// Throws GeometryError naming the edge if the weight's denominator vanishes
/// at a quadrature point.
LinearSystem assemble_robin_eps(const DofMap& dofmap, const MethodConfig& config);

/// M_h(u, v) = a_h + int (gamma delta/h_e - 1)(delta u_n v_n + u_n v + v_n u)
///             + gamma/h_e int u v.
LinearSystem assemble_bdt_symmetric(const DofMap& dofmap, const MethodConfig& config);

LinearSystem assemble(const DofMap& dofmap, const MethodConfig& config);

/// Assembles, solves and wraps the solution.
struct MethodSolution {
  FeFunction uh;
  SolveResult report;
  bool symmetric = false;
};

MethodSolution solve_method(std::shared_ptr<const DofMap> dofmap, const MethodConfig& config,
                            SolverKind solver = SolverKind::automatic);

/// Number of Gauss points used on every boundary edge for degree k.
inline int boundary_points(int degree) { return degree + 2; }
/// Exactness of the triangle rule used for stiffness, mass and load.
inline int cell_exactness(int degree) { return 2 * degree + 2; }

}  // namespace curvefem
