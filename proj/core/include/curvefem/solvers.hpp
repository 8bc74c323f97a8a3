#pragma once

#include <span>
#include <string>

#include "curvefem/sparse_matrix.hpp"

namespace curvefem {

enum class SolverKind {
  automatic,  ///< sparse direct factorization, LDL^T for symmetric systems
  cg,         ///< Jacobi-preconditioned conjugate gradients
  gmres,      ///< restarted GMRES with ILU(0)
  direct,     ///< sparse LU
  dense_lu,   ///< dense LU with partial pivoting
};

struct SolveResult {
  Vector x;
  int iterations = 0;
  double residual = 0.0;  ///< ||Ax - b|| / ||b|| measured after the solve
  std::string method;
};

constexpr double kDefaultRelTol = 1e-12;

double relative_residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b);

/// Preconditioned CG. Throws SolverError after 20 n iterations without
/// reaching rel_tol.
SolveResult solve_spd(const SparseMatrix& a, std::span<const double> b,
                      double rel_tol = kDefaultRelTol);

/// GMRES(restart) right-preconditioned by ILU(0). When GMRES stalls and
/// n <= 2000 the system is solved by dense LU instead; otherwise throws
/// SolverError with the final residual.
SolveResult solve_general(const SparseMatrix& a, std::span<const double> b,
                          double rel_tol = kDefaultRelTol, int restart = 200);

/// Dense LU with partial pivoting. Throws SolverError on a singular matrix.
SolveResult solve_dense_lu(const SparseMatrix& a, std::span<const double> b);

/// Sparse direct factorization followed by up to three steps of iterative
/// refinement. `symmetric` selects LDL^T (falling back to LU if the
/// factorization fails).
SolveResult solve_direct(const SparseMatrix& a, std::span<const double> b, bool symmetric);

SolveResult solve(const LinearSystem& system, SolverKind kind);

SolverKind parse_solver_kind(const std::string& name);

}  // namespace curvefem
