#include "curvefem/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "curvefem/errors.hpp"

namespace curvefem {

namespace {

double dot(std::span<const double> x, std::span<const double> y) {
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

// Incomplete LU on the sparsity pattern of A. L has a unit diagonal and
// shares storage with U.
class Ilu0 {
 public:
  explicit Ilu0(const SparseMatrix& a)
      : n_(a.rows()),
        row_ptr_(a.row_ptr().begin(), a.row_ptr().end()),
        col_(a.col_idx().begin(), a.col_idx().end()),
        lu_(a.values().begin(), a.values().end()),
        diag_(static_cast<std::size_t>(n_), -1) {
    for (int i = 0; i < n_; ++i) {
      diag_[i] = a.find(i, i);
      if (diag_[i] < 0) throw SolverError("ILU(0): missing diagonal entry", 0.0);
    }
    std::vector<int> pos(static_cast<std::size_t>(n_), -1);
    for (int i = 0; i < n_; ++i) {
      for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) pos[col_[p]] = p;
      for (int p = row_ptr_[i]; p < row_ptr_[i + 1] && col_[p] < i; ++p) {
        const int k = col_[p];
        const double pivot = lu_[diag_[k]];
        if (pivot == 0.0) throw SolverError("ILU(0): zero pivot", 0.0);
        lu_[p] /= pivot;
        for (int q = diag_[k] + 1; q < row_ptr_[k + 1]; ++q) {
          const int target = pos[col_[q]];
          if (target >= 0) lu_[target] -= lu_[p] * lu_[q];
        }
      }
      for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) pos[col_[p]] = -1;
      if (lu_[diag_[i]] == 0.0) throw SolverError("ILU(0): zero pivot", 0.0);
    }
  }

  void apply(std::span<const double> r, std::span<double> z) const {
    for (int i = 0; i < n_; ++i) {
      double s = r[i];
      for (int p = row_ptr_[i]; p < diag_[i]; ++p) s -= lu_[p] * z[col_[p]];
      z[i] = s;
    }
    for (int i = n_ - 1; i >= 0; --i) {
      double s = z[i];
      for (int p = diag_[i] + 1; p < row_ptr_[i + 1]; ++p) s -= lu_[p] * z[col_[p]];
      z[i] = s / lu_[diag_[i]];
    }
  }

 private:
  int n_;
  std::vector<int> row_ptr_;
  std::vector<int> col_;
  std::vector<double> lu_;
  std::vector<int> diag_;
};

Eigen::SparseMatrix<double> to_eigen(const SparseMatrix& a) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(a.nnz()));
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (int i = 0; i < a.rows(); ++i) {
    for (int p = rp[i]; p < rp[i + 1]; ++p) t.emplace_back(i, ci[p], v[p]);
  }
  Eigen::SparseMatrix<double> m(a.rows(), a.rows());
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

template <typename Factorization>
SolveResult refine(const Factorization& factor, const SparseMatrix& a, std::span<const double> b,
                   std::string method) {
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), static_cast<Eigen::Index>(b.size()));
  Eigen::VectorXd x = factor.solve(rhs);
  SolveResult out;
  out.method = std::move(method);
  out.x.assign(x.data(), x.data() + x.size());
  out.residual = relative_residual(a, out.x, b);
  for (int step = 0; step < 3 && out.residual > kDefaultRelTol; ++step) {
    const Vector ax = a * out.x;
    Eigen::VectorXd r(rhs.size());
    for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = b[i] - ax[i];
    const Eigen::VectorXd dx = factor.solve(r);
    Vector candidate = out.x;
    for (Eigen::Index i = 0; i < dx.size(); ++i) candidate[i] += dx[i];
    const double res = relative_residual(a, candidate, b);
    if (!(res < out.residual)) break;
    out.x = std::move(candidate);
    out.residual = res;
    ++out.iterations;
  }
  return out;
}

}  // namespace

double relative_residual(const SparseMatrix& a, std::span<const double> x, std::span<const double> b) {
  Vector r = a * x;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  const double nb = norm(b);
  return nb == 0.0 ? norm(r) : norm(r) / nb;
}

SolveResult solve_spd(const SparseMatrix& a, std::span<const double> b, double rel_tol) {
  const int n = a.rows();
  SolveResult out;
  out.method = "cg-jacobi";
  out.x.assign(static_cast<std::size_t>(n), 0.0);
  const double nb = norm(b);
  if (nb == 0.0) return out;

  Vector inv_diag = a.diagonal();
  for (double& d : inv_diag) {
    if (!(d > 0.0)) throw SolverError("CG: matrix has a non-positive diagonal entry", 1.0);
    d = 1.0 / d;
  }
  Vector r(b.begin(), b.end());
  Vector z(static_cast<std::size_t>(n));
  Vector p(static_cast<std::size_t>(n));
  Vector ap(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);
  const int max_iter = 20 * n;
  for (int it = 1; it <= max_iter; ++it) {
    a.multiply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) throw SolverError("CG: matrix is not positive definite", norm(r) / nb);
    const double alpha = rz / pap;
    for (int i = 0; i < n; ++i) {
      out.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    out.iterations = it;
    if (norm(r) / nb <= rel_tol) {
      out.residual = relative_residual(a, out.x, b);
      if (out.residual <= rel_tol) return out;
      // recurrence drifted; restart from the true residual
      a.multiply(out.x, ap);
      for (int i = 0; i < n; ++i) r[i] = b[i] - ap[i];
    }
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  out.residual = relative_residual(a, out.x, b);
  throw SolverError("CG did not converge in " + std::to_string(max_iter) +
                        " iterations (relative residual " + std::to_string(out.residual) + ")",
                    out.residual);
}

SolveResult solve_general(const SparseMatrix& a, std::span<const double> b, double rel_tol,
                          int restart) {
  const int n = a.rows();
  SolveResult out;
  out.method = "gmres-ilu0";
  out.x.assign(static_cast<std::size_t>(n), 0.0);
  const double nb = norm(b);
  if (nb == 0.0) return out;

  const auto fallback = [&](const std::string& why, double residual) -> SolveResult {
    if (n <= 2000) {
      SolveResult dense = solve_dense_lu(a, b);
      dense.method = "dense-lu (gmres fallback: " + why + ")";
      return dense;
    }
    throw SolverError("GMRES failed: " + why, residual);
  };

  std::optional<Ilu0> ilu;
  try {
    ilu.emplace(a);
  } catch (const SolverError& e) {
    return fallback(e.what(), 1.0);
  }

  const int m = std::max(1, std::min(restart, n));
  const int max_iter = std::min(20 * n, 50 * m);
  std::vector<Vector> v(static_cast<std::size_t>(m) + 1, Vector(static_cast<std::size_t>(n)));
  std::vector<Vector> h(static_cast<std::size_t>(m) + 1, Vector(static_cast<std::size_t>(m), 0.0));
  Vector cs(static_cast<std::size_t>(m));
  Vector sn(static_cast<std::size_t>(m));
  Vector g(static_cast<std::size_t>(m) + 1);
  Vector w(static_cast<std::size_t>(n));
  Vector z(static_cast<std::size_t>(n));

  double residual = 1.0;
  int total = 0;
  while (total < max_iter) {
    Vector r = a * out.x;
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    const double beta = norm(r);
    residual = beta / nb;
    if (residual <= rel_tol) break;
    for (int i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    int j = 0;
    for (; j < m && total < max_iter; ++j, ++total) {
      ilu->apply(v[j], z);
      a.multiply(z, w);
      for (int i = 0; i <= j; ++i) {
        h[i][j] = dot(w, v[i]);
        for (int l = 0; l < n; ++l) w[l] -= h[i][j] * v[i][l];
      }
      h[j + 1][j] = norm(w);
      if (h[j + 1][j] != 0.0) {
        for (int l = 0; l < n; ++l) v[j + 1][l] = w[l] / h[j + 1][j];
      }
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * h[i][j] + sn[i] * h[i + 1][j];
        h[i + 1][j] = -sn[i] * h[i][j] + cs[i] * h[i + 1][j];
        h[i][j] = t;
      }
      const double denom = std::hypot(h[j][j], h[j + 1][j]);
      if (denom == 0.0) return fallback("breakdown", residual);
      cs[j] = h[j][j] / denom;
      sn[j] = h[j + 1][j] / denom;
      h[j][j] = denom;
      h[j + 1][j] = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      if (std::abs(g[j + 1]) / nb <= 0.1 * rel_tol) {
        ++j;
        ++total;
        break;
      }
    }
    // back substitution for the Krylov coefficients, then x += M^{-1} V y
    Vector y(static_cast<std::size_t>(j), 0.0);
    for (int i = j - 1; i >= 0; --i) {
      double s = g[i];
      for (int l = i + 1; l < j; ++l) s -= h[i][l] * y[l];
      y[i] = s / h[i][i];
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (int i = 0; i < j; ++i) {
      for (int l = 0; l < n; ++l) w[l] += y[i] * v[i][l];
    }
    ilu->apply(w, z);
    for (int l = 0; l < n; ++l) out.x[l] += z[l];
  }
  out.iterations = total;
  out.residual = relative_residual(a, out.x, b);
  if (out.residual > rel_tol) return fallback("no convergence", out.residual);
  return out;
}

SolveResult solve_dense_lu(const SparseMatrix& a, std::span<const double> b) {
  const int n = a.rows();
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto vals = a.values();
  for (int i = 0; i < n; ++i) {
    for (int p = rp[i]; p < rp[i + 1]; ++p) m[static_cast<std::size_t>(i) * n + ci[p]] = vals[p];
  }
  const auto at = [&](int i, int j) -> double& { return m[static_cast<std::size_t>(i) * n + j]; };
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(at(i, k)) > std::abs(at(pivot, k))) pivot = i;
    }
    if (at(pivot, k) == 0.0) throw SolverError("dense LU: matrix is singular", 1.0);
    if (pivot != k) {
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(pivot, j));
      std::swap(perm[k], perm[pivot]);
    }
    const double inv = 1.0 / at(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double f = at(i, k) * inv;
      if (f == 0.0) continue;
      at(i, k) = f;
      for (int j = k + 1; j < n; ++j) at(i, j) -= f * at(k, j);
    }
  }
  SolveResult out;
  out.method = "dense-lu";
  out.x.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double s = b[perm[i]];
    for (int j = 0; j < i; ++j) s -= at(i, j) * out.x[j];
    out.x[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = out.x[i];
    for (int j = i + 1; j < n; ++j) s -= at(i, j) * out.x[j];
    out.x[i] = s / at(i, i);
  }
  out.residual = relative_residual(a, out.x, b);
  return out;
}

SolveResult solve_direct(const SparseMatrix& a, std::span<const double> b, bool symmetric) {
  const Eigen::SparseMatrix<double> m = to_eigen(a);
  if (symmetric) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt(m);
    if (ldlt.info() == Eigen::Success) {
      SolveResult out = refine(ldlt, a, b, "direct-ldlt");
      if (out.residual <= 1e-8) return out;
    }
  }
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(m);
  lu.factorize(m);
  if (lu.info() != Eigen::Success) throw SolverError("sparse LU failed: " + lu.lastErrorMessage(), 1.0);
  return refine(lu, a, b, "direct-lu");
}

SolveResult solve(const LinearSystem& system, SolverKind kind) {
  const SparseMatrix& a = system.matrix;
  switch (kind) {
    case SolverKind::automatic:
      return solve_direct(a, system.rhs, a.symmetric());
    case SolverKind::cg:
      return solve_spd(a, system.rhs);
    case SolverKind::gmres:
      return solve_general(a, system.rhs);
    case SolverKind::direct:
      return solve_direct(a, system.rhs, false);
    case SolverKind::dense_lu:
      return solve_dense_lu(a, system.rhs);
  }
  throw std::logic_error("unknown solver kind");
}

SolverKind parse_solver_kind(const std::string& name) {
  if (name == "auto") return SolverKind::automatic;
  if (name == "cg") return SolverKind::cg;
  if (name == "gmres") return SolverKind::gmres;
  if (name == "direct") return SolverKind::direct;
  if (name == "dense") return SolverKind::dense_lu;
  throw std::invalid_argument("unknown solver '" + name + "' (auto|cg|gmres|direct|dense)");
}

}  // namespace curvefem
