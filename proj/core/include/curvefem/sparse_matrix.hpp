#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace curvefem {

using Vector = std::vector<double>;

struct Triplet {
  int row;
  int col;
  double value;
};

/// Square matrix in compressed-row storage with sorted, unique column indices
/// per row.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Matrix with the given sparsity pattern and zero values. Column lists
  /// need not be sorted or unique.
  static SparseMatrix from_pattern(int n, const std::vector<std::vector<int>>& row_columns);
  /// Duplicate entries are summed.
  static SparseMatrix from_triplets(int n, std::vector<Triplet> triplets);
  static SparseMatrix identity(int n);

  int rows() const { return n_; }
  int nnz() const { return static_cast<int>(values_.size()); }

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Position of (i, j) in values(), or -1 if outside the pattern.
  int find(int i, int j) const;
  /// Adds to an entry inside the pattern; throws std::out_of_range otherwise.
  void add(int i, int j, double v);
  /// Entry value, zero outside the pattern.
  double at(int i, int j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;
  Vector diagonal() const;

  /// Structural claim set by the assembler; verify with check_symmetry().
  bool symmetric() const { return symmetric_; }
  void set_symmetric(bool s) { symmetric_ = s; }

 private:
  int n_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
  bool symmetric_ = false;
};

/// max |A_ij - A_ji| / max |A_ij|; zero for the zero matrix.
double check_symmetry(const SparseMatrix& a);

/// Assembled system with strongly imposed values.
struct LinearSystem {
  SparseMatrix matrix;
  Vector rhs;
  std::vector<std::pair<int, double>> constrained;  ///< (dof, value)
};

/// Replaces constrained rows by identity rows with the prescribed value on the
/// right-hand side. With `symmetric_elimination` the constrained columns are
/// also zeroed and moved to the right-hand side so that a symmetric matrix
/// stays symmetric.
void apply_constraints(LinearSystem& system, std::vector<std::pair<int, double>> constraints,
                       bool symmetric_elimination);

/// Coordinate dump: one `i j value` line per stored entry.
void write_coordinate(const SparseMatrix& a, std::ostream& out);

}  // namespace curvefem
