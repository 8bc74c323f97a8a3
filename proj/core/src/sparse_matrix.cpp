#include "curvefem/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "curvefem/format.hpp"

namespace curvefem {

SparseMatrix SparseMatrix::from_pattern(int n, const std::vector<std::vector<int>>& row_columns) {
  if (static_cast<int>(row_columns.size()) != n) throw std::invalid_argument("pattern size mismatch");
  SparseMatrix a;
  a.n_ = n;
  a.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> cols;
  for (int i = 0; i < n; ++i) {
    cols = row_columns[i];
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    for (int c : cols) {
      if (c < 0 || c >= n) throw std::out_of_range("pattern column out of range");
    }
    a.col_idx_.insert(a.col_idx_.end(), cols.begin(), cols.end());
    a.row_ptr_[i + 1] = static_cast<int>(a.col_idx_.size());
  }
  a.values_.assign(a.col_idx_.size(), 0.0);
  return a;
}

SparseMatrix SparseMatrix::from_triplets(int n, std::vector<Triplet> triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& x, const Triplet& y) {
    return x.row != y.row ? x.row < y.row : x.col < y.col;
  });
  SparseMatrix a;
  a.n_ = n;
  a.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  int last_row = -1;
  int last_col = -1;
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n) {
      throw std::out_of_range("triplet index out of range");
    }
    if (t.row == last_row && t.col == last_col) {
      a.values_.back() += t.value;
      continue;
    }
    a.col_idx_.push_back(t.col);
    a.values_.push_back(t.value);
    ++a.row_ptr_[t.row + 1];
    last_row = t.row;
    last_col = t.col;
  }
  for (int i = 0; i < n; ++i) a.row_ptr_[i + 1] += a.row_ptr_[i];
  return a;
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  SparseMatrix a = from_triplets(n, std::move(t));
  a.set_symmetric(true);
  return a;
}

int SparseMatrix::find(int i, int j) const {
  const auto begin = col_idx_.begin() + row_ptr_[i];
  const auto end = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return -1;
  return static_cast<int>(it - col_idx_.begin());
}

void SparseMatrix::add(int i, int j, double v) {
  const int pos = find(i, j);
  if (pos < 0) {
    throw std::out_of_range("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside sparsity pattern");
  }
  values_[pos] += v;
}

double SparseMatrix::at(int i, int j) const {
  const int pos = find(i, j);
  return pos < 0 ? 0.0 : values_[pos];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (int i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) sum += values_[p] * x[col_idx_[p]];
    y[i] = sum;
  }
}

Vector SparseMatrix::operator*(std::span<const double> x) const {
  Vector y(static_cast<std::size_t>(n_));
  multiply(x, y);
  return y;
}

Vector SparseMatrix::diagonal() const {
  Vector d(static_cast<std::size_t>(n_), 0.0);
  for (int i = 0; i < n_; ++i) d[i] = at(i, i);
  return d;
}

double check_symmetry(const SparseMatrix& a) {
  double max_entry = 0.0;
  double max_diff = 0.0;
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (int i = 0; i < a.rows(); ++i) {
    for (int p = rp[i]; p < rp[i + 1]; ++p) {
      max_entry = std::max(max_entry, std::abs(v[p]));
      max_diff = std::max(max_diff, std::abs(v[p] - a.at(ci[p], i)));
    }
  }
  return max_entry == 0.0 ? 0.0 : max_diff / max_entry;
}

void apply_constraints(LinearSystem& system, std::vector<std::pair<int, double>> constraints,
                       bool symmetric_elimination) {
  SparseMatrix& a = system.matrix;
  const int n = a.rows();
  std::vector<char> is_constrained(static_cast<std::size_t>(n), 0);
  Vector value(static_cast<std::size_t>(n), 0.0);
  for (const auto& [dof, v] : constraints) {
    is_constrained[dof] = 1;
    value[dof] = v;
  }
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  auto vals = a.values();
  for (int i = 0; i < n; ++i) {
    for (int p = rp[i]; p < rp[i + 1]; ++p) {
      const int j = ci[p];
      if (is_constrained[i]) {
        vals[p] = i == j ? 1.0 : 0.0;
      } else if (symmetric_elimination && is_constrained[j]) {
        system.rhs[i] -= vals[p] * value[j];
        vals[p] = 0.0;
      }
    }
    if (is_constrained[i]) {
      if (a.find(i, i) < 0) throw std::logic_error("constrained row lacks a diagonal entry");
      system.rhs[i] = value[i];
    }
  }
  system.constrained.insert(system.constrained.end(), constraints.begin(), constraints.end());
}

void write_coordinate(const SparseMatrix& a, std::ostream& out) {
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto v = a.values();
  for (int i = 0; i < a.rows(); ++i) {
    for (int p = rp[i]; p < rp[i + 1]; ++p) out << i << ' ' << ci[p] << ' ' << format_full(v[p]) << '\n';
  }
}

}  // namespace curvefem
