#pragma once

#include <span>
#include <tuple>
#include <vector>

#include "s2gnn/dense.hpp"
#include "s2gnn/types.hpp"

namespace s2gnn {

// CSR matrix in canonical form: row_ptr non-decreasing, column indices
// strictly increasing within each row, no stored zeros. Canonical form is
// enforced at construction so pattern equality is an exact array comparison.
class SparseMatrix {
 public:
  using Triplet = std::tuple<index_t, index_t, double>;

  SparseMatrix() = default;

  // Sorts, sums duplicates and drops exact zeros.
  static SparseMatrix from_triplets(index_t rows, index_t cols,
                                    std::vector<Triplet> triplets);
  static SparseMatrix from_dense(const DenseMatrix& dense);
  static SparseMatrix identity(index_t n);
  static SparseMatrix diagonal(const std::vector<double>& diag);

  // Takes pre-built canonical arrays; validates them.
  static SparseMatrix from_csr(index_t rows, index_t cols,
                               std::vector<index_t> row_ptr,
                               std::vector<index_t> col_idx,
                               std::vector<double> values);

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }
  index_t nnz() const { return static_cast<index_t>(values_.size()); }

  const std::vector<index_t>& row_ptr() const { return row_ptr_; }
  const std::vector<index_t>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  // Entry lookup by binary search; absent entries read as 0.
  double at(index_t r, index_t c) const;

  bool pattern_equals(const SparseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ &&
           row_ptr_ == other.row_ptr_ && col_idx_ == other.col_idx_;
  }

  bool is_symmetric(double tol = 0.0) const;
  bool has_zero_diagonal() const;

  void check_canonical() const;  // throws std::invalid_argument on violation

 private:
  index_t rows_ = 0;
  index_t cols_ = 0;
  std::vector<index_t> row_ptr_{0};
  std::vector<index_t> col_idx_;
  std::vector<double> values_;
};

// Elementwise rho-th power on the stored entries. The sparsity pattern of the
// result is byte-identical to the input; rho = 0 is rejected (callers handle
// the identity branch explicitly).
SparseMatrix hadamard_power(const SparseMatrix& m, int rho);

// m + eps*I; inserts diagonal entries as needed. eps = 0 returns m unchanged.
SparseMatrix add_scaled_identity(const SparseMatrix& m, double eps);

// d^{-1/2} * m * d^{-1/2} for a positive diagonal d.
SparseMatrix scale_by_inv_sqrt_diag(const SparseMatrix& m,
                                    const std::vector<double>& d);

std::vector<double> row_sums(const SparseMatrix& m);

// Sparse-dense product. Accumulation runs in ascending column order per row,
// so results are bit-reproducible.
DenseMatrix spmm(const SparseMatrix& s, const DenseMatrix& h);
std::vector<double> spmv(const SparseMatrix& s, std::span<const double> x);

DenseMatrix to_dense(const SparseMatrix& m);

// Ordinary matrix power via repeated dense multiplication. Only for the
// regular-Sobolev contrast curves; guarded by the dense cap.
DenseMatrix matrix_power_dense(const SparseMatrix& m, int rho,
                               index_t dense_cap = kDefaultDenseCap);
DenseMatrix matrix_power_dense(const DenseMatrix& m, int rho);

// Kronecker product with block layout (a(i,j) * b). Guarded by the cap on
// the product dimensions.
DenseMatrix kronecker(const DenseMatrix& a, const DenseMatrix& b,
                      index_t cap = kDefaultKroneckerCap);

// The N^2 x N selector of Visick's identity S o T = P^T (S kron T) P,
// with 0-based row-major flattening: P[i*N + i, i] = 1.
SparseMatrix partial_permutation(index_t n);

}  // namespace s2gnn
