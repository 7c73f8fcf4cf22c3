#include "s2gnn/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace s2gnn {

namespace {

double int_pow(double v, int p) {
  double r = v;
  for (int i = 1; i < p; ++i) r *= v;
  return r;
}

}  // namespace

SparseMatrix SparseMatrix::from_triplets(index_t rows, index_t cols,
                                         std::vector<Triplet> triplets) {
  for (const auto& [r, c, v] : triplets) {
    if (r < 0 || r >= rows || c < 0 || c >= cols) {
      throw std::invalid_argument("from_triplets: index out of range");
    }
    if (!std::isfinite(v)) {
      throw std::invalid_argument("from_triplets: non-finite value");
    }
  }
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) {
              return std::tie(std::get<0>(a), std::get<1>(a)) <
                     std::tie(std::get<0>(b), std::get<1>(b));
            });

  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(static_cast<std::size_t>(rows) + 1, 0);

  std::size_t i = 0;
  for (index_t r = 0; r < rows; ++r) {
    while (i < triplets.size() && std::get<0>(triplets[i]) == r) {
      const index_t c = std::get<1>(triplets[i]);
      double v = 0.0;
      while (i < triplets.size() && std::get<0>(triplets[i]) == r &&
             std::get<1>(triplets[i]) == c) {
        v += std::get<2>(triplets[i]);
        ++i;
      }
      if (v != 0.0) {
        m.col_idx_.push_back(c);
        m.values_.push_back(v);
      }
    }
    m.row_ptr_[static_cast<std::size_t>(r) + 1] =
        static_cast<index_t>(m.values_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& dense) {
  SparseMatrix m;
  m.rows_ = dense.rows();
  m.cols_ = dense.cols();
  m.row_ptr_.assign(static_cast<std::size_t>(dense.rows()) + 1, 0);
  for (index_t r = 0; r < dense.rows(); ++r) {
    for (index_t c = 0; c < dense.cols(); ++c) {
      const double v = dense(r, c);
      if (v != 0.0) {
        if (!std::isfinite(v)) {
          throw std::invalid_argument("from_dense: non-finite value");
        }
        m.col_idx_.push_back(c);
        m.values_.push_back(v);
      }
    }
    m.row_ptr_[static_cast<std::size_t>(r) + 1] =
        static_cast<index_t>(m.values_.size());
  }
  return m;
}

SparseMatrix SparseMatrix::identity(index_t n) {
  SparseMatrix m;
  m.rows_ = n;
  m.cols_ = n;
  m.row_ptr_.resize(static_cast<std::size_t>(n) + 1);
  m.col_idx_.resize(static_cast<std::size_t>(n));
  m.values_.assign(static_cast<std::size_t>(n), 1.0);
  for (index_t i = 0; i <= n; ++i) m.row_ptr_[i] = i;
  for (index_t i = 0; i < n; ++i) m.col_idx_[i] = i;
  return m;
}

SparseMatrix SparseMatrix::diagonal(const std::vector<double>& diag) {
  std::vector<Triplet> t;
  t.reserve(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    t.emplace_back(static_cast<index_t>(i), static_cast<index_t>(i), diag[i]);
  }
  const auto n = static_cast<index_t>(diag.size());
  return from_triplets(n, n, std::move(t));
}

SparseMatrix SparseMatrix::from_csr(index_t rows, index_t cols,
                                    std::vector<index_t> row_ptr,
                                    std::vector<index_t> col_idx,
                                    std::vector<double> values) {
  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_ = std::move(row_ptr);
  m.col_idx_ = std::move(col_idx);
  m.values_ = std::move(values);
  m.check_canonical();
  return m;
}

double SparseMatrix::at(index_t r, index_t c) const {
  const auto begin = col_idx_.begin() + row_ptr_[r];
  const auto end = col_idx_.begin() + row_ptr_[r + 1];
  const auto it = std::lower_bound(begin, end, c);
  if (it == end || *it != c) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

bool SparseMatrix::is_symmetric(double tol) const {
  if (rows_ != cols_) return false;
  for (index_t r = 0; r < rows_; ++r) {
    for (index_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const index_t c = col_idx_[k];
      if (std::fabs(at(c, r) - values_[k]) > tol) return false;
    }
  }
  return true;
}

bool SparseMatrix::has_zero_diagonal() const {
  for (index_t r = 0; r < std::min(rows_, cols_); ++r) {
    if (at(r, r) != 0.0) return false;
  }
  return true;
}

void SparseMatrix::check_canonical() const {
  if (rows_ < 0 || cols_ < 0) {
    throw std::invalid_argument("csr: negative dimension");
  }
  if (row_ptr_.size() != static_cast<std::size_t>(rows_) + 1 ||
      row_ptr_.front() != 0 ||
      row_ptr_.back() != static_cast<index_t>(values_.size()) ||
      col_idx_.size() != values_.size()) {
    throw std::invalid_argument("csr: inconsistent array lengths");
  }
  for (index_t r = 0; r < rows_; ++r) {
    if (row_ptr_[r] > row_ptr_[r + 1]) {
      throw std::invalid_argument("csr: row_ptr not non-decreasing");
    }
    for (index_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (col_idx_[k] < 0 || col_idx_[k] >= cols_) {
        throw std::invalid_argument("csr: column index out of range");
      }
      if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1]) {
        throw std::invalid_argument("csr: columns not strictly increasing");
      }
      if (values_[k] == 0.0 || !std::isfinite(values_[k])) {
        throw std::invalid_argument("csr: stored zero or non-finite value");
      }
    }
  }
}

SparseMatrix hadamard_power(const SparseMatrix& m, int rho) {
  if (rho < 1) {
    throw std::invalid_argument(
        "hadamard_power: rho must be a positive integer");
  }
  SparseMatrix out = m;
  for (double& v : out.values()) v = int_pow(v, rho);
  return out;
}

SparseMatrix add_scaled_identity(const SparseMatrix& m, double eps) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("add_scaled_identity: matrix not square");
  }
  if (eps == 0.0) return m;
  std::vector<SparseMatrix::Triplet> t;
  t.reserve(static_cast<std::size_t>(m.nnz() + m.rows()));
  for (index_t r = 0; r < m.rows(); ++r) {
    for (index_t k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k) {
      t.emplace_back(r, m.col_idx()[k], m.values()[k]);
    }
    t.emplace_back(r, r, eps);
  }
  return SparseMatrix::from_triplets(m.rows(), m.cols(), std::move(t));
}

SparseMatrix scale_by_inv_sqrt_diag(const SparseMatrix& m,
                                    const std::vector<double>& d) {
  if (static_cast<index_t>(d.size()) != m.rows() || m.rows() != m.cols()) {
    throw std::invalid_argument("scale_by_inv_sqrt_diag: dimension mismatch");
  }
  std::vector<double> inv_sqrt(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] <= 0.0) {
      throw std::invalid_argument(
          "scale_by_inv_sqrt_diag: non-positive diagonal entry");
    }
    inv_sqrt[i] = 1.0 / std::sqrt(d[i]);
  }
  SparseMatrix out = m;
  auto& vals = out.values();
  for (index_t r = 0; r < m.rows(); ++r) {
    for (index_t k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k) {
      // Form the scale first; its product commutes exactly, so symmetric
      // inputs stay bit-symmetric.
      vals[k] *= inv_sqrt[r] * inv_sqrt[m.col_idx()[k]];
    }
  }
  return out;
}

std::vector<double> row_sums(const SparseMatrix& m) {
  std::vector<double> sums(static_cast<std::size_t>(m.rows()), 0.0);
  for (index_t r = 0; r < m.rows(); ++r) {
    for (index_t k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k) {
      sums[r] += m.values()[k];
    }
  }
  return sums;
}

DenseMatrix spmm(const SparseMatrix& s, const DenseMatrix& h) {
  if (s.cols() != h.rows()) {
    throw std::invalid_argument("spmm: dimension mismatch");
  }
  DenseMatrix out(s.rows(), h.cols());
  for (index_t r = 0; r < s.rows(); ++r) {
    double* out_r = out.row(r);
    for (index_t k = s.row_ptr()[r]; k < s.row_ptr()[r + 1]; ++k) {
      const double v = s.values()[k];
      const double* h_row = h.row(s.col_idx()[k]);
      for (index_t j = 0; j < h.cols(); ++j) out_r[j] += v * h_row[j];
    }
  }
  return out;
}

std::vector<double> spmv(const SparseMatrix& s, std::span<const double> x) {
  if (s.cols() != static_cast<index_t>(x.size())) {
    throw std::invalid_argument("spmv: dimension mismatch");
  }
  std::vector<double> y(static_cast<std::size_t>(s.rows()), 0.0);
  for (index_t r = 0; r < s.rows(); ++r) {
    double acc = 0.0;
    for (index_t k = s.row_ptr()[r]; k < s.row_ptr()[r + 1]; ++k) {
      acc += s.values()[k] * x[s.col_idx()[k]];
    }
    y[r] = acc;
  }
  return y;
}

DenseMatrix to_dense(const SparseMatrix& m) {
  DenseMatrix out(m.rows(), m.cols());
  for (index_t r = 0; r < m.rows(); ++r) {
    for (index_t k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k) {
      out(r, m.col_idx()[k]) = m.values()[k];
    }
  }
  return out;
}

DenseMatrix matrix_power_dense(const DenseMatrix& m, int rho) {
  if (rho < 1) {
    throw std::invalid_argument("matrix_power_dense: rho must be positive");
  }
  DenseMatrix acc = m;
  for (int i = 1; i < rho; ++i) acc = matmul(acc, m);
  return acc;
}

DenseMatrix matrix_power_dense(const SparseMatrix& m, int rho,
                               index_t dense_cap) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("matrix_power_dense: matrix not square");
  }
  if (m.rows() > dense_cap) {
    throw std::invalid_argument("matrix_power_dense: size " +
                                std::to_string(m.rows()) +
                                " exceeds dense cap " +
                                std::to_string(dense_cap));
  }
  return matrix_power_dense(to_dense(m), rho);
}

DenseMatrix kronecker(const DenseMatrix& a, const DenseMatrix& b,
                      index_t cap) {
  const index_t rows = a.rows() * b.rows();
  const index_t cols = a.cols() * b.cols();
  if (rows > cap || cols > cap) {
    throw std::invalid_argument("kronecker: product dimension " +
                                std::to_string(std::max(rows, cols)) +
                                " exceeds cap " + std::to_string(cap));
  }
  DenseMatrix out(rows, cols);
  for (index_t i = 0; i < a.rows(); ++i) {
    for (index_t j = 0; j < a.cols(); ++j) {
      const double aij = a(i, j);
      if (aij == 0.0) continue;
      for (index_t k = 0; k < b.rows(); ++k) {
        for (index_t l = 0; l < b.cols(); ++l) {
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
      }
    }
  }
  return out;
}

SparseMatrix partial_permutation(index_t n) {
  if (n < 1) throw std::invalid_argument("partial_permutation: n must be >= 1");
  std::vector<SparseMatrix::Triplet> t;
  t.reserve(static_cast<std::size_t>(n));
  for (index_t i = 0; i < n; ++i) t.emplace_back(i * n + i, i, 1.0);
  return SparseMatrix::from_triplets(n * n, n, std::move(t));
}

}  // namespace s2gnn
