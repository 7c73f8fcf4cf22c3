#pragma once

#include <string>
#include <vector>

#include "s2gnn/types.hpp"

namespace s2gnn {

// Row-major dense matrix of doubles. Used for features, weights and the
// small oracle computations; all node-level propagation stays sparse.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(index_t rows, index_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows * cols), fill) {}

  static DenseMatrix identity(index_t n);

  index_t rows() const { return rows_; }
  index_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(index_t r, index_t c) {
    return data_[static_cast<std::size_t>(r * cols_ + c)];
  }
  double operator()(index_t r, index_t c) const {
    return data_[static_cast<std::size_t>(r * cols_ + c)];
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  double* row(index_t r) { return data_.data() + r * cols_; }
  const double* row(index_t r) const { return data_.data() + r * cols_; }

  bool same_shape(const DenseMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  index_t rows_ = 0;
  index_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
// a^T * b and a * b^T; used by the layer gradients.
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transposed(const DenseMatrix& a);
DenseMatrix hstack(const std::vector<DenseMatrix>& blocks);

void add_in_place(DenseMatrix& a, const DenseMatrix& b, double scale = 1.0);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
void scale_in_place(DenseMatrix& a, double s);

double frobenius_norm(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

bool all_finite(const DenseMatrix& a);

// Throws std::invalid_argument mentioning `what` on shape mismatch.
void require_shape(const DenseMatrix& a, index_t rows, index_t cols,
                   const std::string& what);

}  // namespace s2gnn
