#include "s2gnn/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace s2gnn {

DenseMatrix DenseMatrix::identity(index_t n) {
  DenseMatrix m(n, n);
  for (index_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: inner dimensions disagree");
  }
  DenseMatrix c(a.rows(), b.cols());
  for (index_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    double* ci = c.row(i);
    for (index_t k = 0; k < a.cols(); ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;
      const double* bk = b.row(k);
      for (index_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw std::invalid_argument("matmul_tn: inner dimensions disagree");
  }
  DenseMatrix c(a.cols(), b.cols());
  for (index_t k = 0; k < a.rows(); ++k) {
    const double* ak = a.row(k);
    const double* bk = b.row(k);
    for (index_t i = 0; i < a.cols(); ++i) {
      const double aki = ak[i];
      if (aki == 0.0) continue;
      double* ci = c.row(i);
      for (index_t j = 0; j < b.cols(); ++j) ci[j] += aki * bk[j];
    }
  }
  return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("matmul_nt: inner dimensions disagree");
  }
  DenseMatrix c(a.rows(), b.rows());
  for (index_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    double* ci = c.row(i);
    for (index_t j = 0; j < b.rows(); ++j) {
      const double* bj = b.row(j);
      double acc = 0.0;
      for (index_t k = 0; k < a.cols(); ++k) acc += ai[k] * bj[k];
      ci[j] = acc;
    }
  }
  return c;
}

DenseMatrix transposed(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (index_t i = 0; i < a.rows(); ++i) {
    for (index_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

DenseMatrix hstack(const std::vector<DenseMatrix>& blocks) {
  if (blocks.empty()) return {};
  index_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != blocks.front().rows()) {
      throw std::invalid_argument("hstack: row counts disagree");
    }
    cols += b.cols();
  }
  DenseMatrix out(blocks.front().rows(), cols);
  index_t offset = 0;
  for (const auto& b : blocks) {
    for (index_t i = 0; i < b.rows(); ++i) {
      for (index_t j = 0; j < b.cols(); ++j) out(i, offset + j) = b(i, j);
    }
    offset += b.cols();
  }
  return out;
}

void add_in_place(DenseMatrix& a, const DenseMatrix& b, double scale) {
  if (!a.same_shape(b)) throw std::invalid_argument("add: shapes disagree");
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    a.data()[i] += scale * b.data()[i];
  }
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("subtract: shapes disagree");
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

void scale_in_place(DenseMatrix& a, double s) {
  for (double& v : a.data()) v *= s;
}

double frobenius_norm(const DenseMatrix& a) {
  double acc = 0.0;
  for (double v : a.data()) acc += v * v;
  return std::sqrt(acc);
}

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::fabs(v));
  return m;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("max_abs_diff: shapes disagree");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  }
  return m;
}

bool all_finite(const DenseMatrix& a) {
  for (double v : a.data()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void require_shape(const DenseMatrix& a, index_t rows, index_t cols,
                   const std::string& what) {
  if (a.rows() != rows || a.cols() != cols) {
    throw std::invalid_argument(what + ": expected " + std::to_string(rows) +
                                "x" + std::to_string(cols) + ", got " +
                                std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()));
  }
}

}  // namespace s2gnn
