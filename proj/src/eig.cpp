#include "s2gnn/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace s2gnn {

namespace {

double off_diagonal_frobenius(const DenseMatrix& a) {
  double acc = 0.0;
  for (index_t i = 0; i < a.rows(); ++i) {
    for (index_t j = 0; j < a.cols(); ++j) {
      if (i != j) acc += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(acc);
}

}  // namespace

SpectralDecomposition eig_sym(const DenseMatrix& m, JacobiOptions opts) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("eig_sym: matrix not square");
  }
  const index_t n = m.rows();
  for (index_t i = 0; i < n; ++i) {
    for (index_t j = i + 1; j < n; ++j) {
      if (std::fabs(m(i, j) - m(j, i)) > opts.symmetry_tol) {
        throw std::invalid_argument("eig_sym: matrix not symmetric");
      }
    }
  }

  DenseMatrix a = m;
  DenseMatrix v = DenseMatrix::identity(n);
  const double threshold = opts.tol * std::max(1.0, frobenius_norm(a));

  bool converged = off_diagonal_frobenius(a) <= threshold;
  for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
    for (index_t p = 0; p < n - 1; ++p) {
      for (index_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t =
            (theta >= 0.0 ? 1.0 : -1.0) /
            (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // Rotate rows/columns p and q of a, and columns p and q of v.
        for (index_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (index_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (index_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    converged = off_diagonal_frobenius(a) <= threshold;
  }
  if (!converged) {
    throw std::runtime_error("eig_sym: Jacobi sweeps did not converge");
  }

  std::vector<index_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&a](index_t i, index_t j) { return a(i, i) < a(j, j); });

  SpectralDecomposition dec;
  dec.eigenvalues.resize(static_cast<std::size_t>(n));
  dec.eigenvectors = DenseMatrix(n, n);
  for (index_t j = 0; j < n; ++j) {
    dec.eigenvalues[j] = a(order[j], order[j]);
    for (index_t i = 0; i < n; ++i) {
      dec.eigenvectors(i, j) = v(i, order[j]);
    }
  }
  return dec;
}

SpectralDecomposition eig_sym(const SparseMatrix& m, index_t dense_cap,
                              JacobiOptions opts) {
  if (m.rows() > dense_cap) {
    throw std::invalid_argument("eig_sym: size exceeds dense cap");
  }
  return eig_sym(to_dense(m), opts);
}

std::vector<double> gft(std::span<const double> x,
                        const SpectralDecomposition& dec) {
  const index_t n = dec.eigenvectors.rows();
  if (static_cast<index_t>(x.size()) != n) {
    throw std::invalid_argument("gft: dimension mismatch");
  }
  std::vector<double> x_hat(static_cast<std::size_t>(n), 0.0);
  for (index_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (index_t i = 0; i < n; ++i) acc += dec.eigenvectors(i, j) * x[i];
    x_hat[j] = acc;
  }
  return x_hat;
}

std::vector<double> inverse_gft(std::span<const double> x_hat,
                                const SpectralDecomposition& dec) {
  const index_t n = dec.eigenvectors.rows();
  if (static_cast<index_t>(x_hat.size()) != n) {
    throw std::invalid_argument("inverse_gft: dimension mismatch");
  }
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  for (index_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (index_t j = 0; j < n; ++j) acc += dec.eigenvectors(i, j) * x_hat[j];
    x[i] = acc;
  }
  return x;
}

double condition_number(const SparseMatrix& m, double eps, index_t dense_cap) {
  if (eps < 0.0) {
    throw std::invalid_argument("condition_number: eps must be >= 0");
  }
  const auto dec = eig_sym(m, dense_cap);
  if (!dec.eigenvalues.empty() && dec.eigenvalues.front() < -1e-6) {
    throw std::invalid_argument("condition_number: matrix is not PSD");
  }
  if (eps == 0.0) return std::numeric_limits<double>::infinity();
  const double lambda_max =
      dec.eigenvalues.empty() ? 0.0 : dec.eigenvalues.back();
  return (lambda_max + eps) / eps;
}

double spectral_norm(const DenseMatrix& m) {
  if (m.empty()) return 0.0;
  const DenseMatrix gram = matmul_tn(m, m);
  const auto dec = eig_sym(gram);
  return std::sqrt(std::max(0.0, dec.eigenvalues.back()));
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double l2_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace s2gnn
