#pragma once

#include <span>
#include <vector>

#include "s2gnn/dense.hpp"
#include "s2gnn/sparse.hpp"

namespace s2gnn {

// Eigenvalues ascending; eigenvectors stored as columns, orthonormal.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;
};

struct JacobiOptions {
  int max_sweeps = 100;
  // Relative off-diagonal Frobenius threshold; convergence is quadratic so
  // the final residual usually lands far below it.
  double tol = 1e-12;
  double symmetry_tol = 1e-10;
};

// Cyclic Jacobi for symmetric matrices. Throws on asymmetric input or when
// the sweep cap is hit before convergence.
SpectralDecomposition eig_sym(const DenseMatrix& m, JacobiOptions opts = {});
SpectralDecomposition eig_sym(const SparseMatrix& m,
                              index_t dense_cap = kDefaultDenseCap,
                              JacobiOptions opts = {});

// Graph Fourier transform x_hat = U^T x and its inverse x = U x_hat.
std::vector<double> gft(std::span<const double> x,
                        const SpectralDecomposition& dec);
std::vector<double> inverse_gft(std::span<const double> x_hat,
                                const SpectralDecomposition& dec);

// (lambda_max + eps) / eps for a PSD matrix; +inf for eps = 0.
double condition_number(const SparseMatrix& m, double eps,
                        index_t dense_cap = kDefaultDenseCap);

// Largest singular value, via eig_sym of the Gram matrix M^T M.
double spectral_norm(const DenseMatrix& m);

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> a);

}  // namespace s2gnn
