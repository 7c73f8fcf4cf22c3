#include "s2gnn/sobolev.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "s2gnn/eig.hpp"

namespace s2gnn {

SparseMatrix sparse_sobolev_term(const SparseMatrix& m, double eps, int rho) {
  if (!m.is_symmetric(0.0)) {
    throw std::invalid_argument("sobolev_term: matrix must be symmetric");
  }
  if (eps < 0.0) {
    throw std::invalid_argument("sobolev_term: eps must be >= 0");
  }
  return hadamard_power(add_scaled_identity(m, eps), rho);
}

DenseMatrix dense_sobolev_term(const SparseMatrix& m, double eps, int rho,
                               index_t dense_cap) {
  if (!m.is_symmetric(0.0)) {
    throw std::invalid_argument("sobolev_term: matrix must be symmetric");
  }
  if (eps < 0.0) {
    throw std::invalid_argument("sobolev_term: eps must be >= 0");
  }
  return matrix_power_dense(add_scaled_identity(m, eps), rho, dense_cap);
}

double sparse_sobolev_norm(std::span<const double> x, const SparseMatrix& l,
                           double eps, int rho) {
  if (static_cast<index_t>(x.size()) != l.rows()) {
    throw std::invalid_argument("sparse_sobolev_norm: dimension mismatch");
  }
  const SparseMatrix term = sparse_sobolev_term(l, eps, rho);
  const double quad = dot(x, spmv(term, x));
  if (quad < -1e-10) {
    throw std::invalid_argument(
        "sparse_sobolev_norm: negative quadratic form (" +
        std::to_string(quad) + "); input is not PSD");
  }
  return std::sqrt(std::max(0.0, quad));
}

ShiftBank build_shift_bank(const Graph& g, double epsilon, int alpha) {
  ShiftBankOptions opts;
  opts.epsilon = epsilon;
  opts.alpha = alpha;
  return build_shift_bank(g, opts);
}

ShiftBank build_shift_bank(const Graph& g, const ShiftBankOptions& opts) {
  if (opts.epsilon <= 0.0) {
    throw std::invalid_argument("shift_bank: eps must be > 0");
  }
  if (opts.alpha < 1) {
    throw std::invalid_argument("shift_bank: alpha must be >= 1");
  }
  const SparseMatrix base = opts.base == BankBase::adjacency_sobolev
                                ? g.adjacency
                                : laplacian(g);

  ShiftBank bank;
  bank.epsilon = opts.epsilon;
  bank.alpha = opts.alpha;
  bank.base_kind = opts.base;
  bank.normalized = opts.normalize;
  bank.operators.reserve(static_cast<std::size_t>(opts.alpha));

  const SparseMatrix shifted = add_scaled_identity(base, opts.epsilon);
  for (int rho = 1; rho <= opts.alpha; ++rho) {
    SparseMatrix powered =
        opts.regular_power
            ? SparseMatrix::from_dense(
                  matrix_power_dense(shifted, rho, opts.dense_cap))
            : hadamard_power(shifted, rho);
    if (!opts.normalize) {
      bank.operators.push_back(std::move(powered));
      continue;
    }
    const auto deg = row_sums(powered);
    for (double d : deg) {
      if (d <= 0.0) {
        throw std::invalid_argument(
            "shift_bank: non-positive degree after powering; increase eps");
      }
    }
    bank.operators.push_back(scale_by_inv_sqrt_diag(powered, deg));
  }
  return bank;
}

std::vector<double> apply_polynomial_filter(const SparseMatrix& s,
                                            const FilterCoefficients& coeffs,
                                            std::span<const double> x) {
  if (coeffs.q.empty()) {
    throw std::invalid_argument("polynomial_filter: empty coefficients");
  }
  for (double q : coeffs.q) {
    if (!std::isfinite(q)) {
      throw std::invalid_argument("polynomial_filter: non-finite coefficient");
    }
  }
  if (static_cast<index_t>(x.size()) != s.cols()) {
    throw std::invalid_argument("polynomial_filter: dimension mismatch");
  }
  std::vector<double> shifted(x.begin(), x.end());
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t k = 0; k < coeffs.q.size(); ++k) {
    if (k > 0) shifted = spmv(s, shifted);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] += coeffs.q[k] * shifted[i];
    }
  }
  return out;
}

double verify_hadamard_spectrum(const SparseMatrix& l, int rho) {
  if (rho < 2 || rho > 3) {
    throw std::invalid_argument("verify_hadamard_spectrum: rho must be 2 or 3");
  }
  if (l.rows() > 10) {
    throw std::invalid_argument(
        "verify_hadamard_spectrum: N > 10 blows up the Kronecker products");
  }
  const auto n = l.rows();
  const DenseMatrix p = to_dense(partial_permutation(n));
  const auto base = eig_sym(l);

  // Level r reconstructs L^(r) from the spectra of L and of L^(r-1), then the
  // next level decomposes the true Hadamard power, matching the statement
  // form of the recursion.
  double max_err = 0.0;
  for (int level = 2; level <= rho; ++level) {
    const SparseMatrix prev = hadamard_power(l, level - 1);
    const auto prev_dec = eig_sym(prev);

    const DenseMatrix u_kron =
        kronecker(base.eigenvectors, prev_dec.eigenvectors);
    DenseMatrix lambda_kron(u_kron.cols(), u_kron.cols());
    for (index_t i = 0; i < n; ++i) {
      for (index_t j = 0; j < n; ++j) {
        lambda_kron(i * n + j, i * n + j) =
            base.eigenvalues[i] * prev_dec.eigenvalues[j];
      }
    }
    const DenseMatrix big =
        matmul(matmul(u_kron, lambda_kron), transposed(u_kron));
    const DenseMatrix reconstruction = matmul(matmul_tn(p, big), p);
    max_err = std::max(
        max_err,
        max_abs_diff(reconstruction, to_dense(hadamard_power(l, level))));
  }
  return max_err;
}

std::vector<SpectraRow> eigen_penalization_curves(const SparseMatrix& l,
                                                  int rho_max,
                                                  index_t dense_cap) {
  if (rho_max < 1) {
    throw std::invalid_argument("penalization_curves: rho_max must be >= 1");
  }
  std::vector<SpectraRow> rows;
  for (int rho = 1; rho <= rho_max; ++rho) {
    const auto dense_dec =
        eig_sym(SparseMatrix::from_dense(matrix_power_dense(l, rho, dense_cap)),
                dense_cap);
    const auto sparse_dec = eig_sym(hadamard_power(l, rho), dense_cap);

    auto normalizer = [](const std::vector<double>& eigs) {
      double m = 0.0;
      for (double v : eigs) m = std::max(m, std::fabs(v));
      return m > 0.0 ? m : 1.0;
    };
    const double dense_max = normalizer(dense_dec.eigenvalues);
    const double sparse_max = normalizer(sparse_dec.eigenvalues);
    for (index_t i = 0; i < l.rows(); ++i) {
      rows.push_back({rho, i, dense_dec.eigenvalues[i] / dense_max,
                      sparse_dec.eigenvalues[i] / sparse_max});
    }
  }
  return rows;
}

}  // namespace s2gnn
