#pragma once

#include <span>
#include <vector>

#include "s2gnn/graph.hpp"
#include "s2gnn/sparse.hpp"

namespace s2gnn {

enum class BankBase { adjacency_sobolev, laplacian_sobolev };

struct ShiftBankOptions {
  double epsilon = 1.0;
  int alpha = 1;
  BankBase base = BankBase::adjacency_sobolev;
  bool normalize = true;
  // Ablation: build with ordinary matrix powers instead of Hadamard powers.
  // Densifies, so it is guarded by dense_cap.
  bool regular_power = false;
  index_t dense_cap = kDefaultDenseCap;
};

// Precomputed normalized shift operators S_(rho), rho = 1..alpha; the rho=0
// branch is the implicit identity. Built once per graph and shared read-only
// by every layer.
struct ShiftBank {
  double epsilon = 0.0;
  int alpha = 0;
  BankBase base_kind = BankBase::adjacency_sobolev;
  bool normalized = true;
  std::vector<SparseMatrix> operators;

  const SparseMatrix& op(int rho) const { return operators.at(rho - 1); }
};

ShiftBank build_shift_bank(const Graph& g, double epsilon, int alpha);
ShiftBank build_shift_bank(const Graph& g, const ShiftBankOptions& opts);

// (M + eps*I)^(rho): elementwise power, pattern of M + eps*I.
SparseMatrix sparse_sobolev_term(const SparseMatrix& m, double eps, int rho);
// (M + eps*I)^rho: ordinary power, densifies.
DenseMatrix dense_sobolev_term(const SparseMatrix& m, double eps, int rho,
                               index_t dense_cap = kDefaultDenseCap);

// sqrt(x^T (L + eps*I)^(rho) x) through the inner-product form; the powered
// matrix keeps the pattern of L + eps*I, nothing dense is formed.
double sparse_sobolev_norm(std::span<const double> x, const SparseMatrix& l,
                           double eps, int rho);

struct FilterCoefficients {
  std::vector<double> q;  // q_0 .. q_K
};

// sum_k q_k S^k x via repeated spmv; S^k is never formed.
std::vector<double> apply_polynomial_filter(const SparseMatrix& s,
                                            const FilterCoefficients& coeffs,
                                            std::span<const double> x);

// Reconstructs the Hadamard power of L from Kronecker products of spectra
// and compares it against the directly computed elementwise power. Returns
// the max-abs reconstruction error.
double verify_hadamard_spectrum(const SparseMatrix& l, int rho);

struct SpectraRow {
  int rho;
  index_t index;
  double normalized_eig_dense;
  double normalized_eig_sparse;
};

// Eigenvalues of L^rho (ordinary power) and L^(rho) (Hadamard power), each
// sorted ascending and scaled by its own maximum.
std::vector<SpectraRow> eigen_penalization_curves(
    const SparseMatrix& l, int rho_max, index_t dense_cap = kDefaultDenseCap);

}  // namespace s2gnn
