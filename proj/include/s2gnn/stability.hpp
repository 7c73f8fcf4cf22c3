#pragma once

#include <cstdint>
#include <vector>

#include "s2gnn/dense.hpp"
#include "s2gnn/graph.hpp"
#include "s2gnn/sparse.hpp"

namespace s2gnn {

enum class LipschitzActivation { identity, relu };

// Inputs of the perturbation bound: base graph, admissible edge noise, true
// and perturbed weights, and the simplified network's parameters.
struct StabilityInputs {
  Graph g;
  Perturbation e;
  DenseMatrix x;      // column-normalized features, ||X||_F = sqrt(upsilon)
  DenseMatrix w;
  DenseMatrix w_hat;
  double epsilon = 0.5;
  int rho = 2;
  LipschitzActivation sigma = LipschitzActivation::identity;
  double phi = 1.0;   // Lipschitz constant of sigma
};

struct BoundBreakdown {
  double lhs = 0.0;
  double rhs_first_order = 0.0;
  double rhs_exact_binomial = 0.0;

  double weight_term = 0.0;               // common to both right-hand sides
  double structure_term_first_order = 0.0;
  double structure_term_exact = 0.0;
  std::vector<double> binomial_terms;     // per m = 1..rho
  std::vector<double> eta_m;              // per m = 1..rho

  double d_max = 0.0;
  double d_e_max = 0.0;
  double d_hat_max = 0.0;
  double delta_w = 0.0;
  double norm_w = 0.0;
  double norm_e = 0.0;
  double sqrt_upsilon = 0.0;
  double norm_a_hat_rho = 0.0;
  double norm_l_hat_rho = 0.0;
};

// sigma((L + eps I)^(rho) X W) for the one-layer simplified network.
DenseMatrix ss2gnn_forward(const SparseMatrix& l, const DenseMatrix& x,
                           const DenseMatrix& w, double eps, int rho,
                           LipschitzActivation act);

struct LaplacianPair {
  SparseMatrix original;   // (L + eps I)^(rho) from the closed form
  SparseMatrix perturbed;  // same for the perturbed graph
};

// Elementwise closed forms: diagonal (d_i + eps)^rho, off-diagonal
// (-1)^rho a_ij^rho (and the perturbed analogues). Entry-exact against the
// Hadamard-power construction.
LaplacianPair laplacian_power_elements(const Graph& g, const Perturbation& e,
                              double eps, int rho);

struct DistanceBound {
  double exact_lhs_norm = 0.0;   // ||L^(rho) - Lhat^(rho)|| (spectral)
  double binomial_rhs = 0.0;     // full binomial sum
  double first_order_rhs = 0.0;  // m = 1 truncation
  std::vector<double> terms;     // per m
  std::vector<double> eta_m;     // per m
  double d_max = 0.0;
  double d_e_max = 0.0;
};

DistanceBound perturbation_distance_bound(const Graph& g,
                                          const Perturbation& e, double eps,
                                          int rho);

BoundBreakdown output_perturbation_bound(const StabilityInputs& inputs);

struct SweepProtocol {
  std::vector<int> rhos = {2, 3};
  std::vector<double> p_er = {0.1, 0.3, 0.5};
  std::vector<double> epsilons = {0.5, 5.0, 10.0};
  std::vector<double> snrs_db = {5.0, 10.0, 20.0, 30.0, 40.0};
  index_t n_nodes = 10;
  index_t f0 = 16;
  index_t f1 = 2;
  int n_seeds = 100;
  std::uint64_t master_seed = 7;
  LipschitzActivation sigma = LipschitzActivation::identity;
};

struct SweepCell {
  int rho;
  double p_er;
  double epsilon;
  double snr_db;
  double mean_lhs;
  double std_lhs;
  double mean_rhs_first_order;
  double mean_rhs_exact;
  int violations;
};

// Grid sweep with common random numbers across SNR (and rho) so matched
// cells share graphs and noise directions. Violations count cells where the
// exact binomial bound fails.
std::vector<SweepCell> stability_sweep(const SweepProtocol& protocol);

}  // namespace s2gnn
