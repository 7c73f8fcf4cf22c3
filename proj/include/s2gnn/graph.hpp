#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "s2gnn/dense.hpp"
#include "s2gnn/sparse.hpp"

namespace s2gnn {

// Undirected weighted graph. The adjacency matrix is stored symmetrically,
// has an empty diagonal and strictly positive weights; the constructor
// rejects anything else.
struct Graph {
  SparseMatrix adjacency;
  std::vector<int> labels;   // empty when unlabeled
  DenseMatrix features;      // empty when featureless

  index_t n_nodes() const { return adjacency.rows(); }
  bool has_labels() const { return !labels.empty(); }
  bool has_features() const { return !features.empty(); }

  static Graph from_adjacency(SparseMatrix adjacency,
                              std::vector<int> labels = {},
                              DenseMatrix features = {});
  static Graph from_edges(index_t n_nodes,
                          std::vector<SparseMatrix::Triplet> upper_edges,
                          std::vector<int> labels = {},
                          DenseMatrix features = {});
};

std::vector<double> degrees(const Graph& g);   // weighted row sums of A
double max_degree(const Graph& g);
index_t edge_count(const Graph& g);            // undirected edges

SparseMatrix laplacian(const Graph& g);              // D - A
SparseMatrix normalized_adjacency(const Graph& g);   // D^{-1/2} A D^{-1/2}

// Symmetric zero-diagonal edge noise confined to the support of the base
// graph, with |e_ij| <= a_ij. achieved_snr_db is measured after projection.
struct Perturbation {
  SparseMatrix noise;
  double snr_db = 0.0;
  double achieved_snr_db = 0.0;
};

enum class WeightDist { unit, uniform };

Graph knn_graph(const DenseMatrix& x, int k, double kernel_bandwidth = 0.0);
Graph erdos_renyi(index_t n, double p, WeightDist weights, std::uint64_t seed);
Graph sbm(index_t n, int blocks, double p_in, double p_out,
          std::uint64_t seed);

Perturbation perturb(const Graph& g, double snr_db, std::uint64_t seed);
Graph apply_perturbation(const Graph& g, const Perturbation& p);

// Mean fraction of same-label neighbors per node; isolated nodes are skipped
// and counted in *skipped when given.
double homophily_index(const Graph& g, index_t* skipped = nullptr);

// Percentage of entries with |v| <= 1e-12 out of all n*m positions.
double sparsity_percentage(const SparseMatrix& m);
double sparsity_percentage(const DenseMatrix& m);

struct SplitMask {
  std::vector<char> train, val, test;

  index_t n_train() const;
  index_t n_val() const;
  index_t n_test() const;
  std::vector<index_t> train_indices() const;
  std::vector<index_t> val_indices() const;
  std::vector<index_t> test_indices() const;
  void validate() const;  // disjointness, sizes, non-empty train
};

// Fractions must sum to <= 1. Stratified by label when labels are given.
SplitMask split_fractions(index_t n, double f_train, double f_val,
                          double f_test, std::uint64_t seed,
                          const std::vector<int>& labels = {});
// Fixed per-class training count; the remaining nodes go to validation.
SplitMask split_per_class(const std::vector<int>& labels, index_t per_class,
                          std::uint64_t seed);

}  // namespace s2gnn
