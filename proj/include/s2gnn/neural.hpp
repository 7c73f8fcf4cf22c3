#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "s2gnn/dense.hpp"
#include "s2gnn/graph.hpp"
#include "s2gnn/rng.hpp"
#include "s2gnn/sobolev.hpp"

namespace s2gnn {

enum class FusionKind { linear, mlp };
enum class Activation { identity, relu };

struct ModelConfig {
  int alpha = 3;
  double epsilon = 1.0;
  int n_layers = 2;
  // Output width of each layer; the last entry is the class count.
  std::vector<index_t> hidden_units;
  FusionKind fusion = FusionKind::linear;
  double dropout = 0.5;
  double learning_rate = 0.01;
  double weight_decay = 5e-4;
  int max_epochs = 200;
  std::uint64_t seed = 1;
  // Replaces every rho >= 1 operator with the plain GCN operator.
  bool ablation_hadamard_off = false;
  // Builds the bank with ordinary matrix powers (dense-cap guarded).
  bool ablation_regular_norm = false;
  // Single rho=1 branch, no identity branch, no fusion: the GCN baseline.
  bool gcn_baseline = false;
  index_t dense_cap = kDefaultDenseCap;

  void validate() const;
  int branch_count() const { return gcn_baseline ? 1 : alpha + 1; }
};

struct LayerParams {
  std::vector<DenseMatrix> weights;         // one per branch
  std::vector<std::vector<double>> biases;  // one per branch
  std::vector<double> fusion_mu;            // linear fusion only
  DenseMatrix fusion_mlp;                   // mlp fusion only
};

struct ParamRef {
  std::string name;
  double* data;
  std::size_t size;
};

// sigma(S H W + b); pass s = nullptr for the identity branch.
DenseMatrix branch_forward(const SparseMatrix* s, const DenseMatrix& h,
                           const DenseMatrix& w,
                           const std::vector<double>& bias, Activation act);

DenseMatrix fuse_linear(const std::vector<DenseMatrix>& branches,
                        const std::vector<double>& mu);
// Concatenates branches column-wise in branch order, then multiplies.
DenseMatrix fuse_mlp(const std::vector<DenseMatrix>& branches,
                     const DenseMatrix& w_mlp);

// D~^{-1/2} (A + I) D~^{-1/2}, the renormalized GCN operator.
SparseMatrix gcn_operator(const Graph& g);
DenseMatrix gcn_layer(const SparseMatrix& op, const DenseMatrix& h,
                      const DenseMatrix& w, const std::vector<double>& bias,
                      Activation act);

DenseMatrix log_softmax_rows(const DenseMatrix& logits);

// Mean negative log-likelihood over the masked nodes.
double masked_cross_entropy(const DenseMatrix& log_probs,
                            const std::vector<int>& labels,
                            const std::vector<char>& mask);
double masked_accuracy(const DenseMatrix& log_probs,
                       const std::vector<int>& labels,
                       const std::vector<char>& mask);

struct LayerCache {
  DenseMatrix dropped;                  // layer input after dropout
  DenseMatrix drop_scale;               // per-entry keep scale; empty in eval
  std::vector<DenseMatrix> propagated;  // S_rho * dropped per branch
  std::vector<DenseMatrix> preact;
  std::vector<DenseMatrix> activated;
};

struct ForwardCache {
  std::vector<LayerCache> layers;
  DenseMatrix logits;
  DenseMatrix log_probs;
};

struct Gradients {
  std::vector<LayerParams> layers;  // same shapes as the parameters
};

// Walks a gradient set in the same order as Model::parameters().
std::vector<ParamRef> gradient_refs(Gradients& grads);

class Model {
 public:
  Model(ModelConfig config, const Graph& g, index_t in_features);

  const ModelConfig& config() const { return config_; }
  const ShiftBank& bank() const { return bank_; }
  index_t in_features() const { return in_features_; }
  std::vector<LayerParams>& layers() { return layers_; }
  const std::vector<LayerParams>& layers() const { return layers_; }

  index_t parameter_count() const;
  // Stable enumeration (layer-major, branch-major) used by the optimizer,
  // the finite-difference harness and the checkpoint format.
  std::vector<ParamRef> parameters();

  // Returns row-wise log-probabilities. Passing dropout_rng enables training
  // mode (inverted dropout on layer inputs); cache may be null.
  DenseMatrix forward(const DenseMatrix& x, ForwardCache* cache = nullptr,
                      Rng* dropout_rng = nullptr) const;

  // Gradients of masked CE + (weight_decay/2) * sum of squared parameters,
  // for every parameter. Requires the cache of a forward pass.
  Gradients backward(const ForwardCache& cache, const std::vector<int>& labels,
                     const std::vector<char>& mask) const;

  // Objective the gradients differentiate; used by the FD harness.
  double objective(const DenseMatrix& x, const std::vector<int>& labels,
                   const std::vector<char>& mask);

 private:
  ModelConfig config_;
  ShiftBank bank_;
  index_t in_features_ = 0;
  std::vector<LayerParams> layers_;

  int branch_rho(int branch) const { return config_.gcn_baseline ? 1 : branch; }
  Activation layer_activation(int layer) const {
    return layer + 1 < config_.n_layers ? Activation::relu
                                        : Activation::identity;
  }
};

struct EpochStats {
  int epoch;
  double train_loss;
  double train_accuracy;
  double val_loss;
  double val_accuracy;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  int best_epoch = 0;
  double test_accuracy = 0.0;
  double wall_time_s = 0.0;
  index_t parameter_count = 0;
};

// Adam (beta1 0.9, beta2 0.999, eps 1e-8) on the masked CE objective with L2
// weight decay; keeps the best-validation epoch. Deterministic per seed.
TrainReport train(const ModelConfig& config, const Graph& g,
                  const DenseMatrix& x, const std::vector<int>& labels,
                  const SplitMask& splits, Model* out_model = nullptr);

void save_checkpoint(Model& model, const std::string& dir);
// Rebuilds the model from the checkpoint manifest and parameter files.
Model load_checkpoint(const std::string& dir, const Graph& g);

}  // namespace s2gnn
