#include "s2gnn/neural.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "s2gnn/io.hpp"

namespace s2gnn {

namespace {

void apply_activation(DenseMatrix& m, Activation act) {
  if (act == Activation::identity) return;
  for (double& v : m.data()) v = v > 0.0 ? v : 0.0;
}

void add_bias_rows(DenseMatrix& m, const std::vector<double>& bias) {
  if (bias.empty()) return;
  if (static_cast<index_t>(bias.size()) != m.cols()) {
    throw std::invalid_argument("bias length differs from output width");
  }
  for (index_t i = 0; i < m.rows(); ++i) {
    double* row = m.row(i);
    for (index_t j = 0; j < m.cols(); ++j) row[j] += bias[j];
  }
}

double glorot_bound(index_t fan_in, index_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

DenseMatrix glorot(index_t rows, index_t cols, Rng& rng) {
  const double bound = glorot_bound(rows, cols);
  DenseMatrix w(rows, cols);
  for (double& v : w.data()) v = rng.uniform(-bound, bound);
  return w;
}

}  // namespace

void ModelConfig::validate() const {
  if (alpha < 1 || alpha > 6) {
    throw std::invalid_argument("config: alpha must be in [1,6]");
  }
  if (epsilon <= 0.0) {
    throw std::invalid_argument("config: epsilon must be > 0");
  }
  if (n_layers < 1) {
    throw std::invalid_argument("config: need at least one layer");
  }
  if (static_cast<int>(hidden_units.size()) != n_layers) {
    throw std::invalid_argument(
        "config: hidden_units must list one width per layer");
  }
  for (index_t h : hidden_units) {
    if (h < 1) throw std::invalid_argument("config: layer width must be >= 1");
  }
  if (dropout < 0.0 || dropout >= 1.0) {
    throw std::invalid_argument("config: dropout must be in [0,1)");
  }
  if (max_epochs < 1) {
    throw std::invalid_argument("config: max_epochs must be >= 1");
  }
  if (gcn_baseline && (ablation_hadamard_off || ablation_regular_norm)) {
    throw std::invalid_argument(
        "config: ablations do not apply to the GCN baseline");
  }
}

DenseMatrix branch_forward(const SparseMatrix* s, const DenseMatrix& h,
                           const DenseMatrix& w,
                           const std::vector<double>& bias, Activation act) {
  if (h.cols() != w.rows()) {
    throw std::invalid_argument("branch_forward: H and W shapes disagree");
  }
  DenseMatrix out = s != nullptr ? matmul(spmm(*s, h), w) : matmul(h, w);
  add_bias_rows(out, bias);
  apply_activation(out, act);
  return out;
}

DenseMatrix fuse_linear(const std::vector<DenseMatrix>& branches,
                        const std::vector<double>& mu) {
  if (branches.empty() || branches.size() != mu.size()) {
    throw std::invalid_argument("fuse_linear: branch/coefficient mismatch");
  }
  DenseMatrix out(branches.front().rows(), branches.front().cols());
  for (std::size_t b = 0; b < branches.size(); ++b) {
    if (!branches[b].same_shape(out)) {
      throw std::invalid_argument("fuse_linear: branch shapes disagree");
    }
    add_in_place(out, branches[b], mu[b]);
  }
  return out;
}

DenseMatrix fuse_mlp(const std::vector<DenseMatrix>& branches,
                     const DenseMatrix& w_mlp) {
  if (branches.empty()) {
    throw std::invalid_argument("fuse_mlp: no branches");
  }
  const DenseMatrix concat = hstack(branches);
  if (concat.cols() != w_mlp.rows()) {
    throw std::invalid_argument(
        "fuse_mlp: W rows must equal branches * width");
  }
  return matmul(concat, w_mlp);
}

SparseMatrix gcn_operator(const Graph& g) {
  const SparseMatrix shifted = add_scaled_identity(g.adjacency, 1.0);
  return scale_by_inv_sqrt_diag(shifted, row_sums(shifted));
}

DenseMatrix gcn_layer(const SparseMatrix& op, const DenseMatrix& h,
                      const DenseMatrix& w, const std::vector<double>& bias,
                      Activation act) {
  return branch_forward(&op, h, w, bias, act);
}

DenseMatrix log_softmax_rows(const DenseMatrix& logits) {
  DenseMatrix out = logits;
  for (index_t i = 0; i < out.rows(); ++i) {
    double* row = out.row(i);
    double max = row[0];
    for (index_t j = 1; j < out.cols(); ++j) max = std::max(max, row[j]);
    double sum = 0.0;
    for (index_t j = 0; j < out.cols(); ++j) sum += std::exp(row[j] - max);
    const double lse = max + std::log(sum);
    for (index_t j = 0; j < out.cols(); ++j) row[j] -= lse;
  }
  return out;
}

double masked_cross_entropy(const DenseMatrix& log_probs,
                            const std::vector<int>& labels,
                            const std::vector<char>& mask) {
  if (static_cast<index_t>(labels.size()) != log_probs.rows() ||
      mask.size() != labels.size()) {
    throw std::invalid_argument("cross_entropy: length mismatch");
  }
  double acc = 0.0;
  index_t count = 0;
  for (index_t i = 0; i < log_probs.rows(); ++i) {
    if (!mask[i]) continue;
    const int y = labels[i];
    if (y < 0 || y >= log_probs.cols()) {
      throw std::invalid_argument("cross_entropy: label out of range at node " +
                                  std::to_string(i));
    }
    acc -= log_probs(i, y);
    ++count;
  }
  if (count == 0) throw std::invalid_argument("cross_entropy: empty mask");
  return acc / static_cast<double>(count);
}

double masked_accuracy(const DenseMatrix& log_probs,
                       const std::vector<int>& labels,
                       const std::vector<char>& mask) {
  index_t correct = 0;
  index_t count = 0;
  for (index_t i = 0; i < log_probs.rows(); ++i) {
    if (!mask[i]) continue;
    index_t argmax = 0;
    for (index_t j = 1; j < log_probs.cols(); ++j) {
      if (log_probs(i, j) > log_probs(i, argmax)) argmax = j;
    }
    if (argmax == labels[i]) ++correct;
    ++count;
  }
  if (count == 0) throw std::invalid_argument("accuracy: empty mask");
  return static_cast<double>(correct) / static_cast<double>(count);
}

Model::Model(ModelConfig config, const Graph& g, index_t in_features)
    : config_(std::move(config)), in_features_(in_features) {
  config_.validate();
  if (in_features_ < 1) {
    throw std::invalid_argument("model: need at least one input feature");
  }

  if (config_.gcn_baseline) {
    bank_ = build_shift_bank(g, config_.epsilon, 1);
  } else if (config_.ablation_hadamard_off) {
    // Identity in branch 0, the plain GCN operator in every other branch.
    ShiftBank gcn_bank = build_shift_bank(g, 1.0, 1);
    bank_.epsilon = 1.0;
    bank_.alpha = config_.alpha;
    bank_.base_kind = gcn_bank.base_kind;
    bank_.normalized = true;
    bank_.operators.assign(static_cast<std::size_t>(config_.alpha),
                           gcn_bank.operators.front());
  } else {
    ShiftBankOptions opts;
    opts.epsilon = config_.epsilon;
    opts.alpha = config_.alpha;
    opts.regular_power = config_.ablation_regular_norm;
    opts.dense_cap = config_.dense_cap;
    bank_ = build_shift_bank(g, opts);
  }

  Rng rng(config_.seed);
  const int branches = config_.branch_count();
  index_t width_in = in_features_;
  layers_.resize(static_cast<std::size_t>(config_.n_layers));
  for (int l = 0; l < config_.n_layers; ++l) {
    const index_t width_out = config_.hidden_units[l];
    LayerParams& p = layers_[l];
    p.weights.reserve(branches);
    p.biases.reserve(branches);
    for (int b = 0; b < branches; ++b) {
      p.weights.push_back(glorot(width_in, width_out, rng));
      p.biases.emplace_back(static_cast<std::size_t>(width_out), 0.0);
    }
    if (!config_.gcn_baseline) {
      if (config_.fusion == FusionKind::linear) {
        p.fusion_mu.assign(branches, 1.0 / branches);
      } else {
        p.fusion_mlp = glorot(branches * width_out, width_out, rng);
      }
    }
    width_in = width_out;
  }
}

index_t Model::parameter_count() const {
  index_t count = 0;
  for (const auto& layer : layers_) {
    for (const auto& w : layer.weights) count += w.rows() * w.cols();
    for (const auto& b : layer.biases) count += static_cast<index_t>(b.size());
    count += static_cast<index_t>(layer.fusion_mu.size());
    count += layer.fusion_mlp.rows() * layer.fusion_mlp.cols();
  }
  return count;
}

std::vector<ParamRef> Model::parameters() {
  std::vector<ParamRef> refs;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    LayerParams& p = layers_[l];
    const std::string prefix = "layer" + std::to_string(l) + ".";
    for (std::size_t b = 0; b < p.weights.size(); ++b) {
      const std::string branch =
          prefix + "branch" + std::to_string(branch_rho(static_cast<int>(b)));
      refs.push_back({branch + ".weight", p.weights[b].data().data(),
                      p.weights[b].data().size()});
      refs.push_back({branch + ".bias", p.biases[b].data(),
                      p.biases[b].size()});
    }
    if (!p.fusion_mu.empty()) {
      refs.push_back({prefix + "fusion.mu", p.fusion_mu.data(),
                      p.fusion_mu.size()});
    }
    if (!p.fusion_mlp.empty()) {
      refs.push_back({prefix + "fusion.w_mlp", p.fusion_mlp.data().data(),
                      p.fusion_mlp.data().size()});
    }
  }
  return refs;
}

DenseMatrix Model::forward(const DenseMatrix& x, ForwardCache* cache,
                           Rng* dropout_rng) const {
  if (x.cols() != in_features_) {
    throw std::invalid_argument("forward: feature width differs from model");
  }
  if (x.rows() != bank_.operators.front().rows()) {
    throw std::invalid_argument("forward: node count differs from operators");
  }
  if (cache != nullptr) {
    cache->layers.assign(static_cast<std::size_t>(config_.n_layers), {});
  }

  const int branches = config_.branch_count();
  DenseMatrix h = x;
  for (int l = 0; l < config_.n_layers; ++l) {
    LayerCache local;
    LayerCache& lc = cache != nullptr ? cache->layers[l] : local;

    // Inverted dropout on layer inputs, training mode only.
    if (dropout_rng != nullptr && config_.dropout > 0.0) {
      const double keep = 1.0 - config_.dropout;
      lc.drop_scale = DenseMatrix(h.rows(), h.cols());
      for (double& v : lc.drop_scale.data()) {
        v = dropout_rng->uniform() < keep ? 1.0 / keep : 0.0;
      }
      lc.dropped = h;
      for (std::size_t i = 0; i < lc.dropped.data().size(); ++i) {
        lc.dropped.data()[i] *= lc.drop_scale.data()[i];
      }
    } else {
      lc.dropped = std::move(h);
    }

    const Activation act = layer_activation(l);
    const LayerParams& p = layers_[l];
    lc.propagated.resize(branches);
    lc.preact.resize(branches);
    lc.activated.resize(branches);
    for (int b = 0; b < branches; ++b) {
      const int rho = branch_rho(b);
      lc.propagated[b] = rho == 0 ? lc.dropped : spmm(bank_.op(rho), lc.dropped);
      lc.preact[b] = matmul(lc.propagated[b], p.weights[b]);
      add_bias_rows(lc.preact[b], p.biases[b]);
      lc.activated[b] = lc.preact[b];
      apply_activation(lc.activated[b], act);
    }

    if (config_.gcn_baseline) {
      h = lc.activated.front();
    } else if (config_.fusion == FusionKind::linear) {
      h = fuse_linear(lc.activated, p.fusion_mu);
    } else {
      h = fuse_mlp(lc.activated, p.fusion_mlp);
    }
  }

  DenseMatrix log_probs = log_softmax_rows(h);
  if (cache != nullptr) {
    cache->logits = std::move(h);
    cache->log_probs = log_probs;
  }
  return log_probs;
}

Gradients Model::backward(const ForwardCache& cache,
                          const std::vector<int>& labels,
                          const std::vector<char>& mask) const {
  if (cache.layers.size() != layers_.size() || cache.log_probs.empty()) {
    throw std::invalid_argument("backward: missing forward cache");
  }
  index_t m_count = 0;
  for (char c : mask) m_count += c;
  if (m_count == 0) throw std::invalid_argument("backward: empty mask");

  Gradients grads;
  grads.layers.resize(layers_.size());

  // d(loss)/d(logits) of masked mean NLL after log-softmax.
  DenseMatrix delta(cache.log_probs.rows(), cache.log_probs.cols());
  for (index_t i = 0; i < delta.rows(); ++i) {
    if (!mask[i]) continue;
    for (index_t j = 0; j < delta.cols(); ++j) {
      const double softmax = std::exp(cache.log_probs(i, j));
      delta(i, j) = (softmax - (labels[i] == j ? 1.0 : 0.0)) /
                    static_cast<double>(m_count);
    }
  }

  const int branches = config_.branch_count();
  for (int l = config_.n_layers - 1; l >= 0; --l) {
    const LayerCache& lc = cache.layers[l];
    const LayerParams& p = layers_[l];
    LayerParams& g = grads.layers[l];
    const Activation act = layer_activation(l);

    std::vector<DenseMatrix> branch_delta(branches);
    if (config_.gcn_baseline) {
      branch_delta[0] = delta;
    } else if (config_.fusion == FusionKind::linear) {
      g.fusion_mu.assign(branches, 0.0);
      for (int b = 0; b < branches; ++b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < delta.data().size(); ++i) {
          acc += lc.activated[b].data()[i] * delta.data()[i];
        }
        g.fusion_mu[b] = acc;
        branch_delta[b] = delta;
        scale_in_place(branch_delta[b], p.fusion_mu[b]);
      }
    } else {
      const DenseMatrix concat = hstack(lc.activated);
      g.fusion_mlp = matmul_tn(concat, delta);
      const DenseMatrix d_concat = matmul_nt(delta, p.fusion_mlp);
      const index_t width = lc.activated.front().cols();
      for (int b = 0; b < branches; ++b) {
        branch_delta[b] = DenseMatrix(d_concat.rows(), width);
        for (index_t i = 0; i < d_concat.rows(); ++i) {
          for (index_t j = 0; j < width; ++j) {
            branch_delta[b](i, j) = d_concat(i, b * width + j);
          }
        }
      }
    }

    g.weights.resize(branches);
    g.biases.resize(branches);
    DenseMatrix d_input(lc.dropped.rows(), lc.dropped.cols());
    for (int b = 0; b < branches; ++b) {
      DenseMatrix dz = std::move(branch_delta[b]);
      if (act == Activation::relu) {
        for (std::size_t i = 0; i < dz.data().size(); ++i) {
          if (lc.preact[b].data()[i] <= 0.0) dz.data()[i] = 0.0;
        }
      }
      g.weights[b] = matmul_tn(lc.propagated[b], dz);
      g.biases[b].assign(static_cast<std::size_t>(dz.cols()), 0.0);
      for (index_t i = 0; i < dz.rows(); ++i) {
        for (index_t j = 0; j < dz.cols(); ++j) {
          g.biases[b][j] += dz(i, j);
        }
      }
      if (l > 0) {
        const DenseMatrix dv = matmul_nt(dz, p.weights[b]);
        const int rho = branch_rho(b);
        // Operators are symmetric, so S^T delta = S delta.
        add_in_place(d_input, rho == 0 ? dv : spmm(bank_.op(rho), dv));
      }
    }

    if (l > 0) {
      if (!lc.drop_scale.empty()) {
        for (std::size_t i = 0; i < d_input.data().size(); ++i) {
          d_input.data()[i] *= lc.drop_scale.data()[i];
        }
      }
      delta = std::move(d_input);
    }
  }

  // L2 weight decay applies to every parameter tensor.
  if (config_.weight_decay != 0.0) {
    const double wd = config_.weight_decay;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const LayerParams& p = layers_[l];
      LayerParams& g = grads.layers[l];
      for (std::size_t b = 0; b < p.weights.size(); ++b) {
        add_in_place(g.weights[b], p.weights[b], wd);
        for (std::size_t i = 0; i < p.biases[b].size(); ++i) {
          g.biases[b][i] += wd * p.biases[b][i];
        }
      }
      for (std::size_t i = 0; i < p.fusion_mu.size(); ++i) {
        g.fusion_mu[i] += wd * p.fusion_mu[i];
      }
      if (!p.fusion_mlp.empty()) {
        add_in_place(g.fusion_mlp, p.fusion_mlp, wd);
      }
    }
  }
  return grads;
}

double Model::objective(const DenseMatrix& x, const std::vector<int>& labels,
                        const std::vector<char>& mask) {
  const DenseMatrix log_probs = forward(x);
  double loss = masked_cross_entropy(log_probs, labels, mask);
  if (config_.weight_decay != 0.0) {
    double sq = 0.0;
    for (const auto& ref : parameters()) {
      for (std::size_t i = 0; i < ref.size; ++i) sq += ref.data[i] * ref.data[i];
    }
    loss += 0.5 * config_.weight_decay * sq;
  }
  return loss;
}

std::vector<ParamRef> gradient_refs(Gradients& grads) {
  // Mirrors Model::parameters() ordering.
  std::vector<ParamRef> refs;
  for (std::size_t l = 0; l < grads.layers.size(); ++l) {
    LayerParams& g = grads.layers[l];
    for (std::size_t b = 0; b < g.weights.size(); ++b) {
      refs.push_back({"", g.weights[b].data().data(), g.weights[b].data().size()});
      refs.push_back({"", g.biases[b].data(), g.biases[b].size()});
    }
    if (!g.fusion_mu.empty()) {
      refs.push_back({"", g.fusion_mu.data(), g.fusion_mu.size()});
    }
    if (!g.fusion_mlp.empty()) {
      refs.push_back({"", g.fusion_mlp.data().data(), g.fusion_mlp.data().size()});
    }
  }
  return refs;
}

TrainReport train(const ModelConfig& config, const Graph& g,
                  const DenseMatrix& x, const std::vector<int>& labels,
                  const SplitMask& splits, Model* out_model) {
  const auto start = std::chrono::steady_clock::now();
  splits.validate();
  if (static_cast<index_t>(labels.size()) != g.n_nodes() ||
      x.rows() != g.n_nodes()) {
    throw std::invalid_argument("train: node counts disagree across inputs");
  }
  int n_classes = 0;
  for (index_t i = 0; i < g.n_nodes(); ++i) {
    if (splits.train[i] && labels[i] < 0) {
      throw std::invalid_argument("train: unlabeled node in training mask");
    }
    n_classes = std::max(n_classes, labels[i] + 1);
  }
  if (config.hidden_units.empty() ||
      config.hidden_units.back() != n_classes) {
    throw std::invalid_argument(
        "train: last layer width must equal the class count (" +
        std::to_string(n_classes) + ")");
  }

  Model model(config, g, x.cols());
  auto params = model.parameters();

  // Adam state, one slot per scalar parameter.
  std::size_t total = 0;
  for (const auto& p : params) total += p.size;
  std::vector<double> m_state(total, 0.0), v_state(total, 0.0);
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;

  Rng dropout_rng(mix_seed(config.seed, 0xd70u));

  TrainReport report;
  report.parameter_count = model.parameter_count();

  std::vector<double> best_params;
  double best_val_acc = -1.0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    ForwardCache cache;
    model.forward(x, &cache, &dropout_rng);
    const double train_loss =
        masked_cross_entropy(cache.log_probs, labels, splits.train);
    if (!std::isfinite(train_loss)) {
      throw std::runtime_error("train: diverged (non-finite loss) at epoch " +
                               std::to_string(epoch));
    }
    Gradients grads = model.backward(cache, labels, splits.train);
    auto grad_refs = gradient_refs(grads);

    const double bc1 = 1.0 - std::pow(kBeta1, epoch);
    const double bc2 = 1.0 - std::pow(kBeta2, epoch);
    std::size_t slot = 0;
    for (std::size_t p = 0; p < params.size(); ++p) {
      for (std::size_t i = 0; i < params[p].size; ++i, ++slot) {
        const double grad = grad_refs[p].data[i];
        m_state[slot] = kBeta1 * m_state[slot] + (1.0 - kBeta1) * grad;
        v_state[slot] = kBeta2 * v_state[slot] + (1.0 - kBeta2) * grad * grad;
        const double m_hat = m_state[slot] / bc1;
        const double v_hat = v_state[slot] / bc2;
        params[p].data[i] -=
            config.learning_rate * m_hat / (std::sqrt(v_hat) + kAdamEps);
      }
    }

    const DenseMatrix eval_log_probs = model.forward(x);
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = train_loss;
    stats.train_accuracy =
        masked_accuracy(eval_log_probs, labels, splits.train);
    const bool has_val = splits.n_val() > 0;
    stats.val_loss =
        has_val ? masked_cross_entropy(eval_log_probs, labels, splits.val)
                : 0.0;
    stats.val_accuracy =
        has_val ? masked_accuracy(eval_log_probs, labels, splits.val) : 0.0;
    report.epochs.push_back(stats);

    const double selection_acc =
        has_val ? stats.val_accuracy : stats.train_accuracy;
    if (selection_acc > best_val_acc) {
      best_val_acc = selection_acc;
      report.best_epoch = epoch;
      best_params.clear();
      for (const auto& p : params) {
        best_params.insert(best_params.end(), p.data, p.data + p.size);
      }
    }
  }

  // Restore the best-validation epoch before scoring the test set.
  std::size_t offset = 0;
  for (auto& p : params) {
    std::copy(best_params.begin() + offset, best_params.begin() + offset + p.size,
              p.data);
    offset += p.size;
  }
  const DenseMatrix final_log_probs = model.forward(x);
  report.test_accuracy =
      splits.n_test() > 0
          ? masked_accuracy(final_log_probs, labels, splits.test)
          : 0.0;

  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (out_model != nullptr) *out_model = std::move(model);
  return report;
}

void save_checkpoint(Model& model, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  const ModelConfig& c = model.config();
  io::KvList kv;
  kv.emplace_back("alpha", std::to_string(c.alpha));
  kv.emplace_back("epsilon", io::format_double(c.epsilon));
  kv.emplace_back("n_layers", std::to_string(c.n_layers));
  std::string widths;
  for (std::size_t i = 0; i < c.hidden_units.size(); ++i) {
    widths += (i ? "," : "") + std::to_string(c.hidden_units[i]);
  }
  kv.emplace_back("hidden_units", widths);
  kv.emplace_back("fusion", c.fusion == FusionKind::linear ? "linear" : "mlp");
  kv.emplace_back("dropout", io::format_double(c.dropout));
  kv.emplace_back("learning_rate", io::format_double(c.learning_rate));
  kv.emplace_back("weight_decay", io::format_double(c.weight_decay));
  kv.emplace_back("max_epochs", std::to_string(c.max_epochs));
  kv.emplace_back("seed", std::to_string(c.seed));
  kv.emplace_back("ablation_hadamard_off",
                  c.ablation_hadamard_off ? "1" : "0");
  kv.emplace_back("ablation_regular_norm",
                  c.ablation_regular_norm ? "1" : "0");
  kv.emplace_back("gcn_baseline", c.gcn_baseline ? "1" : "0");
  kv.emplace_back("dense_cap", std::to_string(c.dense_cap));
  kv.emplace_back("in_features", std::to_string(model.in_features()));
  io::write_kv_file(dir + "/manifest.txt", kv);

  for (const auto& ref : model.parameters()) {
    DenseMatrix row(1, static_cast<index_t>(ref.size));
    std::copy(ref.data, ref.data + ref.size, row.data().begin());
    io::write_matrix_csv(dir + "/" + ref.name + ".csv", row, "v");
  }
}

Model load_checkpoint(const std::string& dir, const Graph& g) {
  const auto kv = io::read_kv_file(dir + "/manifest.txt");
  auto need = [&kv, &dir](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      throw std::runtime_error(dir + "/manifest.txt: missing key '" + key +
                               "'");
    }
    return it->second;
  };

  ModelConfig c;
  c.alpha = std::stoi(need("alpha"));
  c.epsilon = std::stod(need("epsilon"));
  c.n_layers = std::stoi(need("n_layers"));
  c.hidden_units.clear();
  {
    std::string widths = need("hidden_units");
    std::size_t pos = 0;
    while (pos <= widths.size()) {
      const auto comma = widths.find(',', pos);
      const auto token = widths.substr(pos, comma - pos);
      c.hidden_units.push_back(std::stoll(token));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  c.fusion = need("fusion") == "mlp" ? FusionKind::mlp : FusionKind::linear;
  c.dropout = std::stod(need("dropout"));
  c.learning_rate = std::stod(need("learning_rate"));
  c.weight_decay = std::stod(need("weight_decay"));
  c.max_epochs = std::stoi(need("max_epochs"));
  c.seed = std::stoull(need("seed"));
  c.ablation_hadamard_off = need("ablation_hadamard_off") == "1";
  c.ablation_regular_norm = need("ablation_regular_norm") == "1";
  c.gcn_baseline = need("gcn_baseline") == "1";
  c.dense_cap = std::stoll(need("dense_cap"));

  Model model(c, g, std::stoll(need("in_features")));
  for (const auto& ref : model.parameters()) {
    const DenseMatrix row = io::read_matrix_csv(dir + "/" + ref.name + ".csv");
    if (row.data().size() != ref.size) {
      throw std::runtime_error(dir + ": parameter " + ref.name +
                               " has wrong size");
    }
    std::copy(row.data().begin(), row.data().end(), ref.data);
  }
  return model;
}

}  // namespace s2gnn
