#include "s2gnn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "s2gnn/rng.hpp"

namespace s2gnn {

namespace {

void validate_adjacency(const SparseMatrix& a) {
  a.check_canonical();
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("graph: adjacency must be square");
  }
  if (!a.is_symmetric(0.0)) {
    throw std::invalid_argument("graph: adjacency must be exactly symmetric");
  }
  if (!a.has_zero_diagonal()) {
    throw std::invalid_argument("graph: adjacency diagonal must be empty");
  }
  for (double v : a.values()) {
    if (v <= 0.0) {
      throw std::invalid_argument("graph: edge weights must be positive");
    }
  }
}

}  // namespace

Graph Graph::from_adjacency(SparseMatrix adjacency, std::vector<int> labels,
                            DenseMatrix features) {
  validate_adjacency(adjacency);
  const index_t n = adjacency.rows();
  if (!labels.empty() && static_cast<index_t>(labels.size()) != n) {
    throw std::invalid_argument("graph: label count differs from node count");
  }
  if (!features.empty() && features.rows() != n) {
    throw std::invalid_argument("graph: feature rows differ from node count");
  }
  Graph g;
  g.adjacency = std::move(adjacency);
  g.labels = std::move(labels);
  g.features = std::move(features);
  return g;
}

Graph Graph::from_edges(index_t n_nodes,
                        std::vector<SparseMatrix::Triplet> upper_edges,
                        std::vector<int> labels, DenseMatrix features) {
  std::vector<SparseMatrix::Triplet> both;
  both.reserve(upper_edges.size() * 2);
  for (const auto& [i, j, w] : upper_edges) {
    if (i == j) {
      throw std::invalid_argument("graph: self-loop in edge list");
    }
    both.emplace_back(i, j, w);
    both.emplace_back(j, i, w);
  }
  return from_adjacency(
      SparseMatrix::from_triplets(n_nodes, n_nodes, std::move(both)),
      std::move(labels), std::move(features));
}

std::vector<double> degrees(const Graph& g) { return row_sums(g.adjacency); }

double max_degree(const Graph& g) {
  const auto d = degrees(g);
  return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

index_t edge_count(const Graph& g) { return g.adjacency.nnz() / 2; }

SparseMatrix laplacian(const Graph& g) {
  const auto d = degrees(g);
  const SparseMatrix& a = g.adjacency;
  std::vector<SparseMatrix::Triplet> t;
  t.reserve(static_cast<std::size_t>(a.nnz()) + d.size());
  for (index_t r = 0; r < a.rows(); ++r) {
    for (index_t k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k) {
      t.emplace_back(r, a.col_idx()[k], -a.values()[k]);
    }
    t.emplace_back(r, r, d[r]);
  }
  return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

SparseMatrix normalized_adjacency(const Graph& g) {
  auto d = degrees(g);
  for (double& v : d) {
    if (v == 0.0) v = 1.0;  // isolated nodes keep their empty row
  }
  return scale_by_inv_sqrt_diag(g.adjacency, d);
}

Graph knn_graph(const DenseMatrix& x, int k, double kernel_bandwidth) {
  const index_t n = x.rows();
  if (k < 1 || k >= n) {
    throw std::invalid_argument("knn_graph: need 1 <= k < number of points");
  }

  // Brute-force neighbor search; ties broken by index for determinism.
  std::vector<std::vector<std::pair<double, index_t>>> nearest(
      static_cast<std::size_t>(n));
  std::vector<std::pair<double, index_t>> cand(
      static_cast<std::size_t>(n) - 1);
  for (index_t i = 0; i < n; ++i) {
    cand.clear();
    for (index_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double d2 = 0.0;
      for (index_t f = 0; f < x.cols(); ++f) {
        const double diff = x(i, f) - x(j, f);
        d2 += diff * diff;
      }
      cand.emplace_back(d2, j);
    }
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
    nearest[i].assign(cand.begin(), cand.begin() + k);
  }

  double sigma = kernel_bandwidth;
  if (sigma <= 0.0) {
    // Auto bandwidth: mean distance to the k-th neighbor.
    double acc = 0.0;
    for (index_t i = 0; i < n; ++i) {
      acc += std::sqrt(nearest[i].back().first);
    }
    sigma = acc / static_cast<double>(n);
    if (sigma == 0.0) sigma = 1.0;  // all points coincide
  }

  // Union symmetrization: keep the edge if either endpoint selected it.
  std::map<std::pair<index_t, index_t>, double> edges;
  for (index_t i = 0; i < n; ++i) {
    for (const auto& [d2, j] : nearest[i]) {
      const auto key = std::minmax(i, j);
      const double w = std::exp(-d2 / (sigma * sigma));
      edges[{key.first, key.second}] = w;
    }
  }

  std::vector<SparseMatrix::Triplet> upper;
  upper.reserve(edges.size());
  for (const auto& [key, w] : edges) {
    upper.emplace_back(key.first, key.second, w);
  }
  return Graph::from_edges(n, std::move(upper));
}

Graph erdos_renyi(index_t n, double p, WeightDist weights,
                  std::uint64_t seed) {
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("erdos_renyi: p must be in [0,1]");
  }
  Rng rng(seed);
  std::vector<SparseMatrix::Triplet> upper;
  for (index_t i = 0; i < n; ++i) {
    for (index_t j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) {
        const double w =
            weights == WeightDist::unit ? 1.0 : rng.uniform_open();
        upper.emplace_back(i, j, w);
      }
    }
  }
  return Graph::from_edges(n, std::move(upper));
}

Graph sbm(index_t n, int blocks, double p_in, double p_out,
          std::uint64_t seed) {
  if (blocks < 1 || n % blocks != 0) {
    throw std::invalid_argument("sbm: blocks must divide the node count");
  }
  if (p_in < 0.0 || p_in > 1.0 || p_out < 0.0 || p_out > 1.0) {
    throw std::invalid_argument("sbm: probabilities must be in [0,1]");
  }
  const index_t per_block = n / blocks;
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (index_t i = 0; i < n; ++i) {
    labels[i] = static_cast<int>(i / per_block);
  }
  Rng rng(seed);
  std::vector<SparseMatrix::Triplet> upper;
  for (index_t i = 0; i < n; ++i) {
    for (index_t j = i + 1; j < n; ++j) {
      const double p = labels[i] == labels[j] ? p_in : p_out;
      if (rng.uniform() < p) upper.emplace_back(i, j, 1.0);
    }
  }
  return Graph::from_edges(n, std::move(upper), std::move(labels));
}

Perturbation perturb(const Graph& g, double snr_db, std::uint64_t seed) {
  const SparseMatrix& a = g.adjacency;
  if (a.nnz() == 0) {
    throw std::invalid_argument("perturb: graph has no edges");
  }

  Perturbation out;
  out.snr_db = snr_db;
  if (std::isinf(snr_db) && snr_db > 0.0) {
    out.noise = SparseMatrix::from_triplets(a.rows(), a.cols(), {});
    out.achieved_snr_db = snr_db;
    return out;
  }

  // Zero-mean Gaussian draw per upper-triangular edge, scaled to the target
  // SNR, then projected into the admissible set: symmetric, empty diagonal,
  // |e_ij| <= a_ij.
  Rng rng(seed);
  std::vector<SparseMatrix::Triplet> raw;
  double a_frob2 = 0.0;
  double raw_frob2 = 0.0;
  for (index_t r = 0; r < a.rows(); ++r) {
    for (index_t k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k) {
      const index_t c = a.col_idx()[k];
      a_frob2 += a.values()[k] * a.values()[k];
      if (c <= r) continue;
      const double noise = rng.normal();
      raw.emplace_back(r, c, noise);
      raw_frob2 += 2.0 * noise * noise;
    }
  }

  const double scale =
      raw_frob2 > 0.0
          ? std::sqrt(a_frob2 / raw_frob2) * std::pow(10.0, -snr_db / 20.0)
          : 0.0;

  std::vector<SparseMatrix::Triplet> both;
  both.reserve(raw.size() * 2);
  double e_frob2 = 0.0;
  for (const auto& [r, c, noise] : raw) {
    const double bound = a.at(r, c);
    const double e = std::clamp(scale * noise, -bound, bound);
    if (e != 0.0) {
      both.emplace_back(r, c, e);
      both.emplace_back(c, r, e);
      e_frob2 += 2.0 * e * e;
    }
  }
  out.noise = SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(both));
  out.achieved_snr_db = e_frob2 > 0.0
                            ? 10.0 * std::log10(a_frob2 / e_frob2)
                            : std::numeric_limits<double>::infinity();
  return out;
}

Graph apply_perturbation(const Graph& g, const Perturbation& p) {
  const SparseMatrix& a = g.adjacency;
  const SparseMatrix& e = p.noise;
  if (e.rows() != a.rows() || e.cols() != a.cols()) {
    throw std::invalid_argument("apply_perturbation: dimension mismatch");
  }
  std::vector<SparseMatrix::Triplet> t;
  t.reserve(static_cast<std::size_t>(a.nnz() + e.nnz()));
  for (index_t r = 0; r < a.rows(); ++r) {
    for (index_t k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k) {
      t.emplace_back(r, a.col_idx()[k], a.values()[k]);
    }
    for (index_t k = e.row_ptr()[r]; k < e.row_ptr()[r + 1]; ++k) {
      t.emplace_back(r, e.col_idx()[k], e.values()[k]);
    }
  }
  // Edges cancelled exactly (e_ij = -a_ij) drop out of the CSR form.
  return Graph::from_adjacency(
      SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(t)), g.labels,
      g.features);
}

double homophily_index(const Graph& g, index_t* skipped) {
  if (!g.has_labels()) {
    throw std::invalid_argument("homophily_index: graph has no labels");
  }
  const SparseMatrix& a = g.adjacency;
  double acc = 0.0;
  index_t counted = 0;
  index_t isolated = 0;
  for (index_t v = 0; v < a.rows(); ++v) {
    const index_t deg = a.row_ptr()[v + 1] - a.row_ptr()[v];
    if (deg == 0) {
      ++isolated;
      continue;
    }
    index_t same = 0;
    for (index_t k = a.row_ptr()[v]; k < a.row_ptr()[v + 1]; ++k) {
      if (g.labels[a.col_idx()[k]] == g.labels[v]) ++same;
    }
    acc += static_cast<double>(same) / static_cast<double>(deg);
    ++counted;
  }
  if (skipped != nullptr) {
    *skipped = isolated;
  } else if (isolated > 0) {
    std::cerr << "homophily_index: skipped " << isolated
              << " isolated node(s)\n";
  }
  if (counted == 0) {
    throw std::invalid_argument("homophily_index: no non-isolated nodes");
  }
  return acc / static_cast<double>(counted);
}

double sparsity_percentage(const SparseMatrix& m) {
  const double total = static_cast<double>(m.rows()) * m.cols();
  if (total == 0.0) return 0.0;
  index_t nonzero = 0;
  for (double v : m.values()) {
    if (std::fabs(v) > 1e-12) ++nonzero;
  }
  return 100.0 * (total - static_cast<double>(nonzero)) / total;
}

double sparsity_percentage(const DenseMatrix& m) {
  const double total = static_cast<double>(m.rows()) * m.cols();
  if (total == 0.0) return 0.0;
  index_t zero = 0;
  for (double v : m.data()) {
    if (std::fabs(v) <= 1e-12) ++zero;
  }
  return 100.0 * static_cast<double>(zero) / total;
}

index_t SplitMask::n_train() const {
  return std::count(train.begin(), train.end(), 1);
}
index_t SplitMask::n_val() const {
  return std::count(val.begin(), val.end(), 1);
}
index_t SplitMask::n_test() const {
  return std::count(test.begin(), test.end(), 1);
}

namespace {
std::vector<index_t> mask_indices(const std::vector<char>& m) {
  std::vector<index_t> idx;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i]) idx.push_back(static_cast<index_t>(i));
  }
  return idx;
}
}  // namespace

std::vector<index_t> SplitMask::train_indices() const {
  return mask_indices(train);
}
std::vector<index_t> SplitMask::val_indices() const {
  return mask_indices(val);
}
std::vector<index_t> SplitMask::test_indices() const {
  return mask_indices(test);
}

void SplitMask::validate() const {
  if (train.size() != val.size() || train.size() != test.size()) {
    throw std::invalid_argument("split: mask lengths disagree");
  }
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (static_cast<int>(train[i]) + val[i] + test[i] > 1) {
      throw std::invalid_argument("split: masks overlap at node " +
                                  std::to_string(i));
    }
  }
  if (n_train() == 0) {
    throw std::invalid_argument("split: empty training set");
  }
}

namespace {

SplitMask build_split(index_t n, const std::vector<std::vector<index_t>>& groups,
                      double f_train, double f_val, double f_test,
                      std::uint64_t seed) {
  SplitMask mask;
  mask.train.assign(static_cast<std::size_t>(n), 0);
  mask.val.assign(static_cast<std::size_t>(n), 0);
  mask.test.assign(static_cast<std::size_t>(n), 0);

  std::uint64_t salt = 0;
  for (const auto& group : groups) {
    std::vector<index_t> order = group;
    Rng rng(mix_seed(seed, salt++));
    rng.shuffle(order);
    const auto gn = static_cast<double>(order.size());
    const auto n_train = static_cast<index_t>(std::floor(f_train * gn + 0.5));
    const auto n_val = static_cast<index_t>(std::floor(f_val * gn + 0.5));
    const auto n_test = std::min<index_t>(
        static_cast<index_t>(std::floor(f_test * gn + 0.5)),
        static_cast<index_t>(order.size()) - n_train - n_val);
    index_t pos = 0;
    for (index_t i = 0; i < n_train; ++i) mask.train[order[pos++]] = 1;
    for (index_t i = 0; i < n_val; ++i) mask.val[order[pos++]] = 1;
    for (index_t i = 0; i < n_test; ++i) mask.test[order[pos++]] = 1;
  }
  mask.validate();
  return mask;
}

}  // namespace

SplitMask split_fractions(index_t n, double f_train, double f_val,
                          double f_test, std::uint64_t seed,
                          const std::vector<int>& labels) {
  if (f_train < 0.0 || f_val < 0.0 || f_test < 0.0 ||
      f_train + f_val + f_test > 1.0 + 1e-12) {
    throw std::invalid_argument("split: fractions must be >= 0 and sum <= 1");
  }
  std::vector<std::vector<index_t>> groups;
  if (labels.empty()) {
    groups.emplace_back(static_cast<std::size_t>(n));
    std::iota(groups.back().begin(), groups.back().end(), 0);
  } else {
    if (static_cast<index_t>(labels.size()) != n) {
      throw std::invalid_argument("split: label count differs from n");
    }
    std::map<int, std::vector<index_t>> by_label;
    for (index_t i = 0; i < n; ++i) by_label[labels[i]].push_back(i);
    for (auto& [label, idx] : by_label) groups.push_back(std::move(idx));
  }
  return build_split(n, groups, f_train, f_val, f_test, seed);
}

SplitMask split_per_class(const std::vector<int>& labels, index_t per_class,
                          std::uint64_t seed) {
  const auto n = static_cast<index_t>(labels.size());
  if (n == 0) throw std::invalid_argument("split: no labels given");
  std::map<int, std::vector<index_t>> by_label;
  for (index_t i = 0; i < n; ++i) by_label[labels[i]].push_back(i);

  SplitMask mask;
  mask.train.assign(static_cast<std::size_t>(n), 0);
  mask.val.assign(static_cast<std::size_t>(n), 0);
  mask.test.assign(static_cast<std::size_t>(n), 0);

  std::uint64_t salt = 0;
  for (auto& [label, idx] : by_label) {
    if (static_cast<index_t>(idx.size()) < per_class) {
      throw std::invalid_argument("split: class " + std::to_string(label) +
                                  " has fewer than " +
                                  std::to_string(per_class) + " nodes");
    }
    Rng rng(mix_seed(seed, salt++));
    rng.shuffle(idx);
    for (index_t i = 0; i < per_class; ++i) mask.train[idx[i]] = 1;
    for (std::size_t i = per_class; i < idx.size(); ++i) mask.val[idx[i]] = 1;
  }
  mask.validate();
  return mask;
}

}  // namespace s2gnn
