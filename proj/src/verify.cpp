#include "s2gnn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "s2gnn/eig.hpp"
#include "s2gnn/graph.hpp"
#include "s2gnn/neural.hpp"
#include "s2gnn/rng.hpp"
#include "s2gnn/sobolev.hpp"
#include "s2gnn/stability.hpp"

namespace s2gnn::verify {

namespace {

Graph random_connected_unit_graph(index_t n, double extra_edge_prob,
                                  std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SparseMatrix::Triplet> both;
  for (index_t i = 1; i < n; ++i) {
    const auto parent = static_cast<index_t>(rng.below(i));
    both.emplace_back(parent, i, 1.0);
    both.emplace_back(i, parent, 1.0);
  }
  for (index_t i = 0; i < n; ++i) {
    for (index_t j = i + 2; j < n; ++j) {
      if (rng.uniform() < extra_edge_prob) {
        both.emplace_back(i, j, 1.0);
        both.emplace_back(j, i, 1.0);
      }
    }
  }
  // from_triplets sums duplicates; unit duplicates stay integral.
  return Graph::from_adjacency(SparseMatrix::from_triplets(n, n, std::move(both)));
}

}  // namespace

SuiteResult run_spectrum_suite(std::uint64_t seed, int n_graphs) {
  double max_err = 0.0;
  std::string worst;
  for (int i = 0; i < n_graphs; ++i) {
    const auto n = static_cast<index_t>(3 + i % 6);  // 3..8
    const auto g =
        erdos_renyi(n, 0.5, WeightDist::uniform, mix_seed(seed, i));
    const auto l = laplacian(g);
    for (int rho : {2, 3}) {
      const double err = verify_hadamard_spectrum(l, rho);
      if (err > max_err) {
        max_err = err;
        worst = "N=" + std::to_string(n) + " rho=" + std::to_string(rho);
      }
    }
  }

  SuiteResult out;
  out.suite = "spectrum";
  out.properties.push_back(
      {"hadamard_spectrum_reconstruction", max_err < 1e-9, max_err, 1e-9,
       std::to_string(n_graphs) + " weighted ER graphs, worst " + worst});
  return out;
}

SuiteResult run_norm_suite(std::uint64_t seed, int n_tuples) {
  const double epsilons[] = {0.5, 1.0, 2.0};

  double triangle_excess = -1e300;
  double homogeneity_rel = 0.0;
  double min_positive_norm = 1e300;
  bool positive = true;

  Rng rng(mix_seed(seed, 0));
  for (int t = 0; t < n_tuples; ++t) {
    const auto n = static_cast<index_t>(4 + rng.below(17));
    const auto g =
        erdos_renyi(n, 0.4, WeightDist::uniform, mix_seed(seed, 10000 + t));
    const auto l = laplacian(g);
    const double eps = epsilons[t % 3];
    const int rho = 1 + t % 4;

    std::vector<double> x(n), y(n), sum(n);
    for (index_t i = 0; i < n; ++i) {
      x[i] = rng.normal();
      y[i] = rng.normal();
      sum[i] = x[i] + y[i];
    }
    const double s = rng.uniform(-3.0, 3.0);

    const double nx = sparse_sobolev_norm(x, l, eps, rho);
    const double ny = sparse_sobolev_norm(y, l, eps, rho);
    const double nsum = sparse_sobolev_norm(sum, l, eps, rho);
    triangle_excess = std::max(triangle_excess, nsum - nx - ny);

    std::vector<double> sx(n);
    for (index_t i = 0; i < n; ++i) sx[i] = s * x[i];
    const double nsx = sparse_sobolev_norm(sx, l, eps, rho);
    homogeneity_rel =
        std::max(homogeneity_rel, std::fabs(nsx - std::fabs(s) * nx) /
                                      std::max(nsx, 1e-300));

    if (l2_norm(x) > 1e-6) {
      min_positive_norm = std::min(min_positive_norm, nx);
      positive = positive && nx > 0.0;
    }
  }

  // Semi-norm kernel case: constants on connected graphs at eps = 0, rho = 1.
  // Unit weights keep degrees integral and a short-mantissa constant keeps
  // every product and partial sum exact, so the kernel cancellation is exact.
  double seminorm_max = 0.0;
  const int n_kernel = std::max(1, n_tuples / 10);
  for (int t = 0; t < n_kernel; ++t) {
    const auto n = static_cast<index_t>(4 + rng.below(17));
    const auto g =
        random_connected_unit_graph(n, 0.3, mix_seed(seed, 20000 + t));
    const double c =
        (1.0 + static_cast<double>(rng.below(12))) * 0.25 *
        (rng.uniform() < 0.5 ? -1.0 : 1.0);
    const std::vector<double> constant(static_cast<std::size_t>(n), c);
    seminorm_max = std::max(
        seminorm_max, sparse_sobolev_norm(constant, laplacian(g), 0.0, 1));
  }

  SuiteResult out;
  out.suite = "norm";
  out.properties.push_back({"triangle_inequality", triangle_excess <= 1e-9,
                            triangle_excess, 1e-9,
                            std::to_string(n_tuples) + " tuples, max excess"});
  out.properties.push_back({"absolute_homogeneity",
                            homogeneity_rel <= 1e-12, homogeneity_rel, 1e-12,
                            "max relative deviation"});
  out.properties.push_back(
      {"positive_definiteness", positive && min_positive_norm > 0.0,
       min_positive_norm, 0.0, "min norm over nonzero signals (must be > 0)"});
  out.properties.push_back(
      {"seminorm_constant_kernel", seminorm_max < 1e-12, seminorm_max, 1e-12,
       std::to_string(n_kernel) + " connected unit-weight graphs"});
  return out;
}

SuiteResult run_gradient_suite(std::uint64_t seed) {
  const auto g = random_connected_unit_graph(12, 0.25, mix_seed(seed, 1));
  Rng rng(mix_seed(seed, 2));
  DenseMatrix x(12, 4);
  for (double& v : x.data()) v = rng.normal();
  std::vector<int> labels(12);
  for (auto& l : labels) l = static_cast<int>(rng.below(3));
  std::vector<char> mask(12, 1);

  SuiteResult out;
  out.suite = "gradients";

  struct Variant {
    std::string name;
    FusionKind fusion;
    bool gcn;
  };
  const Variant variants[] = {{"linear_fusion", FusionKind::linear, false},
                              {"mlp_fusion", FusionKind::mlp, false},
                              {"gcn_baseline", FusionKind::linear, true}};
  for (const auto& variant : variants) {
    ModelConfig cfg;
    cfg.alpha = 2;
    cfg.epsilon = 1.0;
    cfg.n_layers = 2;
    cfg.hidden_units = {6, 3};
    cfg.fusion = variant.fusion;
    cfg.dropout = 0.0;
    cfg.weight_decay = 1e-3;
    cfg.seed = mix_seed(seed, 3);
    cfg.gcn_baseline = variant.gcn;
    Model model(cfg, g, 4);

    ForwardCache cache;
    model.forward(x, &cache);
    Gradients grads = model.backward(cache, labels, mask);
    auto grad_view = gradient_refs(grads);
    auto params = model.parameters();

    const double h = 1e-5;
    double worst = 0.0;
    for (std::size_t p = 0; p < params.size(); ++p) {
      for (std::size_t i = 0; i < params[p].size; ++i) {
        const double saved = params[p].data[i];
        params[p].data[i] = saved + h;
        const double up = model.objective(x, labels, mask);
        params[p].data[i] = saved - h;
        const double down = model.objective(x, labels, mask);
        params[p].data[i] = saved;
        const double fd = (up - down) / (2.0 * h);
        const double analytic = grad_view[p].data[i];
        worst = std::max(worst, std::fabs(analytic - fd) /
                                    std::max({std::fabs(analytic),
                                              std::fabs(fd), 1e-6}));
      }
    }
    out.properties.push_back({"finite_difference_" + variant.name,
                              worst < 1e-4, worst, 1e-4,
                              "central differences, h=1e-5, all parameters"});
  }
  return out;
}

SuiteResult run_stability_suite(std::uint64_t seed, int n_seeds) {
  SweepProtocol proto;
  proto.n_seeds = n_seeds;
  proto.master_seed = seed;
  const auto cells = stability_sweep(proto);

  int violations = 0;
  std::map<std::tuple<int, double, double>, std::vector<SweepCell>> families;
  for (const auto& c : cells) {
    violations += c.violations;
    families[{c.rho, c.p_er, c.epsilon}].push_back(c);
  }

  double max_jump = -1e300;
  for (const auto& [key, family] : families) {
    for (std::size_t i = 1; i < family.size(); ++i) {
      max_jump = std::max(max_jump,
                          family[i].mean_lhs - family[i - 1].mean_lhs);
    }
  }

  double min_rho_gap = 1e300;
  for (const auto& c2 : cells) {
    if (c2.rho != 2 || c2.snr_db != proto.snrs_db.front()) continue;
    for (const auto& c3 : cells) {
      if (c3.rho == 3 && c3.snr_db == c2.snr_db && c3.p_er == c2.p_er &&
          c3.epsilon == c2.epsilon) {
        min_rho_gap = std::min(min_rho_gap, c3.mean_lhs - c2.mean_lhs);
      }
    }
  }

  SuiteResult out;
  out.suite = "stability";
  out.properties.push_back(
      {"exact_binomial_bound_violations", violations == 0,
       static_cast<double>(violations), 0.0,
       std::to_string(cells.size()) + " cells x " + std::to_string(n_seeds) +
           " seeds"});
  out.properties.push_back(
      {"mean_lhs_non_increasing_in_snr", max_jump <= 0.0, max_jump, 0.0,
       "max increase across SNR steps (must be <= 0)"});
  out.properties.push_back(
      {"rho3_at_least_rho2_at_low_snr", min_rho_gap >= 0.0, min_rho_gap, 0.0,
       "min mean-LHS gap rho=3 minus rho=2 at SNR=5 (must be >= 0)"});
  return out;
}

std::vector<SuiteResult> run_all(std::uint64_t seed) {
  return {run_spectrum_suite(seed), run_norm_suite(seed),
          run_stability_suite(seed), run_gradient_suite(seed)};
}

}  // namespace s2gnn::verify
