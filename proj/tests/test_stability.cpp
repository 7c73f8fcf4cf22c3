#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>

#include "s2gnn/eig.hpp"
#include "s2gnn/sobolev.hpp"
#include "s2gnn/stability.hpp"
#include "test_helpers.hpp"

using namespace s2gnn;
using namespace s2gnn::testing;

namespace {

Perturbation zero_perturbation(const Graph& g) {
  Perturbation p;
  p.noise = SparseMatrix::from_triplets(g.n_nodes(), g.n_nodes(), {});
  p.snr_db = std::numeric_limits<double>::infinity();
  p.achieved_snr_db = p.snr_db;
  return p;
}

}  // namespace

TEST_CASE("ss2gnn forward fixtures") {
  const auto g = random_connected_graph(5, 0.4, 3);
  const auto l = laplacian(g);
  Rng rng(7);
  const auto x = random_dense(5, 3, rng);

  CHECK(max_abs(ss2gnn_forward(l, x, DenseMatrix(3, 2), 0.5, 2,
                               LipschitzActivation::identity)) == 0.0);

  const auto w = random_dense(3, 2, rng);
  CHECK(max_abs_diff(
            ss2gnn_forward(l, x, w, 0.0, 1, LipschitzActivation::identity),
            matmul(to_dense(l), matmul(x, w))) < 1e-12);

  // Three-node hand case against the explicit dense chain.
  const auto g3 = path_graph(3);
  const auto l3 = laplacian(g3);
  const auto x3 = random_dense(3, 2, rng);
  const auto w3 = random_dense(2, 2, rng);
  const auto term = to_dense(sparse_sobolev_term(l3, 0.5, 2));
  auto expect = matmul(term, matmul(x3, w3));
  for (double& v : expect.data()) v = v > 0.0 ? v : 0.0;
  CHECK(max_abs_diff(
            ss2gnn_forward(l3, x3, w3, 0.5, 2, LipschitzActivation::relu),
            expect) < 1e-12);
}

TEST_CASE("closed-form elements of powered laplacians") {
  const auto pair = Graph::from_edges(2, {{0, 1, 2.0}});
  const auto fixture = laplacian_power_elements(pair, zero_perturbation(pair), 1.0, 2);
  CHECK(fixture.original.at(0, 0) == 9.0);
  CHECK(fixture.original.at(1, 1) == 9.0);
  CHECK(fixture.original.at(0, 1) == 4.0);
  CHECK(max_abs_diff(to_dense(fixture.original), to_dense(fixture.perturbed)) ==
        0.0);

  const auto odd = laplacian_power_elements(pair, zero_perturbation(pair), 1.0, 3);
  CHECK(odd.original.at(0, 1) == -8.0);  // (-1)^3 a^3

  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = erdos_renyi(8, 0.4, WeightDist::uniform, 500 + trial);
    if (edge_count(g) == 0) continue;
    const auto e = perturb(g, 10.0, trial);
    const double eps = 0.25 * (1 + trial % 4);
    const int rho = 1 + trial % 4;

    const auto pair_out = laplacian_power_elements(g, e, eps, rho);
    const auto direct = sparse_sobolev_term(laplacian(g), eps, rho);
    const auto direct_hat =
        sparse_sobolev_term(laplacian(apply_perturbation(g, e)), eps, rho);

    CHECK(pair_out.original.pattern_equals(direct));
    CHECK(pair_out.original.values() == direct.values());
    CHECK(pair_out.perturbed.pattern_equals(direct_hat));
    CHECK(pair_out.perturbed.values() == direct_hat.values());
  }
}

TEST_CASE("laplacian perturbation distance bound") {
  const auto g = erdos_renyi(10, 0.4, WeightDist::uniform, 21);
  const auto none = perturbation_distance_bound(g, zero_perturbation(g), 0.5, 2);
  CHECK(none.exact_lhs_norm == 0.0);
  CHECK(none.binomial_rhs == 0.0);
  CHECK(none.first_order_rhs == 0.0);

  Rng rng(23);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto graph =
        erdos_renyi(10, 0.1 + 0.2 * (trial % 3), WeightDist::unit, trial);
    if (edge_count(graph) == 0) continue;
    const double snr = 5.0 + 10.0 * (trial % 4);
    const auto e = perturb(graph, snr, 900 + trial);
    for (int rho : {1, 2, 3}) {
      const double eps = 0.5 + 2.0 * (trial % 3);
      const auto bound = perturbation_distance_bound(graph, e, eps, rho);
      CHECK(bound.exact_lhs_norm <= bound.binomial_rhs * (1 + 1e-12) + 1e-12);
      CHECK(bound.first_order_rhs <= bound.binomial_rhs * (1 + 1e-12));
      // Symmetric input: max row and column norms coincide, so eta_m is
      // exactly the max Euclidean row norm.
      const auto a = to_dense(graph.adjacency);
      for (int m = 1; m <= rho; ++m) {
        DenseMatrix a_pow(a.rows(), a.cols());
        for (std::size_t i = 0; i < a.data().size(); ++i) {
          double v = 1.0;
          for (int p = 0; p < rho - m; ++p) v *= a.data()[i];
          a_pow.data()[i] = v;
        }
        double r1 = 0.0;
        for (index_t i = 0; i < a_pow.rows(); ++i) {
          double acc = 0.0;
          for (index_t j = 0; j < a_pow.cols(); ++j) {
            acc += a_pow(i, j) * a_pow(i, j);
          }
          r1 = std::max(r1, std::sqrt(acc));
        }
        CHECK(bound.eta_m[m - 1] == doctest::Approx(r1).epsilon(1e-12));
      }
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("zhan hadamard norm inequality") {
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<index_t>(3 + rng.below(6));
    const auto a1 = random_symmetric(n, rng);
    const auto a2 = random_symmetric(n, rng);
    DenseMatrix had(n, n);
    for (std::size_t i = 0; i < had.data().size(); ++i) {
      had.data()[i] = a1.data()[i] * a2.data()[i];
    }
    double r1 = 0.0;
    for (index_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (index_t j = 0; j < n; ++j) acc += a1(i, j) * a1(i, j);
      r1 = std::max(r1, std::sqrt(acc));
    }
    CHECK(spectral_norm(had) <= r1 * spectral_norm(a2) * (1 + 1e-9) + 1e-12);
  }
}

TEST_CASE("output perturbation bound fixtures") {
  Rng rng(31);
  const auto g = erdos_renyi(10, 0.3, WeightDist::unit, 33);
  REQUIRE(edge_count(g) > 0);

  StabilityInputs in;
  in.g = g;
  in.e = zero_perturbation(g);
  in.x = random_dense(10, 4, rng);
  in.w = random_dense(4, 2, rng);
  in.w_hat = in.w;
  in.epsilon = 0.5;
  in.rho = 2;

  SUBCASE("no perturbation anywhere") {
    const auto b = output_perturbation_bound(in);
    CHECK(b.lhs == 0.0);
    CHECK(b.rhs_first_order == 0.0);
    CHECK(b.rhs_exact_binomial == 0.0);
  }

  SUBCASE("structure term isolated when weights agree") {
    in.e = perturb(g, 10.0, 35);
    const auto b = output_perturbation_bound(in);
    CHECK(b.delta_w == 0.0);
    CHECK(b.weight_term == 0.0);
    CHECK(b.lhs <= b.rhs_exact_binomial);
    CHECK(b.rhs_first_order <= b.rhs_exact_binomial);
  }

  SUBCASE("exact bound holds across random draws and both activations") {
    for (int trial = 0; trial < 60; ++trial) {
      StabilityInputs t;
      t.g = erdos_renyi(10, 0.3, WeightDist::unit, 2000 + trial);
      if (edge_count(t.g) == 0) continue;
      Rng local(400 + trial);
      t.x = random_dense(10, 4, local);
      for (index_t j = 0; j < t.x.cols(); ++j) {
        double norm = 0.0;
        for (index_t i = 0; i < t.x.rows(); ++i) norm += t.x(i, j) * t.x(i, j);
        norm = std::sqrt(norm);
        for (index_t i = 0; i < t.x.rows(); ++i) t.x(i, j) /= norm;
      }
      t.w = random_dense(4, 2, local);
      t.w_hat = t.w;
      add_in_place(t.w_hat, random_dense(4, 2, local), 0.05);
      t.e = perturb(t.g, 20.0, 600 + trial);
      t.epsilon = 0.5;
      t.rho = 2 + trial % 2;
      t.sigma = trial % 2 == 0 ? LipschitzActivation::identity
                               : LipschitzActivation::relu;

      const auto b = output_perturbation_bound(t);
      CHECK(b.lhs <= b.rhs_exact_binomial * (1 + 1e-12));
      // Triangle-inequality cap on the perturbed Laplacian power norm.
      const double cap =
          std::pow(b.d_hat_max + t.epsilon, t.rho) + b.norm_a_hat_rho;
      CHECK(b.norm_l_hat_rho <= cap * (1 + 1e-12));
    }
  }

  SUBCASE("shape errors are rejected") {
    in.w_hat = DenseMatrix(5, 2);
    CHECK_THROWS_AS(output_perturbation_bound(in), std::invalid_argument);
  }
}

TEST_CASE("stability sweep on a reduced grid") {
  SweepProtocol proto;
  proto.rhos = {2, 3};
  proto.p_er = {0.3};
  proto.epsilons = {0.5, 5.0};
  proto.snrs_db = {5.0, 10.0, 20.0, 30.0, 40.0};
  proto.n_seeds = 10;
  proto.master_seed = 123;

  const auto cells = stability_sweep(proto);
  CHECK(cells.size() == 2 * 1 * 2 * 5);

  std::map<std::tuple<int, double, double>, std::vector<SweepCell>> families;
  for (const auto& c : cells) {
    CHECK(c.violations == 0);
    CHECK(c.mean_rhs_first_order <= c.mean_rhs_exact * (1 + 1e-12));
    families[{c.rho, c.p_er, c.epsilon}].push_back(c);
  }
  for (auto& [key, family] : families) {
    for (std::size_t i = 1; i < family.size(); ++i) {
      CHECK(family[i].snr_db > family[i - 1].snr_db);  // grid order kept
      CHECK(family[i].mean_lhs <= family[i - 1].mean_lhs * (1 + 1e-12));
    }
  }

  // Matched cells: higher Hadamard order is more sensitive at low SNR.
  for (const auto& c2 : cells) {
    if (c2.rho != 2 || c2.snr_db != 5.0) continue;
    for (const auto& c3 : cells) {
      if (c3.rho == 3 && c3.snr_db == 5.0 && c3.p_er == c2.p_er &&
          c3.epsilon == c2.epsilon) {
        CHECK(c3.mean_lhs >= c2.mean_lhs);
      }
    }
  }
}
