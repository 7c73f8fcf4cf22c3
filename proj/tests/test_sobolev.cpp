#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "s2gnn/eig.hpp"
#include "s2gnn/graph.hpp"
#include "s2gnn/sobolev.hpp"
#include "test_helpers.hpp"

using namespace s2gnn;
using namespace s2gnn::testing;

TEST_CASE("sobolev terms, sparse and dense") {
  const auto pair_adj = sparse({{0, 1}, {1, 0}});
  CHECK(max_abs_diff(to_dense(sparse_sobolev_term(pair_adj, 1.0, 2)),
                     dense({{1, 1}, {1, 1}})) == 0.0);

  CHECK(max_abs_diff(to_dense(sparse_sobolev_term(pair_adj, 0.0, 1)),
                     to_dense(pair_adj)) == 0.0);
  CHECK(max_abs_diff(dense_sobolev_term(pair_adj, 0.0, 1),
                     to_dense(pair_adj)) == 0.0);

  // The densification phenomenon: the ordinary square fills the corner of
  // the path Laplacian, the Hadamard square does not.
  const auto l = laplacian(path_graph(3));
  CHECK(sparse_sobolev_term(l, 0.0, 2).at(0, 2) == 0.0);
  CHECK(dense_sobolev_term(l, 0.0, 2)(0, 2) == 1.0);

  CHECK_THROWS_AS(sparse_sobolev_term(sparse({{0, 1}, {2, 0}}), 1.0, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(dense_sobolev_term(laplacian(path_graph(10)), 1.0, 2, 5),
                  std::invalid_argument);
}

TEST_CASE("sparse sobolev norm fixtures") {
  const auto l2 = laplacian(path_graph(2));
  const std::vector<double> x = {1.0, -1.0};
  CHECK(sparse_sobolev_norm(x, l2, 0.0, 1) ==
        doctest::Approx(2.0).epsilon(1e-14));

  const std::vector<double> zero = {0.0, 0.0};
  CHECK(sparse_sobolev_norm(zero, l2, 0.0, 1) == 0.0);

  // Constant vectors sit in the Laplacian kernel of a connected graph. Unit
  // weights keep the degree sums exact, so the cancellation is exact too.
  const auto g = random_connected_graph(14, 0.25, 3, /*unit_weights=*/true);
  const std::vector<double> ones(14, 2.5);
  CHECK(sparse_sobolev_norm(ones, laplacian(g), 0.0, 1) < 1e-12);

  // With real-valued weights the degree sums round, so the kernel property
  // holds to accumulation accuracy rather than exactly.
  const auto gw = random_connected_graph(14, 0.25, 3);
  CHECK(sparse_sobolev_norm(ones, laplacian(gw), 0.0, 1) < 1e-6);

  // Indefinite input surfaces as a negative quadratic form.
  const auto indefinite = sparse({{0, 1}, {1, 0}});
  const std::vector<double> alternating = {1.0, -1.0};
  CHECK_THROWS_AS(sparse_sobolev_norm(alternating, indefinite, 0.0, 1),
                  std::invalid_argument);
}

TEST_CASE("norm axioms hold for positive eps") {
  Rng rng(61);
  const double epsilons[] = {0.5, 1.0, 2.0};
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<index_t>(4 + rng.below(12));
    const auto g = random_connected_graph(n, 0.3, rng.next_u64());
    const auto l = laplacian(g);
    const double eps = epsilons[trial % 3];
    const int rho = 1 + trial % 4;

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
    CHECK(nsum <= nx + ny + 1e-9);

    std::vector<double> sx(n);
    for (index_t i = 0; i < n; ++i) sx[i] = s * x[i];
    const double nsx = sparse_sobolev_norm(sx, l, eps, rho);
    CHECK(std::fabs(nsx - std::fabs(s) * nx) <=
          1e-12 * std::max(1.0, nsx));

    CHECK(nx > 0.0);  // positive definiteness for eps > 0
  }
}

TEST_CASE("schur positivity of the shifted hadamard powers") {
  Rng rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    const auto n = static_cast<index_t>(5 + rng.below(46));
    const auto g = random_connected_graph(n, 0.15, rng.next_u64());
    const auto l = laplacian(g);
    for (int rho : {1, 2, 3}) {
      const auto term = sparse_sobolev_term(l, 0.75, rho);
      CHECK(eig_sym(term).eigenvalues.front() > 0.0);
    }
    // Adjacency variant: normalized adjacency spectrum lies in [-1, 1], so
    // any eps > 1 makes the shifted matrix positive definite.
    const auto a_norm = normalized_adjacency(g);
    for (int rho : {1, 2, 3}) {
      const auto term = sparse_sobolev_term(a_norm, 1.25, rho);
      CHECK(eig_sym(term).eigenvalues.front() > 0.0);
    }
  }
}

TEST_CASE("shift bank matches the GCN operator at eps=1, rho=1") {
  const auto g = random_connected_graph(10, 0.3, 77);
  const auto bank = build_shift_bank(g, 1.0, 1);

  const auto shifted = add_scaled_identity(g.adjacency, 1.0);
  const auto expected = scale_by_inv_sqrt_diag(shifted, row_sums(shifted));
  CHECK(max_abs_diff(to_dense(bank.op(1)), to_dense(expected)) == 0.0);
}

TEST_CASE("shift bank fixtures and invariants") {
  const auto edgeless = Graph::from_adjacency(SparseMatrix::from_triplets(4, 4, {}));
  for (int alpha : {1, 3}) {
    const auto bank = build_shift_bank(edgeless, 2.0, alpha);
    for (int rho = 1; rho <= alpha; ++rho) {
      CHECK(max_abs_diff(to_dense(bank.op(rho)), DenseMatrix::identity(4)) <
            1e-14);
    }
  }

  const auto pair = Graph::from_edges(2, {{0, 1, 1.0}});
  const auto bank2 = build_shift_bank(pair, 1.0, 2);
  CHECK(max_abs_diff(to_dense(bank2.op(2)),
                     dense({{0.5, 0.5}, {0.5, 0.5}})) < 1e-15);

  const auto g = random_connected_graph(12, 0.3, 81);
  const auto bank = build_shift_bank(g, 0.7, 4);
  const auto pattern = add_scaled_identity(g.adjacency, 0.7);
  index_t nnz_total = 0;
  for (int rho = 1; rho <= 4; ++rho) {
    const auto& op = bank.op(rho);
    CHECK(op.is_symmetric(0.0));
    CHECK(op.pattern_equals(pattern));
    nnz_total += op.nnz();
    const auto dec = eig_sym(op);
    const double radius = std::max(std::fabs(dec.eigenvalues.front()),
                                   std::fabs(dec.eigenvalues.back()));
    CHECK(radius <= 1.0 + 1e-9);
  }
  CHECK(nnz_total == 4 * pattern.nnz());

  CHECK_THROWS_AS(build_shift_bank(g, 0.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_shift_bank(g, -1.0, 2), std::invalid_argument);
}

TEST_CASE("regular-power bank reproduces dense sobolev normalization") {
  const auto g = random_connected_graph(8, 0.4, 91);
  ShiftBankOptions opts;
  opts.epsilon = 1.0;
  opts.alpha = 2;
  opts.regular_power = true;
  const auto bank = build_shift_bank(g, opts);

  const auto dense_term = dense_sobolev_term(g.adjacency, 1.0, 2);
  std::vector<double> deg(8, 0.0);
  for (index_t i = 0; i < 8; ++i) {
    for (index_t j = 0; j < 8; ++j) deg[i] += dense_term(i, j);
  }
  DenseMatrix expected(8, 8);
  for (index_t i = 0; i < 8; ++i) {
    for (index_t j = 0; j < 8; ++j) {
      expected(i, j) = dense_term(i, j) / std::sqrt(deg[i] * deg[j]);
    }
  }
  CHECK(max_abs_diff(to_dense(bank.op(2)), expected) < 1e-12);

  opts.dense_cap = 4;
  CHECK_THROWS_AS(build_shift_bank(g, opts), std::invalid_argument);
}

TEST_CASE("laplacian-based bank is supported") {
  const auto g = random_connected_graph(6, 0.4, 95);
  ShiftBankOptions opts;
  opts.epsilon = 1.0;
  opts.alpha = 2;
  opts.base = BankBase::laplacian_sobolev;
  const auto bank = build_shift_bank(g, opts);
  CHECK(bank.operators.size() == 2);
  for (const auto& op : bank.operators) CHECK(op.is_symmetric(0.0));
}

TEST_CASE("polynomial graph filter") {
  const auto s = sparse({{0, 1}, {1, 0}});
  const std::vector<double> x = {1.0, 0.0};

  const auto pass = apply_polynomial_filter(s, {{1.0}}, x);
  CHECK(pass == std::vector<double>{1.0, 0.0});

  const auto shift = apply_polynomial_filter(s, {{0.0, 1.0}}, x);
  CHECK(shift == std::vector<double>{0.0, 1.0});

  const auto both = apply_polynomial_filter(s, {{1.0, 1.0}}, x);
  CHECK(both == std::vector<double>{1.0, 1.0});

  // Never forms S^k: matches the explicit dense power evaluation.
  Rng rng(71);
  const auto g = random_connected_graph(9, 0.3, 111);
  const auto l = laplacian(g);
  std::vector<double> v(9);
  for (double& e : v) e = rng.normal();
  FilterCoefficients q{{0.3, -0.5, 0.2, 1.1}};
  const auto filtered = apply_polynomial_filter(l, q, v);
  DenseMatrix acc(9, 9);
  std::vector<double> expect(9, 0.0);
  const auto ld = to_dense(l);
  DenseMatrix power = DenseMatrix::identity(9);
  for (std::size_t k = 0; k < q.q.size(); ++k) {
    if (k > 0) power = matmul(power, ld);
    for (index_t i = 0; i < 9; ++i) {
      for (index_t j = 0; j < 9; ++j) expect[i] += q.q[k] * power(i, j) * v[j];
    }
  }
  for (index_t i = 0; i < 9; ++i) {
    CHECK(filtered[i] == doctest::Approx(expect[i]).epsilon(1e-10));
  }
}

TEST_CASE("hadamard spectrum reconstruction oracle") {
  CHECK(verify_hadamard_spectrum(SparseMatrix::identity(5), 2) < 1e-12);

  Rng rng(73);
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = erdos_renyi(6, 0.5, WeightDist::uniform, 400 + trial);
    const auto l = laplacian(g);
    CHECK(verify_hadamard_spectrum(l, 2) < 1e-9);
    CHECK(verify_hadamard_spectrum(l, 3) < 1e-9);

    // Independent oracle: the Hadamard cube is the elementwise cube.
    const auto cube = hadamard_power(l, 3);
    const auto ld = to_dense(l);
    for (index_t i = 0; i < 6; ++i) {
      for (index_t j = 0; j < 6; ++j) {
        CHECK(cube.at(i, j) ==
              doctest::Approx(ld(i, j) * ld(i, j) * ld(i, j)).epsilon(1e-14));
      }
    }
  }

  CHECK_THROWS_AS(verify_hadamard_spectrum(SparseMatrix::identity(11), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(verify_hadamard_spectrum(SparseMatrix::identity(4), 4),
                  std::invalid_argument);
}

TEST_CASE("support of ordinary powers only grows") {
  // The dense column of the sparsity table never gains zeros as rho rises.
  const auto g = erdos_renyi(20, 0.15, WeightDist::uniform, 19);
  const auto l = laplacian(g);
  double prev = 101.0;
  for (int rho = 1; rho <= 5; ++rho) {
    const double pct = sparsity_percentage(dense_sobolev_term(l, 1.0, rho));
    CHECK(pct <= prev + 1e-12);
    prev = pct;
  }
}

TEST_CASE("eigenvalue penalization curves") {
  const auto g = random_connected_graph(12, 0.3, 131);
  const auto rows = eigen_penalization_curves(laplacian(g), 3);
  CHECK(rows.size() == 3 * 12);

  double max_dense = 0.0, max_sparse = 0.0;
  for (const auto& r : rows) {
    CHECK(r.normalized_eig_dense <= 1.0 + 1e-12);
    CHECK(r.normalized_eig_sparse <= 1.0 + 1e-12);
    if (r.rho == 1) {
      CHECK(r.normalized_eig_dense ==
            doctest::Approx(r.normalized_eig_sparse).epsilon(1e-12));
    }
    if (r.rho == 2) {
      max_dense = std::max(max_dense, r.normalized_eig_dense);
      max_sparse = std::max(max_sparse, r.normalized_eig_sparse);
    }
  }
  CHECK(max_dense == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_sparse == doctest::Approx(1.0).epsilon(1e-12));

  // Diagnostic only: the spectra-similarity observation is qualitative.
  const auto g30 = erdos_renyi(30, 0.2, WeightDist::uniform, 17);
  const auto rows30 = eigen_penalization_curves(laplacian(g30), 5);
  double gap = 0.0;
  for (const auto& r : rows30) {
    gap += std::fabs(r.normalized_eig_dense - r.normalized_eig_sparse);
  }
  gap /= static_cast<double>(rows30.size());
  MESSAGE("mean normalized-spectrum gap on N=30, rho<=5: " << gap);
}
