#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "s2gnn/eig.hpp"
#include "s2gnn/graph.hpp"
#include "s2gnn/sparse.hpp"
#include "test_helpers.hpp"

using namespace s2gnn;
using namespace s2gnn::testing;

TEST_CASE("csr construction canonicalizes triplets") {
  auto m = SparseMatrix::from_triplets(
      2, 2, {{1, 0, 2.0}, {0, 1, 1.0}, {0, 1, 2.0}, {1, 1, 3.0}, {1, 1, -3.0}});
  CHECK(m.nnz() == 2);
  CHECK(m.at(0, 1) == 3.0);  // duplicates summed
  CHECK(m.at(1, 0) == 2.0);
  CHECK(m.at(1, 1) == 0.0);  // exact cancellation dropped
  m.check_canonical();

  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      SparseMatrix::from_csr(1, 2, {0, 2}, {1, 0}, {1.0, 1.0}),
      std::invalid_argument);  // unsorted columns
  CHECK_THROWS_AS(SparseMatrix::from_csr(1, 1, {0, 1}, {0}, {0.0}),
                  std::invalid_argument);  // stored zero
}

TEST_CASE("hadamard_power on hand-computed fixtures") {
  const auto swap2 = sparse({{0, 2}, {2, 0}});
  CHECK(max_abs_diff(to_dense(hadamard_power(swap2, 1)), to_dense(swap2)) == 0.0);

  const auto id3 = SparseMatrix::identity(3);
  CHECK(max_abs_diff(to_dense(hadamard_power(id3, 5)),
                     DenseMatrix::identity(3)) == 0.0);

  const auto chain = sparse({{0, 2, 0}, {2, 0, 3}, {0, 3, 0}});
  CHECK(max_abs_diff(to_dense(hadamard_power(chain, 2)),
                     dense({{0, 4, 0}, {4, 0, 9}, {0, 9, 0}})) == 0.0);

  CHECK_THROWS_AS(hadamard_power(chain, 0), std::invalid_argument);
}

TEST_CASE("hadamard_power preserves the pattern byte for byte") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = static_cast<index_t>(2 + rng.below(14));
    DenseMatrix d(n, n);
    for (double& v : d.data()) {
      v = rng.uniform() < 0.4 ? rng.uniform(-2.0, 2.0) : 0.0;
    }
    const auto m = SparseMatrix::from_dense(d);
    for (int rho : {1, 2, 3, 6}) {
      const auto p = hadamard_power(m, rho);
      CHECK(p.row_ptr() == m.row_ptr());
      CHECK(p.col_idx() == m.col_idx());
    }
  }
}

TEST_CASE("matrix_power_dense densifies where hadamard does not") {
  const auto l = laplacian(path_graph(3));
  const auto l2 = matrix_power_dense(l, 2);
  // Hand multiplication of the P3 Laplacian: corner entry fills in.
  CHECK(l2(0, 2) == 1.0);
  CHECK(hadamard_power(l, 2).at(0, 2) == 0.0);

  const auto any = sparse({{0, 2}, {2, 0}});
  CHECK(max_abs_diff(matrix_power_dense(any, 1), to_dense(any)) == 0.0);

  const auto id = SparseMatrix::identity(4);
  CHECK(max_abs_diff(matrix_power_dense(id, 7), DenseMatrix::identity(4)) ==
        0.0);

  CHECK_THROWS_AS(matrix_power_dense(SparseMatrix::identity(10), 2, 5),
                  std::invalid_argument);
}

TEST_CASE("spmm fixtures and dense oracle") {
  const auto h = dense({{1, 2}, {3, 4}});
  CHECK(max_abs_diff(spmm(SparseMatrix::identity(2), h), h) == 0.0);

  const auto empty = SparseMatrix::from_triplets(2, 2, {});
  CHECK(max_abs(spmm(empty, h)) == 0.0);

  const auto swap2 = sparse({{0, 1}, {1, 0}});
  CHECK(max_abs_diff(spmm(swap2, h), dense({{3, 4}, {1, 2}})) == 0.0);

  CHECK_THROWS_AS(spmm(swap2, dense({{1.0, 2.0, 3.0}})), std::invalid_argument);

  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<index_t>(2 + rng.below(19));
    const auto k = static_cast<index_t>(1 + rng.below(6));
    DenseMatrix d(n, n);
    for (double& v : d.data()) {
      v = rng.uniform() < 0.3 ? rng.uniform(-1.0, 1.0) : 0.0;
    }
    const auto s = SparseMatrix::from_dense(d);
    const auto x = random_dense(n, k, rng);
    CHECK(max_abs_diff(spmm(s, x), matmul(d, x)) < 1e-12);
  }
}

TEST_CASE("kronecker product fixtures") {
  CHECK(max_abs_diff(kronecker(DenseMatrix::identity(2),
                               DenseMatrix::identity(2)),
                     DenseMatrix::identity(4)) == 0.0);

  const auto b = dense({{1, 2}, {3, 4}});
  CHECK(max_abs_diff(kronecker(dense({{1}}), b), b) == 0.0);

  CHECK(max_abs_diff(kronecker(dense({{0, 1}, {1, 0}}), dense({{2}})),
                     dense({{0, 2}, {2, 0}})) == 0.0);

  CHECK_THROWS_AS(kronecker(DenseMatrix(100, 100), DenseMatrix(100, 100)),
                  std::invalid_argument);
}

TEST_CASE("partial permutation and the Visick identity") {
  const auto p1 = partial_permutation(1);
  CHECK(p1.rows() == 1);
  CHECK(p1.at(0, 0) == 1.0);

  const auto p2 = partial_permutation(2);
  CHECK(p2.rows() == 4);
  CHECK(p2.cols() == 2);
  CHECK(p2.nnz() == 2);
  CHECK(p2.at(0, 0) == 1.0);
  CHECK(p2.at(3, 1) == 1.0);

  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<index_t>(2 + rng.below(5));  // 2..6
    const auto s = random_dense(n, n, rng);
    const auto t = random_dense(n, n, rng);
    const auto p = to_dense(partial_permutation(n));
    const auto compressed = matmul(matmul_tn(p, kronecker(s, t)), p);
    DenseMatrix hadamard(n, n);
    for (index_t i = 0; i < n; ++i) {
      for (index_t j = 0; j < n; ++j) hadamard(i, j) = s(i, j) * t(i, j);
    }
    CHECK(max_abs_diff(compressed, hadamard) < 1e-12);
  }
}

TEST_CASE("eig_sym on hand-computed fixtures") {
  const auto p2_laplacian = dense({{1, -1}, {-1, 1}});
  const auto dec = eig_sym(p2_laplacian);
  CHECK(dec.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dec.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));

  const auto dec_id = eig_sym(DenseMatrix::identity(3));
  for (double v : dec_id.eigenvalues) CHECK(v == doctest::Approx(1.0));

  const auto dec_zero = eig_sym(DenseMatrix(3, 3));
  for (double v : dec_zero.eigenvalues) CHECK(v == 0.0);

  CHECK_THROWS_AS(eig_sym(dense({{1, 2}, {3, 4}})), std::invalid_argument);
}

TEST_CASE("eig_sym reconstruction and orthonormality on random matrices") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = static_cast<index_t>(2 + rng.below(29));
    const auto m = random_symmetric(n, rng);
    const auto dec = eig_sym(m);

    const auto& u = dec.eigenvectors;
    const auto gram = matmul_tn(u, u);
    CHECK(max_abs_diff(gram, DenseMatrix::identity(n)) < 1e-8);

    DenseMatrix lambda(n, n);
    for (index_t i = 0; i < n; ++i) lambda(i, i) = dec.eigenvalues[i];
    CHECK(max_abs_diff(matmul(matmul(u, lambda), transposed(u)), m) < 1e-7);

    for (index_t i = 1; i < n; ++i) {
      CHECK(dec.eigenvalues[i - 1] <= dec.eigenvalues[i]);
    }
  }
}

TEST_CASE("laplacian eigenvalues are nonnegative with a zero ground state") {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = random_connected_graph(12, 0.2, rng.next_u64());
    const auto dec = eig_sym(laplacian(g));
    CHECK(dec.eigenvalues.front() >= -1e-9);
    CHECK(std::fabs(dec.eigenvalues.front()) < 1e-9);
  }
}

TEST_CASE("gft fixtures, Parseval and round trip") {
  const auto dec = eig_sym(laplacian(path_graph(2)));
  // First eigenvector maps to the first canonical coordinate.
  std::vector<double> u1 = {dec.eigenvectors(0, 0), dec.eigenvectors(1, 0)};
  const auto e1 = gft(u1, dec);
  CHECK(e1[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(e1[1]) < 1e-12);

  const auto zero_hat = gft(std::vector<double>{0.0, 0.0}, dec);
  CHECK(zero_hat[0] == 0.0);
  CHECK(zero_hat[1] == 0.0);

  Rng rng(51);
  std::vector<double> x = {rng.normal(), rng.normal()};
  const auto x_hat = gft(x, dec);
  // Explicit 2x2 multiplication by U^T.
  for (int j = 0; j < 2; ++j) {
    const double expect =
        dec.eigenvectors(0, j) * x[0] + dec.eigenvectors(1, j) * x[1];
    CHECK(x_hat[j] == doctest::Approx(expect).epsilon(1e-14));
  }

  const auto g = random_connected_graph(15, 0.3, 99);
  const auto dec15 = eig_sym(laplacian(g));
  std::vector<double> y(15);
  for (double& v : y) v = rng.normal();
  const auto y_hat = gft(y, dec15);
  CHECK(std::fabs(l2_norm(y) - l2_norm(y_hat)) < 1e-9);
  const auto y_back = inverse_gft(y_hat, dec15);
  for (std::size_t i = 0; i < y.size(); ++i) {
    CHECK(std::fabs(y[i] - y_back[i]) < 1e-9);
  }

  CHECK_THROWS_AS(gft(std::vector<double>{1.0, 2.0, 3.0}, dec),
                  std::invalid_argument);
}

TEST_CASE("condition number of the shifted Laplacian") {
  const auto l = laplacian(path_graph(2));
  CHECK(condition_number(l, 1.0) == doctest::Approx(3.0).epsilon(1e-12));

  CHECK(std::isinf(condition_number(l, 0.0)));

  const auto edgeless = SparseMatrix::from_triplets(4, 4, {});
  CHECK(condition_number(edgeless, 2.0) == doctest::Approx(1.0));

  const auto indefinite = sparse({{0, 2}, {2, 0}});  // eigenvalues -2, 2
  CHECK_THROWS_AS(condition_number(indefinite, 1.0), std::invalid_argument);
}
