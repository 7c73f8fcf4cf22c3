#include "s2gnn/stability.hpp"

#include <cmath>
#include <stdexcept>

#include "s2gnn/eig.hpp"
#include "s2gnn/rng.hpp"
#include "s2gnn/sobolev.hpp"

namespace s2gnn {

namespace {

double int_pow(double v, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= v;
  return r;
}

void apply_sigma(DenseMatrix& m, LipschitzActivation act) {
  if (act == LipschitzActivation::identity) return;
  for (double& v : m.data()) v = v > 0.0 ? v : 0.0;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

// Elementwise power of a dense matrix with the 0^0 = 1 convention, so that
// power 0 yields the all-ones matrix required by the binomial expansion.
DenseMatrix elementwise_power(const DenseMatrix& m, int p) {
  DenseMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.data().size(); ++i) {
    out.data()[i] = int_pow(m.data()[i], p);
  }
  return out;
}

double max_euclidean_row_norm(const DenseMatrix& m) {
  double best = 0.0;
  for (index_t i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (index_t j = 0; j < m.cols(); ++j) acc += m(i, j) * m(i, j);
    best = std::max(best, std::sqrt(acc));
  }
  return best;
}

double max_abs_row_sum_of(const std::vector<double>& sums) {
  double best = 0.0;
  for (double v : sums) best = std::max(best, std::fabs(v));
  return best;
}

}  // namespace

DenseMatrix ss2gnn_forward(const SparseMatrix& l, const DenseMatrix& x,
                           const DenseMatrix& w, double eps, int rho,
                           LipschitzActivation act) {
  const SparseMatrix term = sparse_sobolev_term(l, eps, rho);
  DenseMatrix out = matmul(spmm(term, x), w);
  apply_sigma(out, act);
  return out;
}

LaplacianPair laplacian_power_elements(const Graph& g, const Perturbation& e,
                              double eps, int rho) {
  if (rho < 1) throw std::invalid_argument("power_elements: rho must be positive");

  auto from_closed_form = [eps, rho](const SparseMatrix& adj) {
    const auto deg = row_sums(adj);
    std::vector<SparseMatrix::Triplet> t;
    t.reserve(static_cast<std::size_t>(adj.nnz() + adj.rows()));
    const double sign = rho % 2 == 0 ? 1.0 : -1.0;
    for (index_t r = 0; r < adj.rows(); ++r) {
      for (index_t k = adj.row_ptr()[r]; k < adj.row_ptr()[r + 1]; ++k) {
        t.emplace_back(r, adj.col_idx()[k],
                       sign * int_pow(adj.values()[k], rho));
      }
      t.emplace_back(r, r, int_pow(deg[r] + eps, rho));
    }
    return SparseMatrix::from_triplets(adj.rows(), adj.cols(), std::move(t));
  };

  LaplacianPair pair;
  pair.original = from_closed_form(g.adjacency);
  pair.perturbed = from_closed_form(apply_perturbation(g, e).adjacency);
  return pair;
}

DistanceBound perturbation_distance_bound(const Graph& g,
                                          const Perturbation& e, double eps,
                                          int rho) {
  if (rho < 1) {
    throw std::invalid_argument("distance_bound: rho must be positive");
  }
  const Graph g_hat = apply_perturbation(g, e);
  const SparseMatrix l_rho = sparse_sobolev_term(laplacian(g), eps, rho);
  const SparseMatrix l_hat_rho =
      sparse_sobolev_term(laplacian(g_hat), eps, rho);

  DistanceBound out;
  out.exact_lhs_norm =
      spectral_norm(subtract(to_dense(l_rho), to_dense(l_hat_rho)));

  const DenseMatrix a = to_dense(g.adjacency);
  const DenseMatrix e_dense = to_dense(e.noise);
  out.d_max = max_abs_row_sum_of(row_sums(g.adjacency));
  out.d_e_max = max_abs_row_sum_of(row_sums(e.noise));

  out.terms.resize(static_cast<std::size_t>(rho));
  out.eta_m.resize(static_cast<std::size_t>(rho));
  for (int m = 1; m <= rho; ++m) {
    const DenseMatrix a_pow = elementwise_power(a, rho - m);
    // Symmetric matrix: max row norm equals max column norm.
    const double eta =
        std::min(max_euclidean_row_norm(a_pow),
                 max_euclidean_row_norm(transposed(a_pow)));
    const double e_norm = spectral_norm(elementwise_power(e_dense, m));
    const double term =
        binomial(rho, m) * (eta * e_norm + int_pow(out.d_max + eps, rho - m) *
                                               int_pow(out.d_e_max, m));
    out.eta_m[m - 1] = eta;
    out.terms[m - 1] = term;
    out.binomial_rhs += term;
    if (m == 1) out.first_order_rhs = term;
  }
  return out;
}

BoundBreakdown output_perturbation_bound(const StabilityInputs& inputs) {
  if (inputs.phi <= 0.0) {
    throw std::invalid_argument("perturbation_bound: Lipschitz constant must be > 0");
  }
  const Graph& g = inputs.g;
  if (inputs.x.rows() != g.n_nodes()) {
    throw std::invalid_argument("perturbation_bound: feature rows differ from nodes");
  }
  if (!inputs.w.same_shape(inputs.w_hat) ||
      inputs.w.rows() != inputs.x.cols()) {
    throw std::invalid_argument("perturbation_bound: weight shapes disagree");
  }

  const Graph g_hat = apply_perturbation(g, inputs.e);
  const DenseMatrix y = ss2gnn_forward(laplacian(g), inputs.x, inputs.w,
                                       inputs.epsilon, inputs.rho,
                                       inputs.sigma);
  const DenseMatrix y_hat = ss2gnn_forward(laplacian(g_hat), inputs.x,
                                           inputs.w_hat, inputs.epsilon,
                                           inputs.rho, inputs.sigma);

  BoundBreakdown out;
  out.lhs = spectral_norm(subtract(y, y_hat));
  out.sqrt_upsilon = frobenius_norm(inputs.x);
  out.delta_w = spectral_norm(subtract(inputs.w, inputs.w_hat));
  out.norm_w = spectral_norm(inputs.w);
  out.norm_e = spectral_norm(to_dense(inputs.e.noise));

  const DistanceBound dist =
      perturbation_distance_bound(g, inputs.e, inputs.epsilon, inputs.rho);
  out.binomial_terms = dist.terms;
  out.eta_m = dist.eta_m;
  out.d_max = dist.d_max;
  out.d_e_max = dist.d_e_max;
  out.d_hat_max = dist.d_max + dist.d_e_max;

  const SparseMatrix a_hat_rho = hadamard_power(g_hat.adjacency, inputs.rho);
  out.norm_a_hat_rho = spectral_norm(to_dense(a_hat_rho));
  out.norm_l_hat_rho = spectral_norm(to_dense(
      sparse_sobolev_term(laplacian(g_hat), inputs.epsilon, inputs.rho)));

  out.weight_term = out.sqrt_upsilon *
                    (int_pow(out.d_hat_max + inputs.epsilon, inputs.rho) +
                     out.norm_a_hat_rho) *
                    out.delta_w;
  out.structure_term_first_order =
      out.sqrt_upsilon * dist.first_order_rhs * out.norm_w;
  out.structure_term_exact =
      out.sqrt_upsilon * dist.binomial_rhs * out.norm_w;

  out.rhs_first_order =
      inputs.phi * (out.weight_term + out.structure_term_first_order);
  out.rhs_exact_binomial =
      inputs.phi * (out.weight_term + out.structure_term_exact);
  return out;
}

std::vector<SweepCell> stability_sweep(const SweepProtocol& protocol) {
  std::vector<SweepCell> cells;

  for (int rho : protocol.rhos) {
    for (std::size_t pi = 0; pi < protocol.p_er.size(); ++pi) {
      for (std::size_t ei = 0; ei < protocol.epsilons.size(); ++ei) {
        // Per-seed draws are keyed by (p, eps, seed) only, so cells that
        // differ in rho or SNR share graphs and noise directions.
        std::vector<std::uint64_t> seed_base(protocol.n_seeds);
        for (int s = 0; s < protocol.n_seeds; ++s) {
          seed_base[s] = mix_seed(protocol.master_seed,
                                  (pi * 131 + ei) * 16384 + s);
        }

        for (double snr : protocol.snrs_db) {
          SweepCell cell;
          cell.rho = rho;
          cell.p_er = protocol.p_er[pi];
          cell.epsilon = protocol.epsilons[ei];
          cell.snr_db = snr;
          cell.violations = 0;

          std::vector<double> lhs_values;
          double sum_fo = 0.0, sum_exact = 0.0;
          lhs_values.reserve(protocol.n_seeds);
          for (int s = 0; s < protocol.n_seeds; ++s) {
            const std::uint64_t base = seed_base[s];

            Graph g = erdos_renyi(protocol.n_nodes, cell.p_er,
                                  WeightDist::unit, mix_seed(base, 1));
            for (std::uint64_t retry = 0; edge_count(g) == 0; ++retry) {
              g = erdos_renyi(protocol.n_nodes, cell.p_er, WeightDist::unit,
                              mix_seed(base, 100 + retry));
            }

            StabilityInputs in;
            in.g = std::move(g);
            in.epsilon = cell.epsilon;
            in.rho = rho;
            in.sigma = protocol.sigma;

            Rng x_rng(mix_seed(base, 2));
            in.x = DenseMatrix(protocol.n_nodes, protocol.f0);
            for (double& v : in.x.data()) v = x_rng.normal();
            for (index_t j = 0; j < in.x.cols(); ++j) {
              double norm = 0.0;
              for (index_t i = 0; i < in.x.rows(); ++i) {
                norm += in.x(i, j) * in.x(i, j);
              }
              norm = std::sqrt(norm);
              for (index_t i = 0; i < in.x.rows(); ++i) in.x(i, j) /= norm;
            }

            Rng w_rng(mix_seed(base, 3));
            in.w = DenseMatrix(protocol.f0, protocol.f1);
            for (double& v : in.w.data()) v = w_rng.normal();

            in.e = perturb(in.g, snr, mix_seed(base, 4));

            // Weight perturbation at the same SNR; delta_W is measured
            // from the realized pair afterwards.
            Rng wn_rng(mix_seed(base, 5));
            DenseMatrix w_noise(protocol.f0, protocol.f1);
            for (double& v : w_noise.data()) v = wn_rng.normal();
            const double scale = frobenius_norm(in.w) *
                                 std::pow(10.0, -snr / 20.0) /
                                 frobenius_norm(w_noise);
            in.w_hat = in.w;
            add_in_place(in.w_hat, w_noise, scale);

            const BoundBreakdown b = output_perturbation_bound(in);
            lhs_values.push_back(b.lhs);
            sum_fo += b.rhs_first_order;
            sum_exact += b.rhs_exact_binomial;
            if (b.lhs > b.rhs_exact_binomial * (1.0 + 1e-12)) {
              ++cell.violations;
            }
          }

          const auto n = static_cast<double>(lhs_values.size());
          double mean = 0.0;
          for (double v : lhs_values) mean += v;
          mean /= n;
          double var = 0.0;
          for (double v : lhs_values) var += (v - mean) * (v - mean);
          cell.mean_lhs = mean;
          cell.std_lhs = n > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
          cell.mean_rhs_first_order = sum_fo / n;
          cell.mean_rhs_exact = sum_exact / n;
          cells.push_back(cell);
        }
      }
    }
  }
  return cells;
}

}  // namespace s2gnn
