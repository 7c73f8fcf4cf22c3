#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace s2gnn::verify {

struct PropertyResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;   // observed extreme
  double tolerance = 0.0;  // threshold it was held against
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<PropertyResult> properties;

  bool all_pass() const {
    for (const auto& p : properties) {
      if (!p.pass) return false;
    }
    return true;
  }
};

// Kronecker reconstruction of Hadamard powers on random weighted ER graphs,
// N in 3..8, rho in {2,3}.
SuiteResult run_spectrum_suite(std::uint64_t seed, int n_graphs = 50);

// Norm axioms over random (graph, x, y, s) tuples with eps in {0.5,1,2} and
// rho in 1..4, plus the semi-norm kernel case at eps = 0.
SuiteResult run_norm_suite(std::uint64_t seed, int n_tuples = 1000);

// Central finite differences against the analytic gradients on a 12-node
// graph, both fusion modes and the GCN baseline, dropout disabled.
SuiteResult run_gradient_suite(std::uint64_t seed);

// Full perturbation-bound grid; n_seeds = 100 reproduces the reference
// protocol, smaller values are for quick runs.
SuiteResult run_stability_suite(std::uint64_t seed, int n_seeds = 100);

std::vector<SuiteResult> run_all(std::uint64_t seed);

}  // namespace s2gnn::verify
