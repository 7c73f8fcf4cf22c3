#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "s2gnn/types.hpp"

namespace s2gnn {

struct BenchOptions {
  std::vector<index_t> n_list = {500, 1000, 5000, 10000};
  std::vector<double> p_list = {0.03, 0.04, 0.05, 0.06};
  int repeats = 30;
  int alpha = 3;
  double epsilon = 1.0;
  index_t features = 16;
  index_t hidden = 16;
  index_t classes = 2;
  std::uint64_t seed = 1;
};

struct BenchRow {
  index_t n = 0;
  double p = 0.0;
  std::string model;  // "s2gnn" or "gcn"
  int repeats = 0;
  bool ok = false;
  std::string error;
  double mean_s = 0.0;
  double median_s = 0.0;
  double min_s = 0.0;
  double peak_rss_mb = 0.0;
  std::string mem_method;
};

// Forward-only timing on ER graphs over the n x p grid, one warm-up pass
// before the timed repeats. Allocation failures are recorded per cell and
// the run continues.
std::vector<BenchRow> run_bench(const BenchOptions& options);

}  // namespace s2gnn
