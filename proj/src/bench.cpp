#include "s2gnn/bench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "s2gnn/graph.hpp"
#include "s2gnn/neural.hpp"
#include "s2gnn/rng.hpp"

namespace s2gnn {

namespace {

// Peak resident set from /proc/self/status (monotone over the process).
double peak_rss_mb() {
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line)) {
    if (line.rfind("VmHWM:", 0) == 0) {
      std::istringstream ss(line.substr(6));
      double kb = 0.0;
      ss >> kb;
      return kb / 1024.0;
    }
  }
  return -1.0;
}

ModelConfig bench_config(const BenchOptions& options, bool gcn) {
  ModelConfig cfg;
  cfg.alpha = options.alpha;
  cfg.epsilon = options.epsilon;
  cfg.n_layers = 2;
  cfg.hidden_units = {options.hidden, options.classes};
  cfg.fusion = FusionKind::linear;
  cfg.dropout = 0.0;
  cfg.seed = options.seed;
  cfg.gcn_baseline = gcn;
  if (gcn) cfg.epsilon = 1.0;
  return cfg;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchOptions& options) {
  std::vector<BenchRow> rows;

  for (index_t n : options.n_list) {
    for (double p : options.p_list) {
      Graph g;
      DenseMatrix x;
      bool cell_ok = true;
      std::string cell_error;
      try {
        g = erdos_renyi(n, p, WeightDist::unit,
                        mix_seed(options.seed, static_cast<std::uint64_t>(n) *
                                                   1000 +
                                               static_cast<std::uint64_t>(
                                                   p * 1000)));
        Rng rng(mix_seed(options.seed, 99));
        x = DenseMatrix(n, options.features);
        for (double& v : x.data()) v = rng.normal();
      } catch (const std::bad_alloc&) {
        cell_ok = false;
        cell_error = "allocation failure while building the graph";
      }

      for (const bool gcn : {false, true}) {
        BenchRow row;
        row.n = n;
        row.p = p;
        row.model = gcn ? "gcn" : "s2gnn";
        row.repeats = options.repeats;
        row.mem_method = "proc_vmhwm";
        if (!cell_ok) {
          row.ok = false;
          row.error = cell_error;
          row.peak_rss_mb = peak_rss_mb();
          rows.push_back(row);
          continue;
        }
        try {
          Model model(bench_config(options, gcn), g, options.features);
          model.forward(x);  // warm-up

          std::vector<double> times;
          times.reserve(options.repeats);
          for (int r = 0; r < options.repeats; ++r) {
            const auto start = std::chrono::steady_clock::now();
            model.forward(x);
            times.push_back(std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start)
                                .count());
          }
          std::sort(times.begin(), times.end());
          double total = 0.0;
          for (double t : times) total += t;
          row.mean_s = total / static_cast<double>(times.size());
          row.median_s = times[times.size() / 2];
          row.min_s = times.front();
          row.ok = true;
        } catch (const std::bad_alloc&) {
          row.ok = false;
          row.error = "allocation failure while running the model";
        }
        row.peak_rss_mb = peak_rss_mb();
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace s2gnn
