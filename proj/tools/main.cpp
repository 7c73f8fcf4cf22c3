// Command-line surface: data ingestion, verification suites, training,
// analysis tables and benchmarks. Every run writes a manifest that can be
// replayed with --config to reproduce the outputs.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "s2gnn/bench.hpp"
#include "s2gnn/eig.hpp"
#include "s2gnn/graph.hpp"
#include "s2gnn/io.hpp"
#include "s2gnn/neural.hpp"
#include "s2gnn/sobolev.hpp"
#include "s2gnn/stability.hpp"
#include "s2gnn/types.hpp"
#include "s2gnn/verify.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using namespace s2gnn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

// Resolved run configuration with flag > config-file > default precedence.
class Params {
 public:
  explicit Params(std::string subcommand) : subcommand_(std::move(subcommand)) {}

  void declare(const std::string& key, const std::string& default_value) {
    schema_.emplace_back(key, default_value);
  }

  void set_flag(const std::string& key, const std::string& value) {
    flag_values_[key] = value;
  }

  void load_file(const std::string& path) {
    for (const auto& [key, value] : io::read_kv_file(path)) {
      if (key == "subcommand") {
        if (value != subcommand_) {
          throw std::invalid_argument("config file " + path + " is for '" +
                                      value + "', not '" + subcommand_ + "'");
        }
        continue;
      }
      if (!declared(key)) {
        throw std::invalid_argument("config file " + path +
                                    ": unknown key '" + key + "'");
      }
      file_values_[key] = value;
    }
  }

  std::string str(const std::string& key) const {
    if (const auto it = flag_values_.find(key); it != flag_values_.end()) {
      return it->second;
    }
    if (const auto it = file_values_.find(key); it != file_values_.end()) {
      return it->second;
    }
    for (const auto& [k, v] : schema_) {
      if (k == key) return v;
    }
    throw std::logic_error("undeclared parameter '" + key + "'");
  }

  double num(const std::string& key) const {
    try {
      return std::stod(str(key));
    } catch (const std::exception&) {
      throw std::invalid_argument("parameter '" + key + "' is not a number: '" +
                                  str(key) + "'");
    }
  }

  long long integer(const std::string& key) const {
    try {
      return std::stoll(str(key));
    } catch (const std::exception&) {
      throw std::invalid_argument("parameter '" + key +
                                  "' is not an integer: '" + str(key) + "'");
    }
  }

  bool flag(const std::string& key) const {
    const std::string v = str(key);
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw std::invalid_argument("parameter '" + key + "' must be 0/1: '" + v +
                                "'");
  }

  std::vector<double> num_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& tok : tokens(key)) {
      try {
        out.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw std::invalid_argument("parameter '" + key +
                                    "' has a non-numeric entry: '" + tok + "'");
      }
    }
    return out;
  }

  std::vector<long long> int_list(const std::string& key) const {
    std::vector<long long> out;
    for (double v : num_list(key)) out.push_back(static_cast<long long>(v));
    return out;
  }

  const std::string& subcommand() const { return subcommand_; }

  io::KvList manifest() const {
    io::KvList kv;
    kv.emplace_back("subcommand", subcommand_);
    for (const auto& [key, unused] : schema_) kv.emplace_back(key, str(key));
    return kv;
  }

 private:
  bool declared(const std::string& key) const {
    for (const auto& [k, v] : schema_) {
      if (k == key) return true;
    }
    return false;
  }

  std::vector<std::string> tokens(const std::string& key) const {
    std::vector<std::string> out;
    std::string cur;
    for (char c : str(key)) {
      if (c == ',') {
        out.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  }

  std::string subcommand_;
  io::KvList schema_;
  std::map<std::string, std::string> flag_values_;
  std::map<std::string, std::string> file_values_;
};

std::string manifest_text(const io::KvList& kv) {
  std::string text;
  for (const auto& [k, v] : kv) text += k + "=" + v + "\n";
  return text;
}

// Writes the manifest and returns the CSV/JSON comment line carrying the
// tool version and the manifest hash.
std::string write_manifest(const Params& params) {
  const fs::path out_dir = params.str("out");
  fs::create_directories(out_dir);
  const auto kv = params.manifest();
  const std::string text = manifest_text(kv);
  io::write_text_file((out_dir / "manifest.txt").string(), text);
  char line[64];
  std::snprintf(line, sizeof(line), "manifest_hash=%016llx",
                static_cast<unsigned long long>(io::fnv1a64(text)));
  return std::string("# s2gnn ") + kVersion + " " + line;
}

void write_json(const Params& params, const std::string& name,
                const ordered_json& payload) {
  const fs::path path = fs::path(params.str("out")) / name;
  io::write_text_file(path.string(), payload.dump(2) + "\n");
}

double parse_bandwidth(const std::string& value) {
  if (value == "auto") return 0.0;
  const double v = std::stod(value);
  if (v <= 0.0) {
    throw std::invalid_argument("bandwidth must be positive or 'auto'");
  }
  return v;
}

LipschitzActivation parse_sigma(const std::string& value) {
  if (value == "identity") return LipschitzActivation::identity;
  if (value == "relu") return LipschitzActivation::relu;
  throw std::invalid_argument("sigma must be 'identity' or 'relu'");
}

// ---------------------------------------------------------------------------
// verify

Params make_verify_params() {
  Params p("verify");
  p.declare("suite", "");
  p.declare("seed", "1");
  p.declare("quick", "0");
  p.declare("out", "s2gnn_out");
  return p;
}

int run_verify(Params& params) {
  const std::string suite = params.str("suite");
  const auto seed = static_cast<std::uint64_t>(params.integer("seed"));
  const bool quick = params.flag("quick");

  std::vector<verify::SuiteResult> results;
  if (suite == "spectrum") {
    results.push_back(verify::run_spectrum_suite(seed, quick ? 10 : 50));
  } else if (suite == "norm") {
    results.push_back(verify::run_norm_suite(seed, quick ? 100 : 1000));
  } else if (suite == "gradients") {
    results.push_back(verify::run_gradient_suite(seed));
  } else if (suite == "stability") {
    results.push_back(verify::run_stability_suite(seed, quick ? 10 : 100));
  } else if (suite == "all") {
    results.push_back(verify::run_spectrum_suite(seed, quick ? 10 : 50));
    results.push_back(verify::run_norm_suite(seed, quick ? 100 : 1000));
    results.push_back(verify::run_stability_suite(seed, quick ? 10 : 100));
    results.push_back(verify::run_gradient_suite(seed));
  } else {
    throw std::invalid_argument(
        "suite must be one of: norm, spectrum, stability, gradients, all");
  }

  write_manifest(params);
  bool all_pass = true;
  ordered_json suites = ordered_json::array();
  for (const auto& r : results) {
    ordered_json properties = ordered_json::array();
    for (const auto& prop : r.properties) {
      properties.push_back({{"name", prop.name},
                            {"pass", prop.pass},
                            {"measured", prop.measured},
                            {"tolerance", prop.tolerance},
                            {"detail", prop.detail}});
      all_pass = all_pass && prop.pass;
    }
    suites.push_back(
        {{"suite", r.suite}, {"pass", r.all_pass()}, {"properties", properties}});
  }
  ordered_json report = {{"tool", std::string("s2gnn ") + kVersion},
                         {"seed", seed},
                         {"pass", all_pass},
                         {"suites", suites}};
  write_json(params, "verify_report.json", report);
  std::cout << report.dump(2) << '\n';
  return all_pass ? kExitOk : kExitViolation;
}

// ---------------------------------------------------------------------------
// knn

Params make_knn_params() {
  Params p("knn");
  p.declare("features", "");
  p.declare("k", "30");
  p.declare("bandwidth", "auto");
  p.declare("seed", "1");
  p.declare("out", "s2gnn_out");
  return p;
}

int run_knn(Params& params) {
  if (params.str("features").empty()) {
    throw std::invalid_argument("knn: --features is required");
  }
  const auto x = io::read_matrix_csv(params.str("features"));
  const auto k = static_cast<int>(params.integer("k"));
  const auto g = knn_graph(x, k, parse_bandwidth(params.str("bandwidth")));

  write_manifest(params);
  io::write_graph((fs::path(params.str("out")) / "graph.txt").string(), g);

  double w_min = 1.0, w_max = 0.0;
  for (double w : g.adjacency.values()) {
    w_min = std::min(w_min, w);
    w_max = std::max(w_max, w);
  }
  std::cout << "nodes=" << g.n_nodes() << " edges=" << edge_count(g)
            << " weight_min=" << io::format_double(w_min)
            << " weight_max=" << io::format_double(w_max) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// train

Params make_train_params() {
  Params p("train");
  p.declare("graph", "");
  p.declare("features", "");
  p.declare("labels", "");
  p.declare("masks", "");
  p.declare("split", "0.1,0.45,0.45");
  p.declare("per_class", "0");
  p.declare("alpha", "3");
  p.declare("epsilon", "1.0");
  p.declare("hidden", "16");
  p.declare("fusion", "linear");
  p.declare("dropout", "0.5");
  p.declare("lr", "0.01");
  p.declare("wd", "0.0005");
  p.declare("epochs", "200");
  p.declare("baseline", "none");
  p.declare("ablation_hadamard_off", "0");
  p.declare("ablation_regular_norm", "0");
  p.declare("dense_cap", "5000");
  p.declare("seed", "1");
  p.declare("out", "s2gnn_out");
  return p;
}

int run_train(Params& params) {
  for (const char* required : {"graph", "features", "labels"}) {
    if (params.str(required).empty()) {
      throw std::invalid_argument(std::string("train: --") + required +
                                  " is required");
    }
  }
  const auto features = io::read_matrix_csv(params.str("features"));
  const auto labels = io::read_labels_csv(params.str("labels"));
  Graph g = io::read_graph(params.str("graph"), features.rows());
  if (g.n_nodes() != features.rows() ||
      static_cast<index_t>(labels.size()) != features.rows()) {
    throw std::invalid_argument(
        "train: node counts disagree across graph/features/labels (" +
        std::to_string(g.n_nodes()) + "/" + std::to_string(features.rows()) +
        "/" + std::to_string(labels.size()) + ")");
  }

  const auto seed = static_cast<std::uint64_t>(params.integer("seed"));
  SplitMask splits;
  if (!params.str("masks").empty()) {
    splits = io::read_masks_csv(params.str("masks"));
    if (splits.train.size() != static_cast<std::size_t>(g.n_nodes())) {
      throw std::invalid_argument("train: mask rows differ from node count");
    }
  } else if (params.integer("per_class") > 0) {
    splits = split_per_class(labels, params.integer("per_class"), seed);
  } else {
    const auto fractions = params.num_list("split");
    if (fractions.size() != 3) {
      throw std::invalid_argument("train: --split needs three fractions");
    }
    splits = split_fractions(g.n_nodes(), fractions[0], fractions[1],
                             fractions[2], seed, labels);
  }

  int n_classes = 0;
  for (int l : labels) n_classes = std::max(n_classes, l + 1);

  ModelConfig cfg;
  cfg.alpha = static_cast<int>(params.integer("alpha"));
  cfg.epsilon = params.num("epsilon");
  cfg.hidden_units.clear();
  for (long long width : params.int_list("hidden")) {
    cfg.hidden_units.push_back(static_cast<index_t>(width));
  }
  cfg.hidden_units.push_back(n_classes);
  cfg.n_layers = static_cast<int>(cfg.hidden_units.size());
  const std::string fusion = params.str("fusion");
  if (fusion != "linear" && fusion != "mlp") {
    throw std::invalid_argument("train: fusion must be 'linear' or 'mlp'");
  }
  cfg.fusion = fusion == "mlp" ? FusionKind::mlp : FusionKind::linear;
  cfg.dropout = params.num("dropout");
  cfg.learning_rate = params.num("lr");
  cfg.weight_decay = params.num("wd");
  cfg.max_epochs = static_cast<int>(params.integer("epochs"));
  cfg.seed = seed;
  cfg.ablation_hadamard_off = params.flag("ablation_hadamard_off");
  cfg.ablation_regular_norm = params.flag("ablation_regular_norm");
  cfg.dense_cap = params.integer("dense_cap");
  const std::string baseline = params.str("baseline");
  if (baseline == "gcn") {
    cfg.gcn_baseline = true;
    cfg.epsilon = 1.0;
    cfg.ablation_hadamard_off = false;
    cfg.ablation_regular_norm = false;
  } else if (baseline != "none") {
    throw std::invalid_argument("train: baseline must be 'none' or 'gcn'");
  }

  write_manifest(params);
  Model model(cfg, g, features.cols());  // fail fast before training
  const TrainReport report = train(cfg, g, features, labels, splits, &model);
  save_checkpoint(model, (fs::path(params.str("out")) / "checkpoint").string());

  ordered_json epochs = ordered_json::array();
  for (const auto& e : report.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"train_accuracy", e.train_accuracy},
                      {"val_loss", e.val_loss},
                      {"val_accuracy", e.val_accuracy}});
  }
  ordered_json payload = {{"tool", std::string("s2gnn ") + kVersion},
                          {"test_accuracy", report.test_accuracy},
                          {"best_epoch", report.best_epoch},
                          {"parameter_count", report.parameter_count},
                          {"wall_time_s", report.wall_time_s},
                          {"n_classes", n_classes},
                          {"epochs", epochs}};
  write_json(params, "report.json", payload);
  std::cout << "test_accuracy=" << io::format_double(report.test_accuracy)
            << " best_epoch=" << report.best_epoch
            << " parameters=" << report.parameter_count << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sparsity

Params make_sparsity_params() {
  Params p("sparsity");
  p.declare("graph", "");
  p.declare("epsilon", "1.0");
  p.declare("rho_max", "5");
  p.declare("dense_cap", "5000");
  p.declare("out", "s2gnn_out");
  return p;
}

int run_sparsity(Params& params) {
  if (params.str("graph").empty()) {
    throw std::invalid_argument("sparsity: --graph is required");
  }
  const Graph g = io::read_graph(params.str("graph"));
  const double eps = params.num("epsilon");
  const auto rho_max = static_cast<int>(params.integer("rho_max"));
  const index_t cap = params.integer("dense_cap");
  const auto l = laplacian(g);

  const std::string comment = write_manifest(params);
  std::string csv = comment + "\nrho,sparsity_pct_dense,sparsity_pct_sparse\n";
  for (int rho = 1; rho <= rho_max; ++rho) {
    const double dense_pct =
        sparsity_percentage(dense_sobolev_term(l, eps, rho, cap));
    const double sparse_pct =
        sparsity_percentage(sparse_sobolev_term(l, eps, rho));
    csv += std::to_string(rho) + "," + io::format_double(dense_pct) + "," +
           io::format_double(sparse_pct) + "\n";
  }
  io::write_text_file((fs::path(params.str("out")) / "sparsity.csv").string(),
                      csv);
  std::cout << csv;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

Params make_bench_params() {
  Params p("bench");
  p.declare("n", "500,1000,5000,10000");
  p.declare("p", "0.03,0.04,0.05,0.06");
  p.declare("repeats", "30");
  p.declare("alpha", "3");
  p.declare("features", "16");
  p.declare("seed", "1");
  p.declare("out", "s2gnn_out");
  return p;
}

int run_bench_cmd(Params& params) {
  BenchOptions options;
  options.n_list.clear();
  for (long long n : params.int_list("n")) {
    options.n_list.push_back(static_cast<index_t>(n));
  }
  options.p_list = params.num_list("p");
  options.repeats = static_cast<int>(params.integer("repeats"));
  options.alpha = static_cast<int>(params.integer("alpha"));
  options.features = params.integer("features");
  options.seed = static_cast<std::uint64_t>(params.integer("seed"));

  const std::string comment = write_manifest(params);
  const auto rows = run_bench(options);

  std::string csv = comment +
                    "\nn,p,model,repeats,ok,mean_s,median_s,min_s,"
                    "peak_rss_mb,mem_method,error\n";
  for (const auto& r : rows) {
    csv += std::to_string(r.n) + "," + io::format_double(r.p) + "," + r.model +
           "," + std::to_string(r.repeats) + "," + (r.ok ? "1" : "0") + "," +
           io::format_double(r.mean_s) + "," + io::format_double(r.median_s) +
           "," + io::format_double(r.min_s) + "," +
           io::format_double(r.peak_rss_mb) + "," + r.mem_method + "," +
           r.error + "\n";
  }
  io::write_text_file((fs::path(params.str("out")) / "bench.csv").string(),
                      csv);
  std::cout << csv;
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stability

Params make_stability_params() {
  Params p("stability");
  p.declare("rho", "2,3");
  p.declare("p", "0.1,0.3,0.5");
  p.declare("eps", "0.5,5,10");
  p.declare("snr", "5,10,20,30,40");
  p.declare("nodes", "10");
  p.declare("f0", "16");
  p.declare("f1", "2");
  p.declare("seeds", "100");
  p.declare("quick", "0");
  p.declare("sigma", "identity");
  p.declare("seed", "7");
  p.declare("out", "s2gnn_out");
  return p;
}

int run_stability(Params& params) {
  SweepProtocol proto;
  proto.rhos.clear();
  for (long long r : params.int_list("rho")) {
    proto.rhos.push_back(static_cast<int>(r));
  }
  proto.p_er = params.num_list("p");
  proto.epsilons = params.num_list("eps");
  proto.snrs_db = params.num_list("snr");
  proto.n_nodes = params.integer("nodes");
  proto.f0 = params.integer("f0");
  proto.f1 = params.integer("f1");
  proto.n_seeds = static_cast<int>(params.integer("seeds"));
  if (params.flag("quick")) proto.n_seeds = std::min(proto.n_seeds, 10);
  proto.sigma = parse_sigma(params.str("sigma"));
  proto.master_seed = static_cast<std::uint64_t>(params.integer("seed"));

  const std::string comment = write_manifest(params);
  const auto cells = stability_sweep(proto);

  int violations = 0;
  std::string csv = comment +
                    "\nrho,p_er,epsilon,snr_db,mean_lhs,std_lhs,mean_rhs_fo,"
                    "mean_rhs_exact,violations\n";
  for (const auto& c : cells) {
    violations += c.violations;
    csv += std::to_string(c.rho) + "," + io::format_double(c.p_er) + "," +
           io::format_double(c.epsilon) + "," + io::format_double(c.snr_db) +
           "," + io::format_double(c.mean_lhs) + "," +
           io::format_double(c.std_lhs) + "," +
           io::format_double(c.mean_rhs_first_order) + "," +
           io::format_double(c.mean_rhs_exact) + "," +
           std::to_string(c.violations) + "\n";
  }
  io::write_text_file((fs::path(params.str("out")) / "stability.csv").string(),
                      csv);
  std::cout << csv;
  if (violations > 0) {
    std::cerr << "stability: " << violations
              << " exact-bound violation(s) found\n";
    return kExitViolation;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// homophily

Params make_homophily_params() {
  Params p("homophily");
  p.declare("graph", "");
  p.declare("labels", "");
  p.declare("out", "s2gnn_out");
  return p;
}

int run_homophily(Params& params) {
  if (params.str("graph").empty() || params.str("labels").empty()) {
    throw std::invalid_argument("homophily: --graph and --labels are required");
  }
  Graph g = io::read_graph(params.str("graph"));
  g.labels = io::read_labels_csv(params.str("labels"));
  if (static_cast<index_t>(g.labels.size()) != g.n_nodes()) {
    throw std::invalid_argument("homophily: label rows differ from node count");
  }
  index_t skipped = 0;
  const double h = homophily_index(g, &skipped);

  write_manifest(params);
  ordered_json payload = {{"tool", std::string("s2gnn ") + kVersion},
                          {"homophily_index", h},
                          {"skipped_isolated", skipped}};
  write_json(params, "homophily.json", payload);
  std::cout << io::format_double(h) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// curves

Params make_curves_params() {
  Params p("curves");
  p.declare("graph", "");
  p.declare("rho_max", "5");
  p.declare("dense_cap", "5000");
  p.declare("out", "s2gnn_out");
  return p;
}

int run_curves(Params& params) {
  if (params.str("graph").empty()) {
    throw std::invalid_argument("curves: --graph is required");
  }
  const Graph g = io::read_graph(params.str("graph"));
  const auto rows = eigen_penalization_curves(
      laplacian(g), static_cast<int>(params.integer("rho_max")),
      params.integer("dense_cap"));

  const std::string comment = write_manifest(params);
  std::string csv =
      comment + "\nrho,index,normalized_eig_dense,normalized_eig_sparse\n";
  for (const auto& r : rows) {
    csv += std::to_string(r.rho) + "," + std::to_string(r.index) + "," +
           io::format_double(r.normalized_eig_dense) + "," +
           io::format_double(r.normalized_eig_sparse) + "\n";
  }
  io::write_text_file((fs::path(params.str("out")) / "curves.csv").string(),
                      csv);
  std::cout << csv;
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct Subcommand {
  std::string name;
  std::string description;
  Params (*make)();
  int (*run)(Params&);
};

const std::vector<Subcommand>& subcommands() {
  static const std::vector<Subcommand> kSubcommands = {
      {"verify", "Run the property suites (norm/spectrum/stability/gradients)",
       make_verify_params, run_verify},
      {"knn", "Build a Gaussian-kernel k-NN graph from a feature CSV",
       make_knn_params, run_knn},
      {"train", "Train the sparse multi-branch model or the GCN baseline",
       make_train_params, run_train},
      {"sparsity", "Sparsity table: ordinary vs Hadamard Sobolev powers",
       make_sparsity_params, run_sparsity},
      {"bench", "Forward-pass timing and memory over an ER grid",
       make_bench_params, run_bench_cmd},
      {"stability", "Perturbation-bound sweep over the SNR grid",
       make_stability_params, run_stability},
      {"homophily", "Node-level homophily index of a labeled graph",
       make_homophily_params, run_homophily},
      {"curves", "Eigenvalue penalization curves (ordinary vs Hadamard)",
       make_curves_params, run_curves},
  };
  return kSubcommands;
}

void bind_options(CLI::App* sub, Params& params, std::string& config_path) {
  sub->add_option("--config", config_path,
                  "key=value file; flags override file values");
  for (const auto& [key, default_value] : params.manifest()) {
    if (key == "subcommand") continue;
    const std::string k = key;
    Params* target = &params;
    std::string names = "--" + key;
    if (key.find('_') != std::string::npos) {
      std::string alias = key;
      for (char& c : alias) {
        if (c == '_') c = '-';
      }
      names += ",--" + alias;
    }
    sub->add_option_function<std::string>(
        names,
        [target, k](const std::string& value) { target->set_flag(k, value); },
        "default: " + (default_value.empty() ? "(none)" : default_value));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("s2gnn ") + kVersion +
               " - sparse higher-order graph network toolkit"};
  app.require_subcommand(0, 1);
  std::string top_config;
  app.add_option("--config", top_config,
                 "run the subcommand recorded in a manifest file");

  std::vector<Params> param_sets;
  std::vector<std::string> config_paths(subcommands().size());
  param_sets.reserve(subcommands().size());
  for (const auto& sc : subcommands()) param_sets.push_back(sc.make());

  int exit_code = kExitOk;
  bool ran = false;
  for (std::size_t i = 0; i < subcommands().size(); ++i) {
    const auto& sc = subcommands()[i];
    CLI::App* sub = app.add_subcommand(sc.name, sc.description);
    bind_options(sub, param_sets[i], config_paths[i]);
    sub->callback([&param_sets, &config_paths, &exit_code, &ran, i] {
      if (!config_paths[i].empty()) param_sets[i].load_file(config_paths[i]);
      exit_code = subcommands()[i].run(param_sets[i]);
      ran = true;
    });
  }

  try {
    app.parse(argc, argv);
    if (!ran) {
      if (top_config.empty()) {
        std::cerr << app.help();
        return kExitUsage;
      }
      // Dispatch from a manifest: the file names the subcommand.
      const auto kv = io::read_kv_file(top_config);
      const auto it = kv.find("subcommand");
      if (it == kv.end()) {
        throw std::invalid_argument(top_config +
                                    ": missing 'subcommand' entry");
      }
      for (std::size_t i = 0; i < subcommands().size(); ++i) {
        if (subcommands()[i].name == it->second) {
          param_sets[i].load_file(top_config);
          return subcommands()[i].run(param_sets[i]);
        }
      }
      throw std::invalid_argument(top_config + ": unknown subcommand '" +
                                  it->second + "'");
    }
    return exit_code;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
