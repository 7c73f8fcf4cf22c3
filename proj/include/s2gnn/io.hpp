#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "s2gnn/dense.hpp"
#include "s2gnn/graph.hpp"

namespace s2gnn::io {

// Edge-list graph format: one `src,dst,weight` line per undirected edge,
// 0-based, each edge listed once. Node count is inferred from the largest
// index unless a larger hint is given. Loaders report the offending line.
void write_graph(const std::string& path, const Graph& g);
Graph read_graph(const std::string& path, index_t n_nodes_hint = 0);

// CSV with a header row; doubles serialized at full precision.
void write_matrix_csv(const std::string& path, const DenseMatrix& m,
                      const std::string& column_prefix = "f");
DenseMatrix read_matrix_csv(const std::string& path);

void write_labels_csv(const std::string& path, const std::vector<int>& labels);
std::vector<int> read_labels_csv(const std::string& path);

void write_masks_csv(const std::string& path, const SplitMask& mask);
SplitMask read_masks_csv(const std::string& path);

// Plain-text `key=value` config files; '#' starts a comment.
using KvList = std::vector<std::pair<std::string, std::string>>;
std::map<std::string, std::string> read_kv_file(const std::string& path);
void write_kv_file(const std::string& path, const KvList& entries);

std::uint64_t fnv1a64(std::string_view s);
std::string format_double(double v);  // shortest round-trip-safe form

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace s2gnn::io
