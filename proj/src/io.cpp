#include "s2gnn/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace s2gnn::io {

namespace {

[[noreturn]] void fail_at(const std::string& path, std::size_t line,
                          const std::string& message) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + message);
}

std::vector<std::string> split_fields(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s, const std::string& path,
                    std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) fail_at(path, line, "trailing junk in number '" + s + "'");
    return v;
  } catch (const std::invalid_argument&) {
    fail_at(path, line, "not a number: '" + s + "'");
  } catch (const std::out_of_range&) {
    fail_at(path, line, "number out of range: '" + s + "'");
  }
}

long long parse_int(const std::string& s, const std::string& path,
                    std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    fail_at(path, line, "not an integer: '" + s + "'");
  }
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_graph(const std::string& path, const Graph& g) {
  auto out = open_output(path);
  const SparseMatrix& a = g.adjacency;
  for (index_t r = 0; r < a.rows(); ++r) {
    for (index_t k = a.row_ptr()[r]; k < a.row_ptr()[r + 1]; ++k) {
      const index_t c = a.col_idx()[k];
      if (c <= r) continue;  // upper triangle only
      out << r << ',' << c << ',' << format_double(a.values()[k]) << '\n';
    }
  }
}

Graph read_graph(const std::string& path, index_t n_nodes_hint) {
  auto in = open_input(path);
  std::vector<SparseMatrix::Triplet> upper;
  index_t max_index = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_fields(line, ',');
    if (fields.size() != 3) {
      fail_at(path, line_no, "expected 'src,dst,weight'");
    }
    const auto src = static_cast<index_t>(parse_int(fields[0], path, line_no));
    const auto dst = static_cast<index_t>(parse_int(fields[1], path, line_no));
    const double w = parse_double(fields[2], path, line_no);
    if (src < 0 || dst < 0) fail_at(path, line_no, "negative node index");
    if (src == dst) fail_at(path, line_no, "self-loop not allowed");
    if (w <= 0.0) fail_at(path, line_no, "edge weight must be positive");
    upper.emplace_back(src, dst, w);
    max_index = std::max({max_index, src, dst});
  }
  const index_t n = std::max(n_nodes_hint, max_index + 1);
  try {
    return Graph::from_edges(n, std::move(upper));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_matrix_csv(const std::string& path, const DenseMatrix& m,
                      const std::string& column_prefix) {
  auto out = open_output(path);
  for (index_t j = 0; j < m.cols(); ++j) {
    out << (j ? "," : "") << column_prefix << j;
  }
  out << '\n';
  for (index_t i = 0; i < m.rows(); ++i) {
    for (index_t j = 0; j < m.cols(); ++j) {
      out << (j ? "," : "") << format_double(m(i, j));
    }
    out << '\n';
  }
}

DenseMatrix read_matrix_csv(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": empty file, expected a header row");
  }
  ++line_no;
  const auto n_cols = static_cast<index_t>(split_fields(line, ',').size());

  std::vector<double> values;
  index_t n_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line, ',');
    if (static_cast<index_t>(fields.size()) != n_cols) {
      fail_at(path, line_no,
              "expected " + std::to_string(n_cols) + " fields, got " +
                  std::to_string(fields.size()));
    }
    for (const auto& f : fields) values.push_back(parse_double(f, path, line_no));
    ++n_rows;
  }
  DenseMatrix m(n_rows, n_cols);
  m.data() = std::move(values);
  if (!all_finite(m)) {
    throw std::runtime_error(path + ": non-finite value in matrix");
  }
  return m;
}

void write_labels_csv(const std::string& path, const std::vector<int>& labels) {
  auto out = open_output(path);
  out << "label\n";
  for (int l : labels) out << l << '\n';
}

std::vector<int> read_labels_csv(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": empty file, expected a header row");
  }
  ++line_no;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    labels.push_back(static_cast<int>(parse_int(
        split_fields(line, ',').front(), path, line_no)));
  }
  return labels;
}

void write_masks_csv(const std::string& path, const SplitMask& mask) {
  auto out = open_output(path);
  out << "train,val,test\n";
  for (std::size_t i = 0; i < mask.train.size(); ++i) {
    out << int(mask.train[i]) << ',' << int(mask.val[i]) << ','
        << int(mask.test[i]) << '\n';
  }
}

SplitMask read_masks_csv(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": empty file, expected a header row");
  }
  ++line_no;
  SplitMask mask;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line, ',');
    if (fields.size() != 3) fail_at(path, line_no, "expected 'train,val,test'");
    for (std::size_t j = 0; j < 3; ++j) {
      const auto v = parse_int(fields[j], path, line_no);
      if (v != 0 && v != 1) fail_at(path, line_no, "mask entries must be 0/1");
    }
    mask.train.push_back(static_cast<char>(parse_int(fields[0], path, line_no)));
    mask.val.push_back(static_cast<char>(parse_int(fields[1], path, line_no)));
    mask.test.push_back(static_cast<char>(parse_int(fields[2], path, line_no)));
  }
  try {
    mask.validate();
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return mask;
}

std::map<std::string, std::string> read_kv_file(const std::string& path) {
  auto in = open_input(path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail_at(path, line_no, "expected 'key=value'");
    }
    const std::string key = line.substr(0, eq);
    if (key.empty()) fail_at(path, line_no, "empty key");
    if (kv.contains(key)) fail_at(path, line_no, "duplicate key '" + key + "'");
    kv[key] = line.substr(eq + 1);
  }
  return kv;
}

void write_kv_file(const std::string& path, const KvList& entries) {
  auto out = open_output(path);
  for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_text_file(const std::string& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  auto out = open_output(path);
  out << content;
}

}  // namespace s2gnn::io
