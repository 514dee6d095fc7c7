#pragma once

// File formats: dense CSV matrices, 1-based edge TSV with an n=<n> header
// (symmetric-once convention), and vertex,label CSV. Numbers are written in
// shortest round-trip form, so write -> read -> write is byte-stable.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gge/graph.hpp"
#include "gge/kernels.hpp"
#include "gge/matrix.hpp"

namespace gge {

enum class GraphFormat { dense_csv, edge_tsv };

namespace detail {

inline std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] inline void parse_fail(const std::string& path, std::size_t line,
                                    const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

inline double parse_double(std::string_view field, const std::string& path,
                           std::size_t line) {
  const auto t = trim(field);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    parse_fail(path, line, "expected a number, got '" + std::string(t) + "'");
  return v;
}

inline std::int64_t parse_int(std::string_view field, const std::string& path,
                              std::size_t line) {
  const auto t = trim(field);
  std::int64_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    parse_fail(path, line, "expected an integer, got '" + std::string(t) + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

}  // namespace detail

// Rectangular CSV of reals, one row per line. Blank trailing lines are
// ignored; ragged rows are an error naming the line.
inline Matrix read_matrix_csv(const std::string& path) {
  auto in = detail::open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(line, ',');
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields)
      row.push_back(detail::parse_double(f, path, lineno));
    if (!rows.empty() && row.size() != rows.front().size())
      detail::parse_fail(path, lineno,
                         "ragged row: expected " +
                             std::to_string(rows.front().size()) +
                             " fields, got " + std::to_string(row.size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty matrix file");
  Matrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.front().size(); ++j)
      m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return m;
}

inline void write_matrix_csv(const std::string& path, const Matrix& m) {
  auto out = detail::open_output(path);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (j) out << ',';
      out << detail::fmt_double(m(i, j));
    }
    out << '\n';
  }
}

inline GeneralGraph read_graph(const std::string& path, GraphFormat format) {
  if (format == GraphFormat::dense_csv) {
    Matrix m = read_matrix_csv(path);
    if (m.rows != m.cols)
      throw std::runtime_error(path + ": dense graph must be square, got " +
                               std::to_string(m.rows) + "x" +
                               std::to_string(m.cols));
    return GeneralGraph::from_dense(std::move(m));
  }
  auto in = detail::open_input(path);
  std::string line;
  std::size_t lineno = 0;
  std::int64_t n = -1;
  std::vector<GeneralGraph::Triplet> triplets;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    if (n < 0) {
      if (!t.starts_with("n="))
        detail::parse_fail(path, lineno, "expected header 'n=<count>'");
      n = detail::parse_int(t.substr(2), path, lineno);
      if (n < 0) detail::parse_fail(path, lineno, "vertex count must be >= 0");
      continue;
    }
    const auto fields = detail::split(t, '\t');
    if (fields.size() != 3)
      detail::parse_fail(path, lineno, "expected 'i<TAB>j<TAB>weight'");
    const auto i = detail::parse_int(fields[0], path, lineno);
    const auto j = detail::parse_int(fields[1], path, lineno);
    const double w = detail::parse_double(fields[2], path, lineno);
    if (i < 1 || i > n || j < 1 || j > n)
      detail::parse_fail(path, lineno,
                         "vertex index out of range 1.." + std::to_string(n));
    triplets.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), w});
  }
  if (n < 0) throw std::runtime_error(path + ": missing 'n=<count>' header");
  return GeneralGraph::from_triplets(static_cast<int>(n), std::move(triplets),
                                     GeneralGraph::SparseMode::symmetric_once);
}

inline void write_graph(const std::string& path, const GeneralGraph& graph,
                        GraphFormat format) {
  if (format == GraphFormat::dense_csv) {
    write_matrix_csv(path, densify(graph).dense());
    return;
  }
  const GeneralGraph sparse = sparsify(graph);
  if (sparse.mode() != GeneralGraph::SparseMode::symmetric_once)
    throw std::runtime_error(path +
                             ": edge-tsv stores undirected graphs only (use "
                             "dense-csv for asymmetric matrices)");
  auto out = detail::open_output(path);
  out << "n=" << sparse.size() << '\n';
  for (const auto& e : sparse.triplets())
    out << (e.row + 1) << '\t' << (e.col + 1) << '\t'
        << detail::fmt_double(e.weight) << '\n';
}

// Lines of 'vertex,label'. Vertex ids must form a permutation of 1..n; labels
// are in {0,...,K} with K inferred as the maximum label unless overridden.
inline LabelVector read_labels(const std::string& path, int classes_override = 0) {
  auto in = detail::open_input(path);
  std::string line;
  std::size_t lineno = 0;
  std::map<std::int64_t, int> by_vertex;
  int max_label = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    const auto fields = detail::split(t, ',');
    if (fields.size() != 2)
      detail::parse_fail(path, lineno, "expected 'vertex,label'");
    const auto vertex = detail::parse_int(fields[0], path, lineno);
    const auto label = detail::parse_int(fields[1], path, lineno);
    if (vertex < 1) detail::parse_fail(path, lineno, "vertex ids are 1-based");
    if (label < 0) detail::parse_fail(path, lineno, "labels must be >= 0");
    if (!by_vertex.emplace(vertex, static_cast<int>(label)).second)
      detail::parse_fail(path, lineno,
                         "duplicate vertex id " + std::to_string(vertex));
    max_label = std::max(max_label, static_cast<int>(label));
  }
  if (by_vertex.empty()) throw std::runtime_error(path + ": empty label file");
  const auto n = static_cast<std::int64_t>(by_vertex.size());
  if (by_vertex.rbegin()->first != n)
    throw std::runtime_error(path + ": vertex ids must cover 1.." +
                             std::to_string(n) + " exactly");
  const int num_classes = classes_override > 0 ? classes_override : max_label;
  if (num_classes < 1)
    throw std::runtime_error(path +
                             ": no known labels; pass an explicit class count");
  if (max_label > num_classes)
    throw std::runtime_error(path + ": label " + std::to_string(max_label) +
                             " exceeds declared class count " +
                             std::to_string(num_classes));
  std::vector<int> values;
  values.reserve(by_vertex.size());
  for (const auto& [vertex, label] : by_vertex) values.push_back(label);
  return LabelVector(std::move(values), num_classes);
}

inline void write_labels(const std::string& path, const LabelVector& labels) {
  auto out = detail::open_output(path);
  for (int i = 0; i < labels.size(); ++i)
    out << (i + 1) << ',' << labels[i] << '\n';
}

// Kernel specs as strings: "euclidean", "inner", "cosine", "spearman",
// "rbf", "rbf:sigma=2.5", "dk", "dk:base=spearman", "dk:base=rbf,sigma=1.5".
inline KernelSpec parse_kernel_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string params =
      colon == std::string::npos ? "" : text.substr(colon + 1);

  auto kind_of = [](const std::string& s) -> KernelKind {
    if (s == "euclidean") return KernelKind::euclidean;
    if (s == "inner") return KernelKind::inner;
    if (s == "cosine") return KernelKind::cosine;
    if (s == "rbf") return KernelKind::rbf;
    if (s == "spearman") return KernelKind::spearman;
    if (s == "dk" || s == "distance-to-kernel")
      return KernelKind::distance_to_kernel;
    throw std::runtime_error("unknown kernel '" + s + "'");
  };

  KernelSpec spec;
  spec.kind = kind_of(name);
  if (!params.empty()) {
    for (const auto& item : detail::split(params, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos)
        throw std::runtime_error("kernel parameter '" + std::string(item) +
                                 "' is not key=value");
      const auto key = detail::trim(item.substr(0, eq));
      const auto value = std::string(detail::trim(item.substr(eq + 1)));
      if (key == "sigma") {
        const double s = detail::parse_double(value, "<kernel>", 0);
        if (spec.kind == KernelKind::distance_to_kernel)
          spec.base_sigma = s;
        else
          spec.sigma = s;
      } else if (key == "base" && spec.kind == KernelKind::distance_to_kernel) {
        spec.base = kind_of(value);
      } else {
        throw std::runtime_error("unknown kernel parameter '" +
                                 std::string(key) + "'");
      }
    }
  }
  validate(spec);
  return spec;
}

inline std::string format_kernel_spec(const KernelSpec& spec) {
  auto name_of = [](KernelKind k) -> std::string {
    switch (k) {
      case KernelKind::euclidean: return "euclidean";
      case KernelKind::inner: return "inner";
      case KernelKind::cosine: return "cosine";
      case KernelKind::rbf: return "rbf";
      case KernelKind::spearman: return "spearman";
      case KernelKind::distance_to_kernel: return "dk";
    }
    return "?";
  };
  std::string out = name_of(spec.kind);
  if (spec.kind == KernelKind::rbf)
    out += ":sigma=" + detail::fmt_double(spec.sigma);
  if (spec.kind == KernelKind::distance_to_kernel) {
    out += ":base=" + name_of(spec.base);
    if (spec.base == KernelKind::rbf)
      out += ",sigma=" + detail::fmt_double(spec.base_sigma);
  }
  return out;
}

}  // namespace gge
