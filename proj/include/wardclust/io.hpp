#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wardclust/core.hpp"

/// File ingestion and dendrogram exporters.
///
/// Data matrices are CSV, one observation per row, optional header row and
/// optional leading label column. Dissimilarities are either a full square
/// symmetric matrix with zero diagonal or a single condensed row of
/// n(n-1)/2 entries.
///
/// Printed heights (merge table, newick, svg) use 7 significant digits;
/// the json export carries full precision and round-trips exactly.
namespace wardclust {

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline bool parse_double(const std::string& cell, double& out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) cells.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

struct CsvRow {
  int line_number;
  std::vector<std::string> cells;
};

inline std::vector<CsvRow> read_csv_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open input file: " + path);
  std::vector<CsvRow> rows;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    rows.push_back({line_number, split_csv(t)});
  }
  if (rows.empty())
    throw std::runtime_error(path + ": no data rows");
  return rows;
}

inline std::string fmt7(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.7g", v);
  return buf;
}

inline std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

/// CSV -> DataMatrix. A header row and a leading label column are detected
/// from non-numeric cells; every remaining cell must parse as a finite
/// number, otherwise the error names the line.
inline DataMatrix ingest_data_matrix(const std::string& path) {
  auto rows = detail::read_csv_rows(path);

  // Header: first row whose every cell is non-numeric in a column that is
  // numeric below. Simpler and robust: header iff not all cells numeric
  // ignoring a possible label column.
  auto numeric_cells = [](const detail::CsvRow& r, std::size_t from) {
    double v;
    for (std::size_t c = from; c < r.cells.size(); ++c)
      if (!detail::parse_double(r.cells[c], v)) return false;
    return true;
  };
  double tmp;
  const bool labeled = rows.size() > 1 && !detail::parse_double(rows[1].cells[0], tmp);
  const std::size_t first_col = labeled ? 1 : 0;
  const bool has_header = !numeric_cells(rows[0], first_col);
  const std::size_t first_row = has_header ? 1 : 0;
  if (first_row >= rows.size())
    throw std::runtime_error(path + ": header but no data rows");

  const std::size_t width = rows[first_row].cells.size();
  if (width <= first_col)
    throw std::runtime_error(path + ": line " +
                             std::to_string(rows[first_row].line_number) +
                             ": no numeric columns");
  std::vector<double> values;
  std::vector<std::string> labels;
  int n = 0;
  for (std::size_t r = first_row; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.cells.size() != width)
      throw std::runtime_error(
          path + ": line " + std::to_string(row.line_number) + ": expected " +
          std::to_string(width) + " cells, got " +
          std::to_string(row.cells.size()));
    if (labeled) labels.push_back(row.cells[0]);
    for (std::size_t c = first_col; c < width; ++c) {
      double v;
      if (!detail::parse_double(row.cells[c], v))
        throw std::runtime_error(path + ": line " +
                                 std::to_string(row.line_number) +
                                 ": non-numeric cell '" + row.cells[c] + "'");
      values.push_back(v);
    }
    ++n;
  }
  DataMatrix data(n, static_cast<int>(width - first_col), std::move(values), {},
                  std::move(labels));
  require_valid(data);
  return data;
}

/// Dissimilarity file -> DissimilarityMatrix (plain scale). A square matrix
/// must be symmetric within 1e-12 with a zero diagonal; a single row is
/// treated as condensed entries, with n from `declared_n` or inferred from
/// the triangular length.
inline DissimilarityMatrix ingest_dissimilarity(const std::string& path,
                                                int declared_n = -1) {
  auto rows = detail::read_csv_rows(path);
  std::vector<std::vector<double>> numbers;
  for (const auto& row : rows) {
    std::vector<double> vals;
    for (const auto& cell : row.cells) {
      double v;
      if (!detail::parse_double(cell, v))
        throw std::runtime_error(path + ": line " +
                                 std::to_string(row.line_number) +
                                 ": non-numeric cell '" + cell + "'");
      vals.push_back(v);
    }
    numbers.push_back(std::move(vals));
  }

  if (numbers.size() == 1) {  // condensed row
    const std::size_t m = numbers[0].size();
    int n = declared_n;
    if (n < 0) {
      n = 1;
      while (condensed_size(n) < m) ++n;
    }
    if (condensed_size(n) != m)
      throw std::runtime_error(
          path + ": " + std::to_string(m) +
          " condensed entries do not match n=" + std::to_string(n) +
          " (need n(n-1)/2)");
    return DissimilarityMatrix(n, std::move(numbers[0]), Scale::plain);
  }

  const int n = static_cast<int>(numbers.size());
  for (int i = 0; i < n; ++i)
    if (numbers[i].size() != static_cast<std::size_t>(n))
      throw std::runtime_error(path + ": line " +
                               std::to_string(rows[i].line_number) +
                               ": square matrix row has " +
                               std::to_string(numbers[i].size()) +
                               " entries, expected " + std::to_string(n));
  if (declared_n >= 0 && declared_n != n)
    throw std::runtime_error(path + ": declared n=" + std::to_string(declared_n) +
                             " but matrix is " + std::to_string(n) + "x" +
                             std::to_string(n));
  for (int i = 0; i < n; ++i) {
    if (numbers[i][i] != 0.0)
      throw std::runtime_error(path + ": non-zero diagonal at (" +
                               std::to_string(i) + "," + std::to_string(i) + ")");
    for (int j = i + 1; j < n; ++j)
      if (std::abs(numbers[i][j] - numbers[j][i]) > 1e-12)
        throw std::runtime_error(path + ": asymmetric at pair (" +
                                 std::to_string(i) + "," + std::to_string(j) +
                                 "): " + std::to_string(numbers[i][j]) + " vs " +
                                 std::to_string(numbers[j][i]));
  }
  std::vector<double> entries(condensed_size(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      entries[condensed_index(i, j, n)] = numbers[i][j];
  return DissimilarityMatrix(n, std::move(entries), Scale::plain);
}

// ---------------------------------------------------------------------------
// Run metadata
// ---------------------------------------------------------------------------

/// Everything needed to classify a run as Ward or non-Ward: the method, the
/// algorithm, and the exact chain of transforms applied to the input.
struct RunMetadata {
  std::string algorithm = "naive";             // naive | nnchain
  std::string input_kind = "data";             // data | dissim | synthetic
  std::string input;                           // path or description
  std::vector<std::string> transforms;         // applied pipeline steps
  bool forced_scale = false;
  bool non_ward_warning = false;
  std::optional<std::uint64_t> seed;
};

// ---------------------------------------------------------------------------
// Exporters
// ---------------------------------------------------------------------------

inline std::string export_merge_table(const Dendrogram& dend) {
  std::string out;
  out += "# merge table: left,right,height,size\n";
  out += "# node ids: leaves are 0.." + std::to_string(dend.n - 1) +
         ", the cluster created at step t is node " + std::to_string(dend.n) +
         "+t\n";
  for (const MergeStep& s : dend.steps) {
    out += std::to_string(s.left) + "," + std::to_string(s.right) + "," +
           detail::fmt7(s.height) + "," + detail::fmt7(s.size) + "\n";
  }
  return out;
}

namespace detail {

inline std::string newick_label(int leaf, const std::vector<std::string>& labels) {
  if (labels.empty()) return std::to_string(leaf);
  std::string name = labels[leaf];
  for (char& ch : name)
    if (ch == ',' || ch == ';' || ch == ':' || ch == '(' || ch == ')' || ch == ' ')
      ch = '_';
  return name;
}

inline void newick_node(const Dendrogram& d, int node, double parent_height,
                        const std::vector<std::string>& labels, std::string& out) {
  if (d.is_leaf(node)) {
    out += newick_label(node, labels);
  } else {
    const MergeStep& s = d.step_of(node);
    out += '(';
    newick_node(d, s.left, s.height, labels, out);
    out += ',';
    newick_node(d, s.right, s.height, labels, out);
    out += ')';
  }
  out += ':';
  out += fmt7(parent_height - d.height_of(node));
}

}  // namespace detail

/// Nested parenthesized tree with branch lengths. A child's branch length is
/// parent height minus child height (leaves sit at height 0), so the path
/// between two leaves is twice their cophenetic height.
inline std::string export_newick(const Dendrogram& dend,
                                 const std::vector<std::string>& labels = {}) {
  if (!labels.empty() && labels.size() != static_cast<std::size_t>(dend.n))
    throw std::invalid_argument("export_newick: labels size mismatch");
  if (dend.n == 1) return std::string(detail::newick_label(0, labels)) + ";";
  const MergeStep& root = dend.steps.back();
  std::string out;
  out += '(';
  detail::newick_node(dend, root.left, root.height, labels, out);
  out += ',';
  detail::newick_node(dend, root.right, root.height, labels, out);
  out += ");";
  return out;
}

inline const char* height_scale_name(HeightScale s) {
  return s == HeightScale::raw ? "raw" : "sqrt-transformed";
}

/// Full-precision JSON export; the exact inverse of import_dendrogram_json.
inline std::string export_json(const Dendrogram& dend,
                               const RunMetadata& meta = {}) {
  nlohmann::json j;
  j["format"] = "wardclust-dendrogram";
  j["version"] = 1;
  j["n"] = dend.n;
  j["method"] = method_name(dend.method);
  j["height_scale"] = height_scale_name(dend.height_scale);
  nlohmann::json steps = nlohmann::json::array();
  for (const MergeStep& s : dend.steps) {
    steps.push_back({{"left", s.left},
                     {"right", s.right},
                     {"height", s.height},
                     {"size", s.size}});
  }
  j["steps"] = std::move(steps);
  j["order"] = dend.order;
  nlohmann::json m;
  m["algorithm"] = meta.algorithm;
  m["input_kind"] = meta.input_kind;
  m["input"] = meta.input;
  m["transforms"] = meta.transforms;
  m["forced_scale"] = meta.forced_scale;
  m["non_ward_warning"] = meta.non_ward_warning;
  if (meta.seed) m["seed"] = *meta.seed;
  j["metadata"] = std::move(m);
  return j.dump(2) + "\n";
}

inline Dendrogram import_dendrogram_json(const std::string& text,
                                         RunMetadata* meta_out = nullptr) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("dendrogram json: ") + e.what());
  }
  if (j.value("format", "") != "wardclust-dendrogram")
    throw std::runtime_error("dendrogram json: unrecognized format field");
  const int n = j.at("n").get<int>();
  const auto method = parse_method(j.at("method").get<std::string>());
  if (!method)
    throw std::runtime_error("dendrogram json: unknown method '" +
                             j.at("method").get<std::string>() + "'");
  const std::string hs = j.at("height_scale").get<std::string>();
  const HeightScale height_scale =
      hs == "raw" ? HeightScale::raw : HeightScale::sqrt_transformed;
  std::vector<MergeStep> steps;
  for (const auto& js : j.at("steps")) {
    steps.push_back({js.at("left").get<int>(), js.at("right").get<int>(),
                     js.at("height").get<double>(), js.at("size").get<double>()});
  }
  if (meta_out && j.contains("metadata")) {
    const auto& m = j["metadata"];
    meta_out->algorithm = m.value("algorithm", "");
    meta_out->input_kind = m.value("input_kind", "");
    meta_out->input = m.value("input", "");
    meta_out->transforms = m.value("transforms", std::vector<std::string>{});
    meta_out->forced_scale = m.value("forced_scale", false);
    meta_out->non_ward_warning = m.value("non_ward_warning", false);
    if (m.contains("seed")) meta_out->seed = m["seed"].get<std::uint64_t>();
  }
  return Dendrogram::make(n, std::move(steps), *method, height_scale);
}

/// Static dendrogram drawing: leaves laid out by the crossing-free order
/// permutation, heights on the vertical axis. Deterministic for a given
/// dendrogram.
inline std::string export_svg(const Dendrogram& dend,
                              const std::vector<std::string>& labels = {}) {
  const int n = dend.n;
  const double leaf_dx = 28.0;
  const double margin_l = 56.0, margin_r = 16.0, margin_t = 16.0, margin_b = 56.0;
  const double plot_h = 360.0;
  const double width = margin_l + margin_r + leaf_dx * (n > 1 ? n - 1 : 1);
  const double height = margin_t + plot_h + margin_b;
  double hmax = 0.0;
  for (const MergeStep& s : dend.steps) hmax = std::max(hmax, s.height);
  if (hmax <= 0.0) hmax = 1.0;

  std::vector<double> x(static_cast<std::size_t>(2 * n - 1), 0.0);
  std::vector<double> y(static_cast<std::size_t>(2 * n - 1), margin_t + plot_h);
  for (int pos = 0; pos < n; ++pos)
    x[dend.order[pos]] = margin_l + leaf_dx * pos;
  for (int t = 0; t < n - 1; ++t) {
    const MergeStep& s = dend.steps[t];
    x[n + t] = 0.5 * (x[s.left] + x[s.right]);
    y[n + t] = margin_t + plot_h * (1.0 - dend.steps[t].height / hmax);
  }

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         detail::fmt2(width) + "\" height=\"" + detail::fmt2(height) +
         "\" viewBox=\"0 0 " + detail::fmt2(width) + " " + detail::fmt2(height) +
         "\">\n";
  svg += "<g fill=\"none\" stroke=\"#1a1a1a\" stroke-width=\"1\">\n";
  for (int t = 0; t < n - 1; ++t) {
    const MergeStep& s = dend.steps[t];
    svg += "<path d=\"M " + detail::fmt2(x[s.left]) + " " +
           detail::fmt2(y[s.left]) + " V " + detail::fmt2(y[n + t]) + " H " +
           detail::fmt2(x[s.right]) + " V " + detail::fmt2(y[s.right]) +
           "\"/>\n";
  }
  svg += "</g>\n";
  // height axis with five ticks
  svg += "<g stroke=\"#666\" stroke-width=\"1\">\n";
  svg += "<line x1=\"" + detail::fmt2(margin_l - 12) + "\" y1=\"" +
         detail::fmt2(margin_t) + "\" x2=\"" + detail::fmt2(margin_l - 12) +
         "\" y2=\"" + detail::fmt2(margin_t + plot_h) + "\"/>\n";
  svg += "</g>\n<g font-family=\"monospace\" font-size=\"10\" fill=\"#333\">\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double frac = tick / 4.0;
    const double ty = margin_t + plot_h * (1.0 - frac);
    svg += "<text x=\"2\" y=\"" + detail::fmt2(ty + 3) + "\">" +
           detail::fmt7(hmax * frac) + "</text>\n";
  }
  for (int pos = 0; pos < n; ++pos) {
    const int leaf = dend.order[pos];
    const std::string name = labels.empty()
                                 ? std::to_string(leaf)
                                 : labels[static_cast<std::size_t>(leaf)];
    svg += "<text x=\"" + detail::fmt2(x[leaf]) + "\" y=\"" +
           detail::fmt2(margin_t + plot_h + 14) +
           "\" text-anchor=\"end\" transform=\"rotate(-60 " +
           detail::fmt2(x[leaf]) + " " + detail::fmt2(margin_t + plot_h + 14) +
           ")\">" + name + "</text>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace wardclust
