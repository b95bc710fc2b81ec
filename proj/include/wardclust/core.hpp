#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

/// wardclust: agglomerative hierarchical clustering with explicit control
/// over the two Ward variants found in statistical software.
///
/// `ward.D` runs the Lance-Williams recurrence on *squared* dissimilarities
/// and reports heights on the squared scale; `ward.D2` takes *plain*
/// dissimilarities, squares inside the update and square-roots the result.
/// Fed consistently (D^2 to ward.D, D to ward.D2) they produce the same
/// tree, with ward.D heights equal to the squares of ward.D2 heights.
namespace wardclust {

// ---------------------------------------------------------------------------
// Tags and method table
// ---------------------------------------------------------------------------

/// Scale of the values stored in a dissimilarity matrix.
enum class Scale { plain, squared };

/// Whether dendrogram heights are as produced by the method (`raw`) or have
/// been square-root transformed afterwards.
enum class HeightScale { raw, sqrt_transformed };

enum class LinkageMethod : std::uint8_t {
  ward_d,    // expects squared input, heights on squared scale
  ward_d2,   // expects plain input, heights on distance scale
  single,
  complete,
  average,
  centroid,  // not reducible: can produce inversions
  median     // not reducible: can produce inversions
};

inline const char* method_name(LinkageMethod m) {
  switch (m) {
    case LinkageMethod::ward_d:   return "ward.D";
    case LinkageMethod::ward_d2:  return "ward.D2";
    case LinkageMethod::single:   return "single";
    case LinkageMethod::complete: return "complete";
    case LinkageMethod::average:  return "average";
    case LinkageMethod::centroid: return "centroid";
    case LinkageMethod::median:   return "median";
  }
  return "?";
}

inline std::optional<LinkageMethod> parse_method(std::string_view name) {
  using LM = LinkageMethod;
  for (LM m : {LM::ward_d, LM::ward_d2, LM::single, LM::complete, LM::average,
               LM::centroid, LM::median})
    if (name == method_name(m)) return m;
  return std::nullopt;
}

/// Input scale a method's update rule is defined on.
inline Scale required_scale(LinkageMethod m) {
  switch (m) {
    case LinkageMethod::ward_d:
    case LinkageMethod::centroid:
    case LinkageMethod::median:
      return Scale::squared;
    default:
      return Scale::plain;
  }
}

/// Reducible methods never produce inversions and admit the
/// nearest-neighbor-chain algorithm.
inline bool is_reducible(LinkageMethod m) {
  return m != LinkageMethod::centroid && m != LinkageMethod::median;
}

// ---------------------------------------------------------------------------
// Condensed indexing
// ---------------------------------------------------------------------------

inline std::size_t condensed_size(int n) {
  return static_cast<std::size_t>(n) * (n - 1) / 2;
}

/// Offset of the unordered pair {i,j} in a condensed strictly-lower-triangular
/// store over n observations: for i < j the entry lives at
/// n*i - i*(i+1)/2 + (j - i - 1). Symmetric in (i, j).
inline std::size_t condensed_index(int i, int j, int n) {
  if (i == j)
    throw std::invalid_argument("condensed_index: self-pair (" +
                                std::to_string(i) + "," + std::to_string(j) +
                                ") has no stored entry");
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw std::invalid_argument("condensed_index: pair (" + std::to_string(i) +
                                "," + std::to_string(j) +
                                ") out of range for n=" + std::to_string(n));
  if (i > j) std::swap(i, j);
  return static_cast<std::size_t>(n) * i - static_cast<std::size_t>(i) * (i + 1) / 2 +
         (j - i - 1);
}

// ---------------------------------------------------------------------------
// DataMatrix
// ---------------------------------------------------------------------------

/// n observations by p attributes, row-major, with per-observation masses
/// (default 1.0). Masses are arbitrary positive reals; callers wanting the
/// probability convention scale them to 1/n themselves.
struct DataMatrix {
  int n = 0;
  int p = 0;
  std::vector<double> values;              // n*p, row-major
  std::vector<double> masses;              // n, strictly positive
  std::vector<std::string> row_labels;     // optional, empty or n entries

  DataMatrix() = default;

  DataMatrix(int n_, int p_, std::vector<double> values_,
             std::vector<double> masses_ = {},
             std::vector<std::string> labels_ = {})
      : n(n_), p(p_), values(std::move(values_)), masses(std::move(masses_)),
        row_labels(std::move(labels_)) {
    if (n < 0 || p < 0)
      throw std::invalid_argument("DataMatrix: negative dimensions");
    if (values.size() != static_cast<std::size_t>(n) * p)
      throw std::invalid_argument("DataMatrix: values size does not match n*p");
    if (masses.empty()) masses.assign(static_cast<std::size_t>(n), 1.0);
    if (masses.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("DataMatrix: masses size does not match n");
    if (!row_labels.empty() && row_labels.size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("DataMatrix: labels size does not match n");
  }

  double operator()(int i, int j) const {
    return values[static_cast<std::size_t>(i) * p + j];
  }
  std::span<const double> row(int i) const {
    return {values.data() + static_cast<std::size_t>(i) * p,
            static_cast<std::size_t>(p)};
  }
};

/// Result of validate(): empty issue list means the matrix is usable.
struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

/// Checks every DataMatrix invariant and reports all violations with their
/// row/column positions.
inline ValidationReport validate(const DataMatrix& data) {
  ValidationReport report;
  if (data.n < 1 || data.p < 1) {
    report.issues.push_back("empty matrix: need n >= 1 and p >= 1, got n=" +
                            std::to_string(data.n) + " p=" + std::to_string(data.p));
    return report;
  }
  for (int i = 0; i < data.n; ++i)
    for (int j = 0; j < data.p; ++j)
      if (!std::isfinite(data(i, j)))
        report.issues.push_back("non-finite value at row " + std::to_string(i) +
                                ", column " + std::to_string(j));
  for (int i = 0; i < data.n; ++i)
    if (!(data.masses[i] > 0.0) || !std::isfinite(data.masses[i]))
      report.issues.push_back("non-positive mass at row " + std::to_string(i));
  return report;
}

/// Throws std::invalid_argument listing every violation.
inline void require_valid(const DataMatrix& data) {
  ValidationReport r = validate(data);
  if (!r.ok()) {
    std::string msg = "invalid data matrix:";
    for (const auto& issue : r.issues) msg += "\n  " + issue;
    throw std::invalid_argument(msg);
  }
}

// ---------------------------------------------------------------------------
// DissimilarityMatrix
// ---------------------------------------------------------------------------

/// Condensed strictly-lower-triangular store of n(n-1)/2 pairwise
/// dissimilarities, tagged with its scale. Symmetry is structural: only one
/// entry exists per unordered pair, self-dissimilarity is implicitly 0.
struct DissimilarityMatrix {
  int n = 0;
  std::vector<double> entries;
  Scale scale = Scale::plain;

  DissimilarityMatrix() = default;

  DissimilarityMatrix(int n_, std::vector<double> entries_, Scale scale_)
      : n(n_), entries(std::move(entries_)), scale(scale_) {
    if (n < 1) throw std::invalid_argument("DissimilarityMatrix: need n >= 1");
    if (entries.size() != condensed_size(n))
      throw std::invalid_argument(
          "DissimilarityMatrix: expected " + std::to_string(condensed_size(n)) +
          " condensed entries for n=" + std::to_string(n) + ", got " +
          std::to_string(entries.size()));
    for (std::size_t k = 0; k < entries.size(); ++k)
      if (!(entries[k] >= 0.0) || !std::isfinite(entries[k]))
        throw std::invalid_argument(
            "DissimilarityMatrix: entry " + std::to_string(k) +
            " is negative or non-finite");
  }

  double at(int i, int j) const {
    if (i == j) return 0.0;
    return entries[condensed_index(i, j, n)];
  }

  /// Entry-wise square; plain -> squared.
  DissimilarityMatrix squared() const {
    std::vector<double> sq(entries.size());
    for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = entries[k] * entries[k];
    return DissimilarityMatrix(n, std::move(sq), Scale::squared);
  }
};

/// Pairwise Euclidean distances of the rows of `data`, on the requested
/// scale. Masses do not enter the distances.
inline DissimilarityMatrix pairwise_euclidean(const DataMatrix& data,
                                              Scale scale = Scale::plain) {
  require_valid(data);
  std::vector<double> out(condensed_size(data.n));
  std::size_t k = 0;
  for (int i = 0; i < data.n; ++i) {
    for (int j = i + 1; j < data.n; ++j, ++k) {
      double ss = 0.0;
      for (int a = 0; a < data.p; ++a) {
        const double diff = data(i, a) - data(j, a);
        ss += diff * diff;
      }
      out[k] = scale == Scale::squared ? ss : std::sqrt(ss);
    }
  }
  return DissimilarityMatrix(data.n, std::move(out), scale);
}

// ---------------------------------------------------------------------------
// Dendrogram
// ---------------------------------------------------------------------------

/// One agglomeration: children by node id, merge height, merged mass.
/// Leaves are nodes 0..n-1; the cluster created at step t is node n+t.
struct MergeStep {
  int left = -1;
  int right = -1;
  double height = 0.0;
  double size = 0.0;
};

/// Ordered list of the n-1 merges plus a leaf permutation for crossing-free
/// drawing. Children are stored with the subtree containing the smallest
/// leaf id first, so equal trees compare equal step by step.
struct Dendrogram {
  int n = 0;
  std::vector<MergeStep> steps;
  std::vector<int> order;       // permutation of 0..n-1
  LinkageMethod method = LinkageMethod::ward_d2;
  HeightScale height_scale = HeightScale::raw;

  int num_nodes() const { return 2 * n - 1; }
  int root() const { return 2 * n - 2; }
  bool is_leaf(int node) const { return node < n; }
  const MergeStep& step_of(int node) const { return steps[node - n]; }

  /// Validates the node-id conventions and size bookkeeping, canonicalizes
  /// child order, and computes the drawing permutation.
  static Dendrogram make(int n, std::vector<MergeStep> steps, LinkageMethod method,
                         HeightScale height_scale = HeightScale::raw) {
    if (n < 1) throw std::invalid_argument("Dendrogram: need n >= 1");
    if (steps.size() != static_cast<std::size_t>(n) - 1)
      throw std::invalid_argument("Dendrogram: expected n-1 steps");
    std::vector<bool> used(static_cast<std::size_t>(2 * n - 1), false);
    std::vector<int> min_leaf(static_cast<std::size_t>(2 * n - 1));
    for (int i = 0; i < n; ++i) min_leaf[i] = i;
    for (int t = 0; t < n - 1; ++t) {
      MergeStep& s = steps[t];
      for (int child : {s.left, s.right}) {
        if (child < 0 || child >= n + t)
          throw std::invalid_argument("Dendrogram: step " + std::to_string(t) +
                                      " references invalid node " +
                                      std::to_string(child));
        if (used[child])
          throw std::invalid_argument("Dendrogram: node " + std::to_string(child) +
                                      " used as a child twice");
        used[child] = true;
      }
      if (s.left == s.right)
        throw std::invalid_argument("Dendrogram: step merges a node with itself");
      if (min_leaf[s.right] < min_leaf[s.left]) std::swap(s.left, s.right);
      min_leaf[n + t] = min_leaf[s.left];
      if (!std::isfinite(s.height))
        throw std::invalid_argument("Dendrogram: non-finite height at step " +
                                    std::to_string(t));
    }
    Dendrogram d;
    d.n = n;
    d.steps = std::move(steps);
    d.method = method;
    d.height_scale = height_scale;
    d.order = d.compute_order();
    return d;
  }

  /// Leaf ids of the subtree rooted at `node`, in drawing order.
  std::vector<int> leaves_of(int node) const {
    std::vector<int> out;
    std::vector<int> stack{node};
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      if (is_leaf(cur)) {
        out.push_back(cur);
      } else {
        const MergeStep& s = step_of(cur);
        stack.push_back(s.right);  // left expanded first
        stack.push_back(s.left);
      }
    }
    return out;
  }

  double height_of(int node) const {
    return is_leaf(node) ? 0.0 : step_of(node).height;
  }

 private:
  std::vector<int> compute_order() const {
    if (n == 1) return {0};
    return leaves_of(root());
  }
};

// ---------------------------------------------------------------------------
// Partition
// ---------------------------------------------------------------------------

/// Assignment of each observation to one of k clusters; every cluster index
/// in 0..k-1 must occur at least once.
struct Partition {
  std::vector<int> assignment;
  int k = 0;

  Partition() = default;
  Partition(std::vector<int> assignment_, int k_)
      : assignment(std::move(assignment_)), k(k_) {
    if (k < 1) throw std::invalid_argument("Partition: need k >= 1");
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    for (int a : assignment) {
      if (a < 0 || a >= k)
        throw std::invalid_argument("Partition: cluster index " +
                                    std::to_string(a) + " out of range");
      seen[a] = true;
    }
    for (int q = 0; q < k; ++q)
      if (!seen[q])
        throw std::invalid_argument("Partition: cluster " + std::to_string(q) +
                                    " is empty");
  }

  std::vector<std::vector<int>> members() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < assignment.size(); ++i)
      out[assignment[i]].push_back(static_cast<int>(i));
    return out;
  }
};

}  // namespace wardclust
