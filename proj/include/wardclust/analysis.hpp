#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "wardclust/core.hpp"
#include "wardclust/engine.hpp"

/// Dendrogram post-processing: cophenetic matrices, ultrametric
/// verification, cophenetic correlation, and wreath-product-invariant
/// topology comparison.
namespace wardclust {

/// Pairwise matrix of lowest-common-ancestor heights. Entries copied from
/// node heights, so the strong triangle inequality holds exactly.
using CopheneticMatrix = DissimilarityMatrix;

/// Scale the dendrogram heights live on: squared for raw ward.D (and the
/// other squared-input methods), plain otherwise.
inline Scale height_value_scale(const Dendrogram& dend) {
  const bool squared_native = required_scale(dend.method) == Scale::squared;
  const bool sqrted = dend.height_scale == HeightScale::sqrt_transformed;
  return squared_native && !sqrted ? Scale::squared : Scale::plain;
}

/// Entry (i,j) is the height of the lowest node containing both leaves.
/// Rejects dendrograms with inversions: their node heights do not define an
/// ultrametric.
inline CopheneticMatrix cophenetic_matrix(const Dendrogram& dend) {
  if (!detect_inversions(dend).empty())
    throw std::invalid_argument(
        "cophenetic_matrix: dendrogram has inversions; node heights are not "
        "ultrametric");
  const int n = dend.n;
  std::vector<double> entries(condensed_size(n), 0.0);
  // Leaf lists per node; every leaf pair is split exactly once, at its LCA.
  std::vector<std::vector<int>> leaves(static_cast<std::size_t>(2 * n - 1));
  for (int i = 0; i < n; ++i) leaves[i] = {i};
  for (int t = 0; t < n - 1; ++t) {
    const MergeStep& s = dend.steps[t];
    const auto& L = leaves[s.left];
    const auto& R = leaves[s.right];
    for (int i : L)
      for (int j : R)
        entries[condensed_index(i, j, n)] = s.height;
    auto& merged = leaves[n + t];
    merged.reserve(L.size() + R.size());
    merged.insert(merged.end(), L.begin(), L.end());
    merged.insert(merged.end(), R.begin(), R.end());
  }
  return CopheneticMatrix(n, std::move(entries), height_value_scale(dend));
}

/// Outcome of the strong-triangle-inequality check. When it fails, witness
/// holds observation ids (i, j, k) with d(i,j) > max(d(i,k), d(k,j)) + tol.
struct UltrametricCheck {
  bool ok = true;
  std::array<int, 3> witness{-1, -1, -1};
};

inline UltrametricCheck is_ultrametric(const DissimilarityMatrix& m,
                                       double tol = 0.0) {
  const int n = m.n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d_ij = m.at(i, j);
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (d_ij > std::max(m.at(i, k), m.at(k, j)) + tol)
          return {false, {i, j, k}};
      }
    }
  }
  return {};
}

/// Pearson correlation between the condensed entries of the original
/// dissimilarity matrix and a cophenetic matrix.
inline double cophenetic_correlation(const DissimilarityMatrix& original,
                                     const CopheneticMatrix& coph) {
  if (original.n != coph.n)
    throw std::invalid_argument("cophenetic_correlation: size mismatch");
  const std::size_t m = original.entries.size();
  if (m < 2)
    throw std::invalid_argument(
        "cophenetic_correlation: need at least two pairs");
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    mean_x += original.entries[k];
    mean_y += coph.entries[k];
  }
  mean_x /= static_cast<double>(m);
  mean_y /= static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double dx = original.entries[k] - mean_x;
    const double dy = coph.entries[k] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::invalid_argument(
        "cophenetic_correlation: zero variance in one of the vectors");
  return sxy / std::sqrt(sxx * syy);
}

namespace detail {

/// Sorted leaf-set of every internal node.
inline std::vector<std::vector<int>> node_leaf_sets(const Dendrogram& d) {
  std::vector<std::vector<int>> leaves(static_cast<std::size_t>(2 * d.n - 1));
  for (int i = 0; i < d.n; ++i) leaves[i] = {i};
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<std::size_t>(d.n) - 1);
  for (int t = 0; t < d.n - 1; ++t) {
    const MergeStep& s = d.steps[t];
    std::vector<int> merged;
    merged.reserve(leaves[s.left].size() + leaves[s.right].size());
    std::merge(leaves[s.left].begin(), leaves[s.left].end(),
               leaves[s.right].begin(), leaves[s.right].end(),
               std::back_inserter(merged));
    leaves[d.n + t] = merged;
    out.push_back(std::move(merged));
  }
  return out;
}

}  // namespace detail

/// True iff the two trees induce the same family of leaf-sets at internal
/// nodes. Child order, merge order and heights are ignored.
inline bool topology_equal(const Dendrogram& a, const Dendrogram& b) {
  if (a.n != b.n)
    throw std::invalid_argument("topology_equal: leaf-count mismatch");
  auto fa = detail::node_leaf_sets(a);
  auto fb = detail::node_leaf_sets(b);
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  return fa == fb;
}

enum class HeightMap { identity, sqrt, square };

/// Max relative deviation between corresponding merge heights after mapping
/// a's height through `map`. Steps are matched by leaf-set, so permuted
/// equal-height merges compare correctly. Requires equal topologies.
inline double compare_heights(const Dendrogram& a, const Dendrogram& b,
                              HeightMap map = HeightMap::identity) {
  if (!topology_equal(a, b))
    throw std::invalid_argument("compare_heights: topology mismatch");
  auto fa = detail::node_leaf_sets(a);
  auto fb = detail::node_leaf_sets(b);
  std::vector<std::size_t> ia(fa.size()), ib(fb.size());
  for (std::size_t t = 0; t < fa.size(); ++t) ia[t] = ib[t] = t;
  std::sort(ia.begin(), ia.end(),
            [&](std::size_t x, std::size_t y) { return fa[x] < fa[y]; });
  std::sort(ib.begin(), ib.end(),
            [&](std::size_t x, std::size_t y) { return fb[x] < fb[y]; });
  double max_dev = 0.0;
  for (std::size_t t = 0; t < ia.size(); ++t) {
    double ha = a.steps[ia[t]].height;
    switch (map) {
      case HeightMap::identity: break;
      case HeightMap::sqrt: ha = std::sqrt(ha); break;
      case HeightMap::square: ha = ha * ha; break;
    }
    const double hb = b.steps[ib[t]].height;
    const double diff = std::abs(ha - hb);
    if (diff > 0.0)
      max_dev = std::max(max_dev, diff / std::max(std::abs(ha), std::abs(hb)));
  }
  return max_dev;
}

}  // namespace wardclust
