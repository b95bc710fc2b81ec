#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "wardclust/core.hpp"
#include "wardclust/criteria.hpp"

/// Stored-data ground truth for the Ward criterion: a greedy agglomerator
/// that works from coordinates only, recomputing centroids and the explicit
/// merge cost at every step. No Lance-Williams update is involved, so this
/// module can arbitrate disagreements in the recurrence-based engine.
namespace wardclust {

struct OracleStep {
  int left = -1;
  int right = -1;
  double delta_ess = 0.0;   // increase in the weighted sum of squares
  double criterion = 0.0;   // dipole form: m1*m2/(m1+m2) * ||c1-c2||^2
  std::vector<double> centroid;
  double size = 0.0;
};

struct OracleTrace {
  int n = 0;
  std::vector<OracleStep> steps;
};

/// Greedy minimum-variance agglomeration from coordinates. At each step the
/// merge cost of every surviving pair is evaluated directly from centroids
/// and masses; the minimizer merges. delta_ess is recomputed as a sum-of-
/// squares difference, criterion from the dipole formula; the two agree to
/// rounding and both are recorded. Tie-breaking matches the engine
/// (lexicographically smallest node-id pair).
///
/// O(n^2 p) per step; intended for verification, capped at max_n.
inline OracleTrace greedy_ess_agglomerate(const DataMatrix& data, int max_n = 2000) {
  require_valid(data);
  if (data.n < 2)
    throw std::invalid_argument("greedy_ess_agglomerate: need n >= 2");
  if (data.n > max_n)
    throw std::invalid_argument("greedy_ess_agglomerate: n exceeds cap of " +
                                std::to_string(max_n));
  const int n = data.n;
  const int p = data.p;

  struct Cluster {
    int node_id;
    std::vector<int> members;
    std::vector<double> centroid;
    double mass;
    double inertia_about_centroid;
  };
  std::vector<Cluster> clusters;
  clusters.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<double> c(data.row(i).begin(), data.row(i).end());
    clusters.push_back({i, {i}, std::move(c), data.masses[i], 0.0});
  }

  auto pair_cost = [&](const Cluster& a, const Cluster& b) {
    return a.mass * b.mass / (a.mass + b.mass) *
           detail::sq_dist(a.centroid, b.centroid);
  };

  OracleTrace trace;
  trace.n = n;
  trace.steps.reserve(static_cast<std::size_t>(n) - 1);

  for (int t = 0; t < n - 1; ++t) {
    std::size_t best_x = 0, best_y = 1;
    double best = std::numeric_limits<double>::infinity();
    int best_lo = 0, best_hi = 0;
    for (std::size_t x = 0; x < clusters.size(); ++x) {
      for (std::size_t y = x + 1; y < clusters.size(); ++y) {
        const double cost = pair_cost(clusters[x], clusters[y]);
        const int lo = std::min(clusters[x].node_id, clusters[y].node_id);
        const int hi = std::max(clusters[x].node_id, clusters[y].node_id);
        if (cost < best || (cost == best && (lo < best_lo ||
                                             (lo == best_lo && hi < best_hi)))) {
          best = cost;
          best_x = x;
          best_y = y;
          best_lo = lo;
          best_hi = hi;
        }
      }
    }

    Cluster& a = clusters[best_x];
    Cluster& b = clusters[best_y];
    OracleStep step;
    step.left = a.node_id;
    step.right = b.node_id;
    step.criterion = pair_cost(a, b);
    step.size = a.mass + b.mass;

    // New center of gravity: c = (m1*c1 + m2*c2) / (m1 + m2).
    std::vector<double> merged_centroid(static_cast<std::size_t>(p));
    for (int d = 0; d < p; ++d)
      merged_centroid[d] =
          (a.mass * a.centroid[d] + b.mass * b.centroid[d]) / (a.mass + b.mass);

    std::vector<int> merged_members = a.members;
    merged_members.insert(merged_members.end(), b.members.begin(),
                          b.members.end());
    const double merged_inertia = inertia(data, merged_members);
    step.delta_ess =
        merged_inertia - a.inertia_about_centroid - b.inertia_about_centroid;
    step.centroid = merged_centroid;
    trace.steps.push_back(step);

    a.node_id = n + t;
    a.members = std::move(merged_members);
    a.centroid = std::move(merged_centroid);
    a.mass += b.mass;
    a.inertia_about_centroid = merged_inertia;
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_y));
  }
  return trace;
}

/// Agreement report between an oracle trace and an engine dendrogram.
struct OracleComparison {
  bool topology_match = false;
  double max_rel_height_dev = 0.0;  // engine heights vs 2*delta_ess (ward.D)
                                    // or sqrt(2*delta_ess) (ward.D2)
};

namespace detail {

inline double rel_dev(double x, double y) {
  const double diff = std::abs(x - y);
  if (diff == 0.0) return 0.0;
  return diff / std::max(std::abs(x), std::abs(y));
}

}  // namespace detail

/// Engine heights carry the conventional factor: ward.D heights are
/// 2*delta_ess, ward.D2 heights are sqrt(2*delta_ess).
inline OracleComparison compare_with_engine(const OracleTrace& trace,
                                            const Dendrogram& dend) {
  if (trace.n != dend.n)
    throw std::invalid_argument("compare_with_engine: leaf-count mismatch (" +
                                std::to_string(trace.n) + " vs " +
                                std::to_string(dend.n) + ")");
  if (dend.method != LinkageMethod::ward_d && dend.method != LinkageMethod::ward_d2)
    throw std::invalid_argument(
        "compare_with_engine: dendrogram must come from a Ward method");

  OracleComparison cmp;
  cmp.topology_match = true;
  for (int t = 0; t < dend.n - 1; ++t) {
    // Same tie rule on both sides makes step-by-step id comparison exact;
    // children are already canonically ordered.
    const MergeStep& s = dend.steps[t];
    const OracleStep& o = trace.steps[t];
    const auto [olo, ohi] = std::minmax(o.left, o.right);
    const auto [slo, shi] = std::minmax(s.left, s.right);
    if (olo != slo || ohi != shi) cmp.topology_match = false;

    double expected = dend.method == LinkageMethod::ward_d
                          ? 2.0 * o.delta_ess
                          : std::sqrt(2.0 * o.delta_ess);
    if (dend.height_scale == HeightScale::sqrt_transformed)
      expected = std::sqrt(expected);
    cmp.max_rel_height_dev =
        std::max(cmp.max_rel_height_dev, detail::rel_dev(s.height, expected));
  }
  return cmp;
}

}  // namespace wardclust
