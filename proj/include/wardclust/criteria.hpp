#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "wardclust/core.hpp"

/// Cluster-quality quantities: error sum of squares, variance, inertia,
/// the total = between + within decomposition, the pairwise-distance form of
/// the sum of squares, and the Ward merge cost.
///
/// Centroids are always mass-weighted; with unit masses everything reduces
/// to the familiar cardinality-based formulas.
namespace wardclust {

namespace detail {

inline void require_members(const DataMatrix& data, std::span<const int> members,
                            const char* what) {
  if (members.empty())
    throw std::invalid_argument(std::string(what) + ": empty member set");
  for (int i : members)
    if (i < 0 || i >= data.n)
      throw std::invalid_argument(std::string(what) + ": observation id " +
                                  std::to_string(i) + " out of range");
}

/// Mass-weighted centroid of the given rows; also returns the total mass.
inline std::pair<std::vector<double>, double> centroid_of(
    const DataMatrix& data, std::span<const int> members) {
  std::vector<double> c(static_cast<std::size_t>(data.p), 0.0);
  double mass = 0.0;
  for (int i : members) {
    const double m = data.masses[i];
    mass += m;
    for (int a = 0; a < data.p; ++a) c[a] += m * data(i, a);
  }
  for (double& v : c) v /= mass;
  return {std::move(c), mass};
}

inline double sq_dist(std::span<const double> x, std::span<const double> y) {
  double ss = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    const double diff = x[a] - y[a];
    ss += diff * diff;
  }
  return ss;
}

}  // namespace detail

/// Sum over the members of the squared deviation from the (mass-weighted)
/// cluster centroid. The terms themselves are unweighted.
inline double error_sum_of_squares(const DataMatrix& data,
                                   std::span<const int> members) {
  detail::require_members(data, members, "error_sum_of_squares");
  auto [c, mass] = detail::centroid_of(data, members);
  double ess = 0.0;
  for (int i : members) ess += detail::sq_dist(data.row(i), c);
  return ess;
}

enum class VarianceKind { population, sample };

/// ESS/|q| (population) or ESS/(|q|-1) (sample). Both appear in the
/// literature; neither is privileged here.
inline double cluster_variance(const DataMatrix& data, std::span<const int> members,
                               VarianceKind kind) {
  detail::require_members(data, members, "cluster_variance");
  if (kind == VarianceKind::sample && members.size() < 2)
    throw std::invalid_argument("cluster_variance: sample variance of a singleton");
  const double ess = error_sum_of_squares(data, members);
  const double denom = kind == VarianceKind::population
                           ? static_cast<double>(members.size())
                           : static_cast<double>(members.size()) - 1.0;
  return ess / denom;
}

/// Mass-weighted squared deviations about the mass-weighted centroid.
/// Reduces to ESS for unit masses and to the population variance for
/// masses 1/|q|.
inline double inertia(const DataMatrix& data, std::span<const int> members) {
  detail::require_members(data, members, "inertia");
  auto [c, mass] = detail::centroid_of(data, members);
  double total = 0.0;
  for (int i : members)
    total += data.masses[i] * detail::sq_dist(data.row(i), c);
  return total;
}

/// total = between + within, to additive tolerance 1e-10 * max(1, |total|).
struct Decomposition {
  double total = 0.0;
  double between = 0.0;
  double within = 0.0;

  bool balanced(double tol = 1e-10) const {
    return std::abs(total - (between + within)) <=
           tol * std::max(1.0, std::abs(total));
  }
};

/// Splits the total (mass-weighted) sum of squares about the grand centroid
/// into the within-cluster part and the between part carried by the cluster
/// centers. total = between + within holds identically.
inline Decomposition huygens_decomposition(const DataMatrix& data,
                                           const Partition& partition) {
  require_valid(data);
  if (partition.assignment.size() != static_cast<std::size_t>(data.n))
    throw std::invalid_argument("huygens_decomposition: partition size mismatch");
  std::vector<int> all(static_cast<std::size_t>(data.n));
  for (int i = 0; i < data.n; ++i) all[i] = i;
  auto [grand, total_mass] = detail::centroid_of(data, all);

  Decomposition d;
  d.total = inertia(data, all);
  for (const auto& members : partition.members()) {
    d.within += inertia(data, members);
    auto [c, mass] = detail::centroid_of(data, members);
    d.between += mass * detail::sq_dist(c, grand);
  }
  return d;
}

/// The sum of squares written in terms of all pairwise squared distances:
/// (1/|q|) * sum_{i<i' in q} d^2(i,i'). Stated for unit masses; equals
/// error_sum_of_squares in that case.
inline double ess_via_pairwise(const DissimilarityMatrix& dissim,
                               std::span<const int> members) {
  if (dissim.scale != Scale::squared)
    throw std::invalid_argument(
        "ess_via_pairwise: requires a squared-scale dissimilarity matrix");
  if (members.empty())
    throw std::invalid_argument("ess_via_pairwise: empty member set");
  double sum = 0.0;
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b)
      sum += dissim.at(members[a], members[b]);
  return sum / static_cast<double>(members.size());
}

/// Ward merge cost: (m1*m2/(m1+m2)) * ||c1 - c2||^2 with mass-weighted
/// centroids. Equals the increase in the (mass-weighted) sum of squares
/// caused by merging the two clusters. Not a metric: it can violate the
/// triangle inequality.
inline double ward_minimand(const DataMatrix& data, std::span<const int> members1,
                            std::span<const int> members2) {
  detail::require_members(data, members1, "ward_minimand");
  detail::require_members(data, members2, "ward_minimand");
  for (int i : members1)
    for (int j : members2)
      if (i == j)
        throw std::invalid_argument(
            "ward_minimand: member sets overlap at observation " +
            std::to_string(i));
  auto [c1, m1] = detail::centroid_of(data, members1);
  auto [c2, m2] = detail::centroid_of(data, members2);
  return m1 * m2 / (m1 + m2) * detail::sq_dist(c1, c2);
}

}  // namespace wardclust
