#pragma once

#include <random>
#include <vector>

#include "wardclust/core.hpp"

namespace testutil {

inline double unif(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline wardclust::DataMatrix random_data(int n, int p, std::mt19937_64& rng,
                                         bool random_masses = false) {
  std::vector<double> values(static_cast<std::size_t>(n) * p);
  for (double& v : values) v = unif(rng);
  std::vector<double> masses;
  if (random_masses) {
    masses.resize(static_cast<std::size_t>(n));
    for (double& m : masses) m = 0.25 + unif(rng);
  }
  return wardclust::DataMatrix(n, p, std::move(values), std::move(masses));
}

inline std::vector<int> all_members(int n) {
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = i;
  return out;
}

/// k non-empty random clusters over n observations.
inline wardclust::Partition random_partition(int n, int k, std::mt19937_64& rng) {
  std::vector<int> assignment(static_cast<std::size_t>(n));
  for (int i = 0; i < k; ++i) assignment[i] = i;  // each cluster non-empty
  for (int i = k; i < n; ++i)
    assignment[i] = static_cast<int>(rng() % static_cast<std::uint64_t>(k));
  std::shuffle(assignment.begin(), assignment.end(), rng);
  return wardclust::Partition(std::move(assignment), k);
}

}  // namespace testutil
