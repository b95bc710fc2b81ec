#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wardclust/analysis.hpp"
#include "wardclust/core.hpp"
#include "wardclust/engine.hpp"
#include "wardclust/oracle.hpp"

/// The executable form of the ward.D / ward.D2 equivalence story: generate
/// local random data, run both variants and both drivers, and verify every
/// identity that distinguishes a Ward run from a non-Ward one. Also carries
/// frozen reference height lists recorded from R (hclust, agnes, and the
/// ward.D/ward.D2 variants of hclust) on one fixed 20x4 uniform dataset;
/// those lists are checked against each other, never regenerated.
namespace wardclust {

// ---------------------------------------------------------------------------
// Seedable uniform data
// ---------------------------------------------------------------------------

/// Uniform double in [0,1) from the top 53 bits; fully specified, so the
/// same seed gives the same data on every platform.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline DataMatrix uniform_data(int n, int p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> values(static_cast<std::size_t>(n) * p);
  for (double& v : values) v = uniform01(rng);
  return DataMatrix(n, p, std::move(values));
}

// ---------------------------------------------------------------------------
// Reference fixtures
// ---------------------------------------------------------------------------

/// Sorted dendrogram heights for one fixed 20x4 uniform(0,1) dataset,
/// recorded from R. The dataset itself is not reproducible here (it came
/// from R's RNG), so these serve as internal-consistency fixtures only:
/// squaring the distance-scale list must give the squared-scale list, and
/// the plain-input ward.D list must differ from both.
///
/// ward.D2 on d (identical to agnes method="ward"):
inline constexpr std::array<double, 19> kRefHeightsWardD2{
    0.1573864, 0.2422061, 0.2664122, 0.2901741, 0.3030634,
    0.3083869, 0.3589344, 0.3830281, 0.3832023, 0.5753823,
    0.6840459, 0.7258152, 0.7469914, 0.7647439, 0.8042245,
    0.8751259, 1.2043397, 1.5665054, 1.8584163};

/// ward.D on d^2 (identical to classic hclust method="ward" on d^2):
inline constexpr std::array<double, 19> kRefHeightsWardDSquaredInput{
    0.02477046, 0.05866380, 0.07097546, 0.08420102, 0.09184743,
    0.09510249, 0.12883390, 0.14671052, 0.14684403, 0.33106478,
    0.46791879, 0.52680768, 0.55799612, 0.58483318, 0.64677705,
    0.76584542, 1.45043423, 2.45393902, 3.45371103};

/// ward.D on plain d: a well-defined hierarchy, but not Ward's criterion.
inline constexpr std::array<double, 19> kRefHeightsWardDPlainInput{
    0.1573864, 0.2422061, 0.2664122, 0.2901741, 0.3030634,
    0.3083869, 0.3589344, 0.3832023, 0.4018957, 0.5988721,
    0.7443850, 0.7915592, 0.7985444, 0.8016877, 0.8414950,
    0.9273739, 1.4676446, 2.2073106, 2.5687307};

// ---------------------------------------------------------------------------
// Verification suite
// ---------------------------------------------------------------------------

struct ExperimentCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentReport {
  std::vector<ExperimentCheck> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

namespace detail {

inline double max_abs_diff(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace detail

/// Runs the full identity suite on seeded uniform data. Exercised here:
///  - ward.D2 gives identical results through the naive and nn-chain drivers;
///  - ward.D on squared input reproduces the squares of ward.D2 heights;
///  - ward.D on plain input yields a different (non-Ward) hierarchy;
///  - sqrt-transforming the ward.D tree reproduces the ward.D2 tree exactly;
///  - the coordinate oracle agrees with the recurrence engine;
///  - the frozen R reference lists are mutually consistent.
inline ExperimentReport run_experiments(int n, int p, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("run_experiments: need n >= 3");
  if (p < 1) throw std::invalid_argument("run_experiments: need p >= 1");
  ExperimentReport report;
  auto add = [&](std::string name, bool ok, std::string detail = "") {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  const DataMatrix data = uniform_data(n, p, seed);
  const DissimilarityMatrix d_plain = pairwise_euclidean(data, Scale::plain);
  const DissimilarityMatrix d_squared = pairwise_euclidean(data, Scale::squared);

  const Dendrogram d2_naive = agglomerate_naive(d_plain, LinkageMethod::ward_d2);
  const Dendrogram d2_chain = agglomerate_nnchain(d_plain, LinkageMethod::ward_d2);
  const Dendrogram d1 = agglomerate_naive(d_squared, LinkageMethod::ward_d);
  AgglomerateOptions force;
  force.allow_scale_mismatch = true;
  const Dendrogram plain_misuse =
      agglomerate_naive(d_plain, LinkageMethod::ward_d, {}, force);

  {
    const bool topo = topology_equal(d2_naive, d2_chain);
    const double dev =
        topo ? compare_heights(d2_naive, d2_chain, HeightMap::identity)
             : 1.0;
    add("ward.D2: naive and nn-chain drivers agree", topo && dev < 1e-9,
        "max rel height dev " + std::to_string(dev));
  }
  {
    const bool topo = topology_equal(d1, d2_naive);
    const double dev =
        topo ? compare_heights(d2_naive, d1, HeightMap::square) : 1.0;
    add("ward.D on d^2: heights are the squares of ward.D2 heights",
        topo && dev < 1e-9, "max rel height dev " + std::to_string(dev));
  }
  {
    auto plain_heights = merge_heights(plain_misuse);
    auto ward_heights = merge_heights(d2_naive);
    const double diff = detail::max_abs_diff(plain_heights, ward_heights);
    add("ward.D on plain d: sorted heights differ from the Ward hierarchy",
        diff > 1e-9, "max abs diff of sorted lists " + std::to_string(diff));
  }
  {
    const Dendrogram d1_sqrt = transform_heights(d1, HeightTransform::sqrt);
    const bool topo = topology_equal(d1_sqrt, d2_naive);
    const double dev =
        topo ? compare_heights(d1_sqrt, d2_naive, HeightMap::identity)
             : 1.0;
    add("sqrt-transformed ward.D tree equals the ward.D2 tree",
        topo && dev < 1e-9, "max rel height dev " + std::to_string(dev));
  }
  {
    const OracleTrace trace = greedy_ess_agglomerate(data);
    const OracleComparison cw = compare_with_engine(trace, d1);
    add("coordinate oracle: topology and 2*delta-ESS heights match ward.D",
        cw.topology_match && cw.max_rel_height_dev < 1e-9,
        "max rel height dev " + std::to_string(cw.max_rel_height_dev));
  }
  {
    double worst = 0.0;
    for (std::size_t i = 0; i < kRefHeightsWardD2.size(); ++i)
      worst = std::max(worst,
                       std::abs(kRefHeightsWardD2[i] * kRefHeightsWardD2[i] -
                                kRefHeightsWardDSquaredInput[i]));
    add("reference lists: squared distance-scale heights match squared-scale "
        "list (1e-6)",
        worst < 1e-6, "max abs diff " + std::to_string(worst));
  }
  {
    double worst = 0.0;
    for (std::size_t i = 0; i < kRefHeightsWardD2.size(); ++i)
      worst = std::max(worst, std::abs(kRefHeightsWardDPlainInput[i] -
                                       kRefHeightsWardD2[i]));
    const bool has_non_ward_value =
        std::find(kRefHeightsWardDPlainInput.begin(),
                  kRefHeightsWardDPlainInput.end(),
                  0.4018957) != kRefHeightsWardDPlainInput.end() &&
        std::find(kRefHeightsWardD2.begin(), kRefHeightsWardD2.end(),
                  0.4018957) == kRefHeightsWardD2.end();
    add("reference lists: plain-input ward.D list differs from the Ward list",
        worst > 1e-3 && has_non_ward_value,
        "max abs diff " + std::to_string(worst));
  }
  return report;
}

}  // namespace wardclust
