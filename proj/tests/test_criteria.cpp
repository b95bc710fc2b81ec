#include <cmath>
#include <random>

#include "catch_amalgamated.hpp"
#include "helpers.hpp"
#include "wardclust/criteria.hpp"

using namespace wardclust;
using Catch::Approx;

namespace {
const DataMatrix kPoints(3, 1, {0.0, 1.0, 10.0});
const std::vector<int> kAll{0, 1, 2};
}  // namespace

TEST_CASE("error_sum_of_squares") {
  CHECK(error_sum_of_squares(kPoints, kAll) == Approx(182.0 / 3).epsilon(1e-12));
  CHECK(error_sum_of_squares(kPoints, std::vector<int>{2}) == 0.0);
  CHECK(error_sum_of_squares(kPoints, std::vector<int>{0, 1}) == Approx(0.5));
  CHECK_THROWS_AS(error_sum_of_squares(kPoints, std::vector<int>{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(error_sum_of_squares(kPoints, std::vector<int>{3}),
                  std::invalid_argument);
}

TEST_CASE("cluster_variance population and sample") {
  const std::vector<int> pair{0, 1};
  CHECK(cluster_variance(kPoints, pair, VarianceKind::population) == Approx(0.25));
  // half the squared distance of a pair is its sample variance
  CHECK(cluster_variance(kPoints, pair, VarianceKind::sample) == Approx(0.5));
  CHECK(cluster_variance(kPoints, std::vector<int>{1}, VarianceKind::population) ==
        0.0);
  CHECK_THROWS_AS(
      cluster_variance(kPoints, std::vector<int>{1}, VarianceKind::sample),
      std::invalid_argument);
}

TEST_CASE("inertia generalizes ESS and variance") {
  CHECK(inertia(kPoints, kAll) == Approx(182.0 / 3).epsilon(1e-12));
  DataMatrix weighted(3, 1, {0.0, 1.0, 10.0}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(inertia(weighted, kAll) == Approx(182.0 / 9).epsilon(1e-12));
  CHECK(inertia(kPoints, std::vector<int>{0}) == 0.0);
}

TEST_CASE("huygens_decomposition on the worked example") {
  auto d = huygens_decomposition(kPoints, Partition({0, 0, 1}, 2));
  CHECK(d.total == Approx(182.0 / 3).epsilon(1e-12));
  CHECK(d.between == Approx(361.0 / 6).epsilon(1e-12));
  CHECK(d.within == Approx(0.5).epsilon(1e-12));
  CHECK(d.total == Approx(d.between + d.within).epsilon(1e-12));

  SECTION("all singletons: W = 0, B = T") {
    auto s = huygens_decomposition(kPoints, Partition({0, 1, 2}, 3));
    CHECK(s.within == 0.0);
    CHECK(s.between == Approx(s.total).epsilon(1e-12));
  }
  SECTION("one cluster: B = 0, W = T") {
    auto o = huygens_decomposition(kPoints, Partition({0, 0, 0}, 1));
    CHECK(o.between == 0.0);
    CHECK(o.within == Approx(o.total).epsilon(1e-12));
  }
}

TEST_CASE("huygens T = B + W over random data, partitions and masses") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 40);
    const int p = 1 + static_cast<int>(rng() % 5);
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    const bool weighted = trial % 2 == 1;
    auto data = testutil::random_data(n, p, rng, weighted);
    auto part = testutil::random_partition(n, k, rng);
    auto d = huygens_decomposition(data, part);
    REQUIRE(d.balanced());
    REQUIRE(std::abs(d.total - (d.between + d.within)) <=
            1e-10 * std::max(1.0, std::abs(d.total)));
  }
}

TEST_CASE("ess_via_pairwise") {
  auto sq = pairwise_euclidean(kPoints, Scale::squared);
  CHECK(ess_via_pairwise(sq, kAll) == Approx(182.0 / 3).epsilon(1e-12));
  CHECK(ess_via_pairwise(sq, std::vector<int>{1}) == 0.0);
  CHECK(ess_via_pairwise(sq, std::vector<int>{0, 1}) == Approx(0.5));
  auto plain = pairwise_euclidean(kPoints, Scale::plain);
  CHECK_THROWS_AS(ess_via_pairwise(plain, kAll), std::invalid_argument);
}

TEST_CASE("pairwise identity equals coordinate ESS on random clusters") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 30);
    const int p = 1 + static_cast<int>(rng() % 4);
    auto data = testutil::random_data(n, p, rng);
    auto sq = pairwise_euclidean(data, Scale::squared);
    // random non-empty subset
    std::vector<int> members;
    for (int i = 0; i < n; ++i)
      if (rng() % 2) members.push_back(i);
    if (members.empty()) members.push_back(0);
    const double via_pairs = ess_via_pairwise(sq, members);
    const double via_coords = error_sum_of_squares(data, members);
    REQUIRE(std::abs(via_pairs - via_coords) <=
            1e-10 * std::max(1.0, std::abs(via_coords)));
  }
}

TEST_CASE("ward_minimand") {
  CHECK(ward_minimand(kPoints, std::vector<int>{0}, std::vector<int>{1}) ==
        Approx(0.5));
  CHECK(ward_minimand(kPoints, std::vector<int>{0, 1}, std::vector<int>{2}) ==
        Approx(361.0 / 6).epsilon(1e-12));
  DataMatrix mirrored(4, 1, {-1.0, 1.0, -1.0, 1.0});
  CHECK(ward_minimand(mirrored, std::vector<int>{0, 1}, std::vector<int>{2, 3}) ==
        0.0);  // identical centroids
  CHECK_THROWS_AS(ward_minimand(kPoints, std::vector<int>{0, 1},
                                std::vector<int>{1, 2}),
                  std::invalid_argument);
}

TEST_CASE("ward_minimand equals the ESS increase of the merge") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 20);
    const int p = 1 + static_cast<int>(rng() % 4);
    auto data = testutil::random_data(n, p, rng);
    std::vector<int> a, b;
    for (int i = 0; i < n; ++i) (rng() % 2 ? a : b).push_back(i);
    if (a.empty()) a.push_back(b.back()), b.pop_back();
    if (b.empty()) b.push_back(a.back()), a.pop_back();
    std::vector<int> both = a;
    both.insert(both.end(), b.begin(), b.end());
    const double delta = error_sum_of_squares(data, both) -
                         error_sum_of_squares(data, a) -
                         error_sum_of_squares(data, b);
    const double cost = ward_minimand(data, a, b);
    REQUIRE(std::abs(cost - delta) <= 1e-10 * std::max(1.0, std::abs(cost)));
  }
}

TEST_CASE("ward_minimand is not a metric") {
  SECTION("equally spaced collinear centers, sizes 3, 2, 1") {
    // centroids at 0, 1 and 2 with cluster sizes 3, 2, 1
    DataMatrix data(6, 1, {-0.5, 0.0, 0.5, 0.8, 1.2, 2.0});
    const std::vector<int> c1{0, 1, 2}, c2{3, 4}, c3{5};
    const double d12 = ward_minimand(data, c1, c2);
    const double d13 = ward_minimand(data, c1, c3);
    const double d23 = ward_minimand(data, c2, c3);
    CHECK(d12 == Approx(1.2));
    CHECK(d13 == Approx(3.0));
    CHECK(d23 == Approx(2.0 / 3));
    CHECK(d13 > d12 + d23);  // triangle inequality fails
  }
  SECTION("mutually equidistant centers, sizes 4, 4, 1") {
    // co-located members at the vertices of a unit equilateral triangle
    std::vector<double> values;
    auto put = [&](double x, double y, int copies) {
      for (int c = 0; c < copies; ++c) {
        values.push_back(x);
        values.push_back(y);
      }
    };
    put(0.0, 0.0, 4);
    put(1.0, 0.0, 4);
    put(0.5, std::sqrt(3.0) / 2, 1);
    DataMatrix data(9, 2, std::move(values));
    std::vector<int> a{0, 1, 2, 3}, b{4, 5, 6, 7}, c{8};
    const double dab = ward_minimand(data, a, b);
    const double dac = ward_minimand(data, a, c);
    const double dbc = ward_minimand(data, b, c);
    CHECK(dab == Approx(2.0));
    CHECK(dac == Approx(0.8));
    CHECK(dbc == Approx(0.8));
    CHECK(dab > dac + dbc);
  }
}
