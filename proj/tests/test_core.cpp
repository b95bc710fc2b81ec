#include <cmath>
#include <set>

#include "catch_amalgamated.hpp"
#include "wardclust/core.hpp"

using namespace wardclust;

TEST_CASE("condensed_index examples") {
  CHECK(condensed_index(0, 1, 3) == 0);
  CHECK(condensed_index(1, 2, 3) == 2);
  CHECK(condensed_index(2, 1, 3) == 2);  // symmetric
  CHECK_THROWS_AS(condensed_index(1, 1, 3), std::invalid_argument);
  CHECK_THROWS_AS(condensed_index(0, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(condensed_index(-1, 0, 3), std::invalid_argument);
}

TEST_CASE("condensed_index is a bijection onto 0..n(n-1)/2-1") {
  for (int n = 2; n <= 50; ++n) {
    std::set<std::size_t> seen;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const std::size_t k = condensed_index(i, j, n);
        REQUIRE(k < condensed_size(n));
        REQUIRE(seen.insert(k).second);
      }
    REQUIRE(seen.size() == condensed_size(n));
  }
}

TEST_CASE("validate reports every violation with positions") {
  DataMatrix good(3, 2, {0, 0, 1, 1, 10, 10});
  CHECK(validate(good).ok());

  DataMatrix with_nan(2, 2, {0, 0, 1, std::nan("")});
  auto r = validate(with_nan);
  REQUIRE(r.issues.size() == 1);
  CHECK(r.issues[0] == "non-finite value at row 1, column 1");

  DataMatrix bad_mass(3, 1, {0, 1, 2}, {1, 1, 0});
  auto r2 = validate(bad_mass);
  REQUIRE(r2.issues.size() == 1);
  CHECK(r2.issues[0] == "non-positive mass at row 2");

  DataMatrix empty;
  CHECK_FALSE(validate(empty).ok());
  CHECK_THROWS_AS(require_valid(with_nan), std::invalid_argument);
}

TEST_CASE("DataMatrix construction checks shapes") {
  CHECK_THROWS_AS(DataMatrix(2, 2, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(DataMatrix(2, 1, {1.0, 2.0}, {1.0}), std::invalid_argument);
  DataMatrix d(2, 1, {1.0, 2.0});
  CHECK(d.masses == std::vector<double>{1.0, 1.0});
}

TEST_CASE("DissimilarityMatrix stores one triangle") {
  DissimilarityMatrix d(3, {1.0, 10.0, 9.0}, Scale::plain);
  CHECK(d.at(0, 1) == 1.0);
  CHECK(d.at(1, 0) == 1.0);
  CHECK(d.at(0, 0) == 0.0);
  CHECK(d.at(1, 2) == 9.0);
  CHECK_THROWS_AS(DissimilarityMatrix(3, {1.0, -2.0, 3.0}, Scale::plain),
                  std::invalid_argument);
  CHECK_THROWS_AS(DissimilarityMatrix(3, {1.0, 2.0}, Scale::plain),
                  std::invalid_argument);
  CHECK(d.squared().at(0, 2) == 100.0);
  CHECK(d.squared().scale == Scale::squared);
}

TEST_CASE("pairwise_euclidean on the 1-d example points") {
  DataMatrix data(3, 1, {0, 1, 10});
  auto plain = pairwise_euclidean(data, Scale::plain);
  CHECK(plain.at(0, 1) == 1.0);
  CHECK(plain.at(0, 2) == 10.0);
  CHECK(plain.at(1, 2) == 9.0);
  auto sq = pairwise_euclidean(data, Scale::squared);
  CHECK(sq.at(0, 2) == 100.0);
  CHECK(sq.scale == Scale::squared);
}

TEST_CASE("method table") {
  CHECK(parse_method("ward.D") == LinkageMethod::ward_d);
  CHECK(parse_method("ward.D2") == LinkageMethod::ward_d2);
  CHECK(parse_method("banana") == std::nullopt);
  CHECK(required_scale(LinkageMethod::ward_d) == Scale::squared);
  CHECK(required_scale(LinkageMethod::ward_d2) == Scale::plain);
  CHECK(required_scale(LinkageMethod::centroid) == Scale::squared);
  CHECK(is_reducible(LinkageMethod::ward_d));
  CHECK(is_reducible(LinkageMethod::ward_d2));
  CHECK_FALSE(is_reducible(LinkageMethod::centroid));
  CHECK_FALSE(is_reducible(LinkageMethod::median));
}

TEST_CASE("Dendrogram::make validates structure and canonicalizes children") {
  // merge leaves 1,2 then that cluster with leaf 0
  std::vector<MergeStep> steps{{1, 2, 1.0, 2.0}, {3, 0, 2.0, 3.0}};
  auto d = Dendrogram::make(3, steps, LinkageMethod::single);
  CHECK(d.steps[0].left == 1);
  // child order: subtree containing the smallest leaf comes first
  CHECK(d.steps[1].left == 0);
  CHECK(d.steps[1].right == 3);
  CHECK(d.order == std::vector<int>{0, 1, 2});
  CHECK(d.root() == 4);
  CHECK(d.height_of(3) == 1.0);
  CHECK(d.height_of(0) == 0.0);

  SECTION("child used twice") {
    std::vector<MergeStep> bad{{0, 1, 1.0, 2.0}, {0, 2, 2.0, 3.0}};
    CHECK_THROWS_AS(Dendrogram::make(3, bad, LinkageMethod::single),
                    std::invalid_argument);
  }
  SECTION("forward reference") {
    std::vector<MergeStep> bad{{0, 4, 1.0, 2.0}, {3, 2, 2.0, 3.0}};
    CHECK_THROWS_AS(Dendrogram::make(3, bad, LinkageMethod::single),
                    std::invalid_argument);
  }
  SECTION("wrong step count") {
    std::vector<MergeStep> bad{{0, 1, 1.0, 2.0}};
    CHECK_THROWS_AS(Dendrogram::make(3, bad, LinkageMethod::single),
                    std::invalid_argument);
  }
}

TEST_CASE("Partition validation") {
  CHECK_NOTHROW(Partition({0, 1, 0}, 2));
  CHECK_THROWS_AS(Partition({0, 0, 0}, 2), std::invalid_argument);  // empty cluster
  CHECK_THROWS_AS(Partition({0, 2, 1}, 2), std::invalid_argument);  // out of range
  auto members = Partition({0, 1, 0}, 2).members();
  CHECK(members[0] == std::vector<int>{0, 2});
  CHECK(members[1] == std::vector<int>{1});
}
