// Minimal walk-through on three 1-d points (0, 1, 10): the same tree comes
// out of ward.D on squared distances and ward.D2 on plain distances, with
// heights related by a square root.

#include <cstdio>

#include "wardclust/wardclust.hpp"

int main() {
  using namespace wardclust;

  const DataMatrix points(3, 1, {0.0, 1.0, 10.0});

  const auto tree_ward_d = agglomerate_naive(pairwise_euclidean(points, Scale::squared),
                                       LinkageMethod::ward_d);
  const auto tree_ward_d2 = agglomerate_naive(pairwise_euclidean(points, Scale::plain),
                                       LinkageMethod::ward_d2);

  std::printf("ward.D on d^2 (heights on squared scale):\n%s\n",
              export_merge_table(tree_ward_d).c_str());
  std::printf("ward.D2 on d (heights on distance scale):\n%s\n",
              export_merge_table(tree_ward_d2).c_str());

  std::printf("same topology: %s\n", topology_equal(tree_ward_d, tree_ward_d2) ? "yes" : "no");
  std::printf("max height deviation after sqrt map: %.3g\n",
              compare_heights(tree_ward_d, tree_ward_d2, HeightMap::sqrt));

  const auto coph = cophenetic_matrix(tree_ward_d2);
  std::printf("cophenetic correlation with the input distances: %.5f\n",
              cophenetic_correlation(pairwise_euclidean(points), coph));
  std::printf("newick: %s\n", export_newick(tree_ward_d2, {"a", "b", "c"}).c_str());
  return 0;
}
