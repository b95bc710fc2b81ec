#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "wardclust/core.hpp"
#include "wardclust/linkage.hpp"

/// Agglomerative drivers over a stored dissimilarity matrix.
///
/// `agglomerate_naive` rescans all surviving pairs for the global minimum at
/// every step (O(n^3) worst case) and serves as the correctness oracle.
/// `agglomerate_nnchain` follows nearest-neighbor chains to reciprocal
/// nearest neighbors (worst case O(n^2)); for reducible methods and unique
/// minima it produces the same dendrogram.
namespace wardclust {

// ---------------------------------------------------------------------------
// ActiveSet
// ---------------------------------------------------------------------------

/// Surviving clusters during an agglomeration. Each cluster occupies the
/// slot of its smallest member observation; the condensed store is indexed
/// by slot pairs. |alive| shrinks by one per merge.
class ActiveSet {
 public:
  ActiveSet(const DissimilarityMatrix& dissim, std::span<const double> masses)
      : n_(dissim.n), dissim_(dissim.entries) {
    if (!masses.empty() && masses.size() != static_cast<std::size_t>(n_))
      throw std::invalid_argument("ActiveSet: masses size does not match n");
    alive_.resize(static_cast<std::size_t>(n_));
    std::iota(alive_.begin(), alive_.end(), 0);
    node_id_ = alive_;
    size_.assign(static_cast<std::size_t>(n_), 1.0);
    if (!masses.empty()) {
      for (int i = 0; i < n_; ++i) {
        if (!(masses[i] > 0.0))
          throw std::invalid_argument("ActiveSet: non-positive mass at " +
                                      std::to_string(i));
        size_[i] = masses[i];
      }
    }
  }

  int n() const { return n_; }
  std::span<const int> alive() const { return alive_; }
  int node_of(int slot) const { return node_id_[slot]; }
  double mass_of(int slot) const { return size_[slot]; }
  double dissim_at(int slot_a, int slot_b) const {
    return dissim_[condensed_index(slot_a, slot_b, n_)];
  }

  double& dissim_ref(int slot_a, int slot_b) {
    return dissim_[condensed_index(slot_a, slot_b, n_)];
  }

  /// Merges the clusters in two slots into the smaller slot, which receives
  /// the new node id and combined mass; the other slot dies. Returns the
  /// surviving slot.
  int merge(int slot_a, int slot_b, int new_node_id) {
    const int keep = std::min(slot_a, slot_b);
    const int drop = std::max(slot_a, slot_b);
    node_id_[keep] = new_node_id;
    size_[keep] += size_[drop];
    alive_.erase(std::find(alive_.begin(), alive_.end(), drop));
    return keep;
  }

 private:
  int n_;
  std::vector<int> alive_;      // ascending slot ids
  std::vector<int> node_id_;    // slot -> current node id
  std::vector<double> size_;    // slot -> mass
  std::vector<double> dissim_;  // condensed over original slots
};

/// Observed after every merge of the naive driver, with the step index and
/// the current state (surviving clusters and their dissimilarities).
using StepObserver = std::function<void(int, const ActiveSet&)>;

struct AgglomerateOptions {
  bool allow_scale_mismatch = false;  // Experiment-3 style deliberate misuse
  StepObserver observer;              // naive driver only
};

namespace detail {

inline void check_agglomerate_input(const DissimilarityMatrix& dissim,
                                    LinkageMethod method,
                                    const AgglomerateOptions& opts) {
  if (dissim.n < 2)
    throw std::invalid_argument("agglomerate: need at least 2 observations");
  if (!opts.allow_scale_mismatch && dissim.scale != required_scale(method))
    throw std::invalid_argument(
        std::string("agglomerate: method ") + method_name(method) + " expects " +
        (required_scale(method) == Scale::squared ? "squared" : "plain") +
        "-scale dissimilarities; pass allow_scale_mismatch/--force-scale to "
        "override (the result is then NOT the method's criterion)");
}

/// Post-merge dissimilarity of (a+b) to k, on the active set's scale.
inline double merged_dissim(LinkageMethod method, double d_ak, double d_bk,
                            double d_ab, double w_a, double w_b, double w_k) {
  switch (method) {
    case LinkageMethod::ward_d:
      return ward_d_update(d_ak, d_bk, d_ab, w_a, w_b, w_k);
    case LinkageMethod::ward_d2:
      return ward_d2_update(d_ak, d_bk, d_ab, w_a, w_b, w_k);
    default:
      return lw_update(d_ak, d_bk, d_ab, lw_coefficients(method, w_a, w_b, w_k));
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Naive driver
// ---------------------------------------------------------------------------

/// Merges the globally closest pair at every step. Ties are broken toward
/// the lexicographically smallest (smaller node id, larger node id) pair.
inline Dendrogram agglomerate_naive(const DissimilarityMatrix& dissim,
                                    LinkageMethod method,
                                    std::span<const double> masses = {},
                                    const AgglomerateOptions& opts = {}) {
  detail::check_agglomerate_input(dissim, method, opts);
  const int n = dissim.n;
  ActiveSet active(dissim, masses);
  std::vector<MergeStep> steps;
  steps.reserve(static_cast<std::size_t>(n) - 1);

  for (int t = 0; t < n - 1; ++t) {
    const auto alive = active.alive();
    int best_a = -1, best_b = -1;
    double best_d = std::numeric_limits<double>::infinity();
    int best_lo = 0, best_hi = 0;
    for (std::size_t x = 0; x < alive.size(); ++x) {
      for (std::size_t y = x + 1; y < alive.size(); ++y) {
        const int sa = alive[x], sb = alive[y];
        const double d = active.dissim_at(sa, sb);
        const int lo = std::min(active.node_of(sa), active.node_of(sb));
        const int hi = std::max(active.node_of(sa), active.node_of(sb));
        if (d < best_d ||
            (d == best_d && (lo < best_lo || (lo == best_lo && hi < best_hi)))) {
          best_d = d;
          best_a = sa;
          best_b = sb;
          best_lo = lo;
          best_hi = hi;
        }
      }
    }

    const double w_a = active.mass_of(best_a);
    const double w_b = active.mass_of(best_b);
    const double d_ab = active.dissim_at(best_a, best_b);
    steps.push_back({active.node_of(best_a), active.node_of(best_b), best_d,
                     w_a + w_b});

    // Update survivors before retiring the dropped slot.
    for (int k : alive) {
      if (k == best_a || k == best_b) continue;
      const double d_new = detail::merged_dissim(
          method, active.dissim_at(best_a, k), active.dissim_at(best_b, k), d_ab,
          w_a, w_b, active.mass_of(k));
      active.dissim_ref(std::min(best_a, best_b), k) = d_new;
    }
    active.merge(best_a, best_b, n + t);
    if (opts.observer) opts.observer(t, active);
  }
  return Dendrogram::make(n, std::move(steps), method, HeightScale::raw);
}

// ---------------------------------------------------------------------------
// Nearest-neighbor-chain driver
// ---------------------------------------------------------------------------

inline Dendrogram agglomerate_nnchain(const DissimilarityMatrix& dissim,
                                      LinkageMethod method,
                                      std::span<const double> masses = {},
                                      const AgglomerateOptions& opts = {}) {
  if (!is_reducible(method))
    throw std::invalid_argument(std::string("agglomerate_nnchain: method ") +
                                method_name(method) +
                                " is not reducible; use agglomerate_naive");
  detail::check_agglomerate_input(dissim, method, opts);
  const int n = dissim.n;
  ActiveSet active(dissim, masses);

  struct ChainMerge {
    int rep_a, rep_b;  // slots = smallest member observation of each cluster
    double height;
    double size;
  };
  std::vector<ChainMerge> merges;
  merges.reserve(static_cast<std::size_t>(n) - 1);
  std::vector<int> chain;
  chain.reserve(static_cast<std::size_t>(n));

  // Restart point: the alive cluster with the lowest id (ids here follow
  // chain discovery order; the exported ids are assigned after sorting).
  auto lowest_id_slot = [&active]() {
    int best = active.alive().front();
    for (int s : active.alive())
      if (active.node_of(s) < active.node_of(best)) best = s;
    return best;
  };

  while (merges.size() < static_cast<std::size_t>(n) - 1) {
    if (chain.empty()) chain.push_back(lowest_id_slot());
    // Grow the chain until a reciprocal nearest-neighbor pair appears.
    for (;;) {
      const int c = chain.back();
      int nn = -1;
      double dmin = std::numeric_limits<double>::infinity();
      if (chain.size() >= 2) {  // prefer the predecessor on ties
        nn = chain[chain.size() - 2];
        dmin = active.dissim_at(c, nn);
      }
      for (int k : active.alive()) {
        if (k == c) continue;
        const double d = active.dissim_at(c, k);
        if (d < dmin) {
          dmin = d;
          nn = k;
        }
      }
      if (chain.size() >= 2 && nn == chain[chain.size() - 2]) {
        const double w_c = active.mass_of(c);
        const double w_nn = active.mass_of(nn);
        merges.push_back({c, nn, dmin, w_c + w_nn});
        for (int k : active.alive()) {
          if (k == c || k == nn) continue;
          active.dissim_ref(std::min(c, nn), k) = detail::merged_dissim(
              method, active.dissim_at(c, k), active.dissim_at(nn, k), dmin, w_c,
              w_nn, active.mass_of(k));
        }
        active.merge(c, nn, n + static_cast<int>(merges.size()) - 1);
        chain.pop_back();
        chain.pop_back();
        break;
      }
      chain.push_back(nn);
    }
  }

  // Reciprocal pairs are discovered out of height order; sorting restores
  // the agglomeration order (stable, so equal heights keep discovery order).
  std::stable_sort(merges.begin(), merges.end(),
                   [](const ChainMerge& a, const ChainMerge& b) {
                     return a.height < b.height;
                   });

  // Union-find relabeling: each cluster's root slot maps to its node id.
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::vector<int> id_of_root(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::iota(id_of_root.begin(), id_of_root.end(), 0);
  auto find = [&parent](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  std::vector<MergeStep> steps;
  steps.reserve(merges.size());
  for (std::size_t t = 0; t < merges.size(); ++t) {
    const int ra = find(merges[t].rep_a);
    const int rb = find(merges[t].rep_b);
    steps.push_back({id_of_root[ra], id_of_root[rb], merges[t].height,
                     merges[t].size});
    parent[std::max(ra, rb)] = std::min(ra, rb);
    id_of_root[std::min(ra, rb)] = n + static_cast<int>(t);
  }
  return Dendrogram::make(n, std::move(steps), method, HeightScale::raw);
}

// ---------------------------------------------------------------------------
// Inversions and height transforms
// ---------------------------------------------------------------------------

/// Step indices whose height falls below an internal child's height by more
/// than `tol`. Empty for reducible methods.
inline std::vector<int> detect_inversions(const Dendrogram& dend,
                                          double tol = 0.0) {
  std::vector<int> out;
  for (int t = 0; t < dend.n - 1; ++t) {
    const MergeStep& s = dend.steps[t];
    for (int child : {s.left, s.right}) {
      if (!dend.is_leaf(child) &&
          s.height < dend.step_of(child).height - tol) {
        out.push_back(t);
        break;
      }
    }
  }
  return out;
}

enum class HeightTransform { sqrt, square };

/// Copy of the dendrogram with heights mapped and the height-scale tag
/// toggled; topology untouched. sqrt applies to raw heights only, square
/// undoes a previous sqrt.
inline Dendrogram transform_heights(const Dendrogram& dend, HeightTransform op) {
  std::vector<MergeStep> steps = dend.steps;
  HeightScale new_scale;
  if (op == HeightTransform::sqrt) {
    if (dend.height_scale != HeightScale::raw)
      throw std::invalid_argument(
          "transform_heights: sqrt applies to raw-scale heights only");
    for (MergeStep& s : steps) {
      if (s.height < 0.0)
        throw std::domain_error("transform_heights: negative height " +
                                std::to_string(s.height) + " under sqrt");
      s.height = std::sqrt(s.height);
    }
    new_scale = HeightScale::sqrt_transformed;
  } else {
    if (dend.height_scale != HeightScale::sqrt_transformed)
      throw std::invalid_argument(
          "transform_heights: square undoes sqrt-transformed heights only");
    for (MergeStep& s : steps) s.height = s.height * s.height;
    new_scale = HeightScale::raw;
  }
  return Dendrogram::make(dend.n, std::move(steps), dend.method, new_scale);
}

/// Merge heights in step order.
inline std::vector<double> merge_heights(const Dendrogram& dend) {
  std::vector<double> h;
  h.reserve(dend.steps.size());
  for (const MergeStep& s : dend.steps) h.push_back(s.height);
  return h;
}

}  // namespace wardclust
