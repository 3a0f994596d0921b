#pragma once

#include <cstdint>
#include <vector>

#include "subsel/kernels.hpp"
#include "subsel/objectives.hpp"

namespace subsel {

/// Greedy iterates: order[t] was added at step t, taking the objective to
/// values[t] with marginal gain gains[t].
struct Selection {
  std::vector<Index> order;
  std::vector<double> values;
  std::vector<double> gains;
  std::size_t budget = 0;

  double value() const { return values.empty() ? 0.0 : values.back(); }
};

struct GreedyStats {
  std::uint64_t gain_evaluations = 0;
  /// Re-insertions into the lazy queue, one entry per greedy step.
  std::vector<std::uint64_t> resorts;
  double seconds = 0.0;

  std::uint64_t total_resorts() const;
};

struct GreedyOptions {
  /// Candidate gains inside one naive step are evaluated with this policy.
  Exec exec = Exec::parallel;
};

/// Entry of the lazy-greedy priority queue: a cached upper bound on the gain
/// of `index`, computed at step `stamp`.
struct LazyQueueEntry {
  double bound;
  Index index;
  std::size_t stamp;
};

/// Plain greedy: each step takes argmax_j f(j | X), ties to the smallest index.
Selection naive_greedy(const Objective& objective, std::size_t k, GreedyStats* stats = nullptr,
                       const GreedyOptions& opts = {});

/// Minoux's accelerated greedy. Produces exactly the naive_greedy selection
/// for submodular objectives and refuses the rest with NotSubmodular.
Selection lazy_greedy(const Objective& objective, std::size_t k, GreedyStats* stats = nullptr);

enum class DispersionSeed {
  /// Start from the farthest pair (lexicographically smallest on ties).
  farthest_pair,
  /// Start from item 0 alone; cheaper, and outside the 1/2 guarantee.
  first_item,
};

/// Max-min dispersion greedy: seed, then repeatedly add
/// argmax_j min_{i in X} d_ij (ties to the smallest index).
Selection dispersion_greedy(const DistanceMatrix& dist, std::size_t k,
                            DispersionSeed seed = DispersionSeed::farthest_pair,
                            const GreedyOptions& opts = {});

/// Exhaustive search over all k-subsets, ties to the lexicographically
/// smallest. Refuses instances with more than max_subsets candidates.
Selection brute_force(const Objective& objective, std::size_t k,
                      std::uint64_t max_subsets = 1'000'000);

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k);

}  // namespace subsel
