#include "subsel/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "parallel.hpp"

namespace subsel {
namespace {

using Clock = std::chrono::steady_clock;

void check_budget(std::size_t k, std::size_t lo, std::size_t n) {
  if (k < lo || k > n) {
    fail(ErrorCode::bad_budget, "budget " + std::to_string(k) + " outside " + std::to_string(lo) +
                                    ".." + std::to_string(n));
  }
}

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Priority order of the lazy queue: larger bound first, then smaller index.
bool precedes(double bound_a, Index a, double bound_b, Index b) {
  if (bound_a != bound_b) return bound_a > bound_b;
  return a < b;
}

struct QueueOrder {
  bool operator()(const LazyQueueEntry& a, const LazyQueueEntry& b) const {
    return precedes(b.bound, b.index, a.bound, a.index);
  }
};

}  // namespace

std::uint64_t GreedyStats::total_resorts() const {
  return std::accumulate(resorts.begin(), resorts.end(), std::uint64_t{0});
}

Selection naive_greedy(const Objective& objective, std::size_t k, GreedyStats* stats,
                       const GreedyOptions& opts) {
  const std::size_t n = objective.ground_size();
  check_budget(k, 1, n);
  const auto start = Clock::now();

  auto state = objective.make_state();
  Selection sel;
  sel.budget = k;
  std::vector<double> gains(n);
  std::uint64_t evaluations = 0;

  for (std::size_t t = 0; t < k; ++t) {
    detail::for_each_index(n, opts.exec, [&](Index j) {
      gains[j] = state->contains(j) ? -std::numeric_limits<double>::infinity() : state->gain(j);
    });
    evaluations += n - t;

    Index best = n;
    for (Index j = 0; j < n; ++j) {
      if (state->contains(j)) continue;
      if (best == n || gains[j] > gains[best]) best = j;
    }
    state->add(best);
    sel.order.push_back(best);
    sel.gains.push_back(gains[best]);
    sel.values.push_back(state->value());
  }

  if (stats) {
    stats->gain_evaluations = evaluations;
    stats->resorts.assign(k, 0);
    stats->seconds = elapsed(start);
  }
  return sel;
}

Selection lazy_greedy(const Objective& objective, std::size_t k, GreedyStats* stats) {
  if (!objective.submodular()) {
    fail(ErrorCode::not_submodular,
         "lazy greedy needs a submodular objective, got " + objective.name());
  }
  const std::size_t n = objective.ground_size();
  check_budget(k, 1, n);
  const auto start = Clock::now();

  auto state = objective.make_state();
  std::vector<LazyQueueEntry> initial(n);
  for (Index j = 0; j < n; ++j) initial[j] = {state->gain(j), j, 0};
  std::priority_queue<LazyQueueEntry, std::vector<LazyQueueEntry>, QueueOrder> queue(
      QueueOrder{}, std::move(initial));

  std::uint64_t evaluations = n;
  std::vector<std::uint64_t> resorts(k, 0);
  Selection sel;
  sel.budget = k;

  for (std::size_t t = 0; t < k; ++t) {
    for (;;) {
      LazyQueueEntry top = queue.top();
      queue.pop();
      if (top.stamp != t) {
        top.bound = state->gain(top.index);
        top.stamp = t;
        ++evaluations;
        // A refreshed gain that still outranks every other cached bound is
        // the exact argmax, since those bounds dominate the true gains.
        if (!queue.empty() &&
            !precedes(top.bound, top.index, queue.top().bound, queue.top().index)) {
          queue.push(top);
          ++resorts[t];
          continue;
        }
      }
      state->add(top.index);
      sel.order.push_back(top.index);
      sel.gains.push_back(top.bound);
      sel.values.push_back(state->value());
      break;
    }
  }

  if (stats) {
    stats->gain_evaluations = evaluations;
    stats->resorts = std::move(resorts);
    stats->seconds = elapsed(start);
  }
  return sel;
}

Selection dispersion_greedy(const DistanceMatrix& dist, std::size_t k, DispersionSeed seed,
                            const GreedyOptions& opts) {
  const std::size_t n = dist.n();
  check_budget(k, 2, n);

  Selection sel;
  sel.budget = k;
  std::vector<char> chosen(n, 0);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  double current = kDispersionSentinel;

  auto take = [&](Index j) {
    double after = std::min(current, nearest[j]);
    sel.order.push_back(j);
    sel.gains.push_back(dispersion_difference(current, after));
    sel.values.push_back(after);
    current = after;
    chosen[j] = 1;
    detail::for_each_index(n, opts.exec, [&](Index i) { nearest[i] = std::min(nearest[i], dist(i, j)); });
  };

  if (seed == DispersionSeed::farthest_pair) {
    // Per-row farthest partner above the diagonal, then the best row.
    std::vector<Index> partner(n, n);
    detail::for_each_index(n, opts.exec, [&](Index i) {
      auto di = dist.row(i);
      for (Index j = i + 1; j < n; ++j) {
        if (partner[i] == n || di[j] > di[partner[i]]) partner[i] = j;
      }
    });
    Index a = 0;
    for (Index i = 1; i + 1 < n; ++i) {
      if (dist(i, partner[i]) > dist(a, partner[a])) a = i;
    }
    take(a);
    take(partner[a]);
  } else {
    take(0);
  }

  while (sel.order.size() < k) {
    Index best = n;
    for (Index j = 0; j < n; ++j) {
      if (chosen[j]) continue;
      if (best == n || nearest[j] > nearest[best]) best = j;
    }
    take(best);
  }
  return sel;
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t acc = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    // acc * m / i is exact because acc * m is C(n-k+i, i) * i.
    const std::uint64_t m = n - k + i;
    if (acc > kMax / m) return kMax;
    acc = acc * m / i;
  }
  return acc;
}

Selection brute_force(const Objective& objective, std::size_t k, std::uint64_t max_subsets) {
  const std::size_t n = objective.ground_size();
  check_budget(k, 0, n);
  const auto count = binomial(n, k);
  if (count > max_subsets) {
    fail(ErrorCode::too_large, "C(" + std::to_string(n) + "," + std::to_string(k) + ") = " +
                                   std::to_string(count) + " subsets exceeds the limit of " +
                                   std::to_string(max_subsets));
  }

  Selection sel;
  sel.budget = k;
  if (k == 0) return sel;

  std::vector<Index> current(k);
  std::iota(current.begin(), current.end(), Index{0});
  std::vector<Index> best = current;
  double best_value = objective.evaluate(current);

  for (;;) {
    // Next combination in lexicographic order.
    std::size_t pos = k;
    while (pos > 0 && current[pos - 1] == n - k + pos - 1) --pos;
    if (pos == 0) break;
    ++current[pos - 1];
    for (std::size_t q = pos; q < k; ++q) current[q] = current[q - 1] + 1;

    double v = objective.evaluate(current);
    if (v > best_value) {
      best_value = v;
      best = current;
    }
  }

  std::vector<Index> prefix;
  for (Index j : best) {
    sel.gains.push_back(objective.naive_gain(prefix, j));
    prefix.push_back(j);
    sel.order.push_back(j);
    sel.values.push_back(objective.evaluate(prefix));
  }
  return sel;
}

}  // namespace subsel
