#include "subsel/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"

namespace subsel {
namespace {

void check_dense_budget(std::size_t n, const KernelOptions& opts) {
  const double bytes = static_cast<double>(n) * static_cast<double>(n) * sizeof(double);
  if (bytes > static_cast<double>(opts.max_dense_bytes)) {
    fail(ErrorCode::dense_too_large,
         "dense " + std::to_string(n) + "x" + std::to_string(n) + " kernel needs " +
             std::to_string(static_cast<unsigned long long>(bytes)) + " bytes, budget is " +
             std::to_string(opts.max_dense_bytes));
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

}  // namespace

bool is_valid_similarity(const SimilarityMatrix& s) {
  for (Index i = 0; i < s.n(); ++i) {
    if (s(i, i) != 1.0) return false;
    for (Index j = 0; j < s.n(); ++j) {
      double v = s(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0 || v != s(j, i)) return false;
    }
  }
  return true;
}

bool is_valid_distance(const DistanceMatrix& d) {
  for (Index i = 0; i < d.n(); ++i) {
    if (d(i, i) != 0.0) return false;
    for (Index j = 0; j < d.n(); ++j) {
      double v = d(i, j);
      if (!std::isfinite(v) || v < 0.0 || v != d(j, i)) return false;
    }
  }
  return true;
}

SparseSimilarityGraph::SparseSimilarityGraph(std::size_t n, std::size_t g,
                                             std::vector<Neighbor> neighbors)
    : n_(n), g_(g), neighbors_(std::move(neighbors)) {
  if (neighbors_.size() != n_ * g_) {
    fail(ErrorCode::invalid_dataset, "neighbor table size mismatch");
  }
}

SimilarityMatrix cosine_similarity(const FeatureDataset& dataset, const KernelOptions& opts) {
  const std::size_t n = dataset.n();
  check_dense_budget(n, opts);

  std::vector<double> norms(n);
  for (Index i = 0; i < n; ++i) {
    norms[i] = std::sqrt(dot(dataset.row(i), dataset.row(i)));
    if (norms[i] == 0.0) {
      fail(ErrorCode::zero_norm_row,
           "row " + std::to_string(i) + " (id \"" + dataset.ids()[i] + "\") has zero norm");
    }
  }

  std::vector<double> s(n * n);
  detail::for_each_index(n, opts.exec, [&](Index i) {
    auto xi = dataset.row(i);
    for (Index j = 0; j < n; ++j) {
      if (i == j) {
        s[i * n + j] = 1.0;
        continue;
      }
      double cosine = dot(xi, dataset.row(j)) / (norms[i] * norms[j]);
      s[i * n + j] = std::clamp(0.5 * (1.0 + cosine), 0.0, 1.0);
    }
  });
  return SimilarityMatrix(n, std::move(s));
}

DistanceMatrix euclidean_distance(const FeatureDataset& dataset, const KernelOptions& opts) {
  const std::size_t n = dataset.n();
  check_dense_budget(n, opts);

  std::vector<double> d(n * n);
  detail::for_each_index(n, opts.exec, [&](Index i) {
    auto xi = dataset.row(i);
    for (Index j = 0; j < n; ++j) {
      auto xj = dataset.row(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < xi.size(); ++k) {
        double diff = xi[k] - xj[k];
        acc += diff * diff;
      }
      d[i * n + j] = std::sqrt(acc);
    }
  });
  return DistanceMatrix(n, std::move(d));
}

SimilarityMatrix rbf_similarity(const DistanceMatrix& dist, double gamma,
                                const KernelOptions& opts) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    fail(ErrorCode::non_positive_gamma, "gamma must be positive, got " + std::to_string(gamma));
  }
  const std::size_t n = dist.n();
  check_dense_budget(n, opts);

  std::vector<double> s(n * n);
  detail::for_each_index(n, opts.exec, [&](Index i) {
    for (Index j = 0; j < n; ++j) {
      double dij = dist(i, j);
      s[i * n + j] = i == j ? 1.0 : std::exp(-gamma * dij * dij);
    }
  });
  return SimilarityMatrix(n, std::move(s));
}

SparseSimilarityGraph knn_sparsify(const SimilarityMatrix& sim, std::size_t g,
                                   const KernelOptions& opts) {
  const std::size_t n = sim.n();
  if (g < 1 || g + 1 > n) {
    fail(ErrorCode::bad_neighbor_count, "neighbor count " + std::to_string(g) +
                                            " outside 1.." + std::to_string(n == 0 ? 0 : n - 1));
  }

  std::vector<Neighbor> table(n * g);
  detail::for_each_index(n, opts.exec, [&](Index i) {
    std::vector<Neighbor> candidates;
    candidates.reserve(n - 1);
    auto si = sim.row(i);
    for (Index j = 0; j < n; ++j) {
      if (j != i) candidates.push_back({j, si[j]});
    }
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(g),
                      candidates.end(), [](const Neighbor& a, const Neighbor& b) {
                        if (a.similarity != b.similarity) return a.similarity > b.similarity;
                        return a.index < b.index;
                      });
    std::copy_n(candidates.begin(), g, table.begin() + static_cast<std::ptrdiff_t>(i * g));
  });
  return SparseSimilarityGraph(n, g, std::move(table));
}

}  // namespace subsel
