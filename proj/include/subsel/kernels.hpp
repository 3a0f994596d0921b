#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "subsel/common.hpp"
#include "subsel/dataset.hpp"

namespace subsel {

/// Dense symmetric n x n matrix, row-major. The tag keeps similarities and
/// distances from being passed for one another.
template <class Tag>
class DenseKernel {
 public:
  DenseKernel() = default;
  DenseKernel(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {
    if (values_.size() != n_ * n_) {
      fail(ErrorCode::invalid_dataset, "kernel of order " + std::to_string(n_) + " needs " +
                                           std::to_string(n_ * n_) + " entries");
    }
  }

  std::size_t n() const { return n_; }
  double operator()(Index i, Index j) const { return values_[i * n_ + j]; }
  std::span<const double> row(Index i) const { return {values_.data() + i * n_, n_}; }
  std::span<const double> values() const { return values_; }

  /// Principal submatrix on `idx`, in the given order.
  DenseKernel restrict(std::span<const Index> idx) const {
    std::vector<double> out(idx.size() * idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < idx.size(); ++b) out[a * idx.size() + b] = (*this)(idx[a], idx[b]);
    }
    return DenseKernel(idx.size(), std::move(out));
  }

  bool operator==(const DenseKernel&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

struct SimilarityTag {};
struct DistanceTag {};

/// Symmetric, unit diagonal, entries in [0,1].
using SimilarityMatrix = DenseKernel<SimilarityTag>;
/// Symmetric, zero diagonal, entries finite and nonnegative.
using DistanceMatrix = DenseKernel<DistanceTag>;

bool is_valid_similarity(const SimilarityMatrix& s);
bool is_valid_distance(const DistanceMatrix& d);

struct Neighbor {
  Index index;
  double similarity;
  bool operator==(const Neighbor&) const = default;
};

/// Exact top-g neighbor lists, g entries per row, sorted by descending
/// similarity (ties: smaller index first). The diagonal is never stored.
class SparseSimilarityGraph {
 public:
  SparseSimilarityGraph(std::size_t n, std::size_t g, std::vector<Neighbor> neighbors);

  std::size_t n() const { return n_; }
  std::size_t degree() const { return g_; }
  std::span<const Neighbor> row(Index i) const { return {neighbors_.data() + i * g_, g_}; }

  bool operator==(const SparseSimilarityGraph&) const = default;

 private:
  std::size_t n_;
  std::size_t g_;
  std::vector<Neighbor> neighbors_;
};

struct KernelOptions {
  Exec exec = Exec::parallel;
  /// Dense matrices larger than this are refused with DenseTooLarge.
  std::size_t max_dense_bytes = std::size_t{2} << 30;
};

/// s_ij = (1 + cos(x_i, x_j)) / 2 with s_ii = 1 exactly.
SimilarityMatrix cosine_similarity(const FeatureDataset& dataset, const KernelOptions& opts = {});

DistanceMatrix euclidean_distance(const FeatureDataset& dataset, const KernelOptions& opts = {});

/// s_ij = exp(-gamma * d_ij^2).
SimilarityMatrix rbf_similarity(const DistanceMatrix& dist, double gamma,
                                const KernelOptions& opts = {});

SparseSimilarityGraph knn_sparsify(const SimilarityMatrix& sim, std::size_t g,
                                   const KernelOptions& opts = {});

}  // namespace subsel
