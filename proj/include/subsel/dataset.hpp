#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "subsel/common.hpp"

namespace subsel {

/// Dense class labels 0..C-1 plus the original class names they were mapped
/// from at ingestion (name of class c is `names[c]`).
struct LabelSet {
  std::vector<std::uint32_t> values;
  std::vector<std::string> names;

  std::size_t num_classes() const { return names.size(); }
  bool operator==(const LabelSet&) const = default;
};

/// n x d row-major feature matrix with stable ids and optional labels.
/// Immutable once built; share it freely between readers.
class FeatureDataset {
 public:
  FeatureDataset() = default;

  /// Checks shapes only (matrix size, id count, label count). Content
  /// invariants are reported by validate_dataset().
  FeatureDataset(std::size_t n, std::size_t d, std::vector<double> features,
                 std::vector<std::string> ids,
                 std::optional<LabelSet> labels = std::nullopt);

  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }

  std::span<const double> row(Index i) const {
    return {features_.data() + i * d_, d_};
  }
  std::span<const double> features() const { return features_; }
  const std::vector<std::string>& ids() const { return ids_; }

  bool has_labels() const { return labels_.has_value(); }
  const LabelSet& labels() const;
  std::uint32_t label(Index i) const { return labels().values[i]; }
  std::size_t num_classes() const { return has_labels() ? labels_->num_classes() : 0; }

  /// Rows `rows` in the given order. Class names are kept as-is, so a subset
  /// may leave some classes without members.
  FeatureDataset subset(std::span<const Index> rows) const;

  bool operator==(const FeatureDataset&) const = default;

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> features_;
  std::vector<std::string> ids_;
  std::optional<LabelSet> labels_;
};

struct ValidationIssue {
  enum class Kind { non_finite, duplicate_id, label_out_of_range, empty_class };
  Kind kind;
  std::optional<Index> row;
  std::optional<Index> column;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  std::string summary() const;
};

ValidationReport validate_dataset(const FeatureDataset& dataset);

/// Throws InvalidDataset carrying the report summary unless the dataset is valid.
void require_valid(const FeatureDataset& dataset);

/// Disjoint per-class index sets covering 0..n-1, ascending within a class.
struct ClassPartition {
  std::vector<std::vector<Index>> classes;

  std::size_t size() const { return classes.size(); }
  /// Single class holding every item of an n-element ground set.
  static ClassPartition whole(std::size_t n);
};

ClassPartition partition_by_label(const FeatureDataset& dataset);

struct RngSeed {
  std::uint64_t value = 0;
};

using Rng = std::mt19937_64;

inline Rng make_rng(RngSeed seed) { return Rng(seed.value); }

/// Independent child seed for stream `stream` (splitmix64 mixing), so
/// replicates and arms never share a generator.
RngSeed derive_seed(RngSeed seed, std::uint64_t stream);

}  // namespace subsel
