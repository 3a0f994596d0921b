#include "subsel/dataset.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

namespace subsel {

FeatureDataset::FeatureDataset(std::size_t n, std::size_t d, std::vector<double> features,
                               std::vector<std::string> ids, std::optional<LabelSet> labels)
    : n_(n), d_(d), features_(std::move(features)), ids_(std::move(ids)),
      labels_(std::move(labels)) {
  if (features_.size() != n_ * d_) {
    fail(ErrorCode::invalid_dataset, "feature matrix has " + std::to_string(features_.size()) +
                                         " entries, expected " + std::to_string(n_ * d_));
  }
  if (ids_.size() != n_) {
    fail(ErrorCode::invalid_dataset, "expected " + std::to_string(n_) + " ids, got " +
                                         std::to_string(ids_.size()));
  }
  if (labels_ && labels_->values.size() != n_) {
    fail(ErrorCode::invalid_dataset, "expected " + std::to_string(n_) + " labels, got " +
                                         std::to_string(labels_->values.size()));
  }
}

const LabelSet& FeatureDataset::labels() const {
  if (!labels_) fail(ErrorCode::missing_labels, "dataset has no labels");
  return *labels_;
}

FeatureDataset FeatureDataset::subset(std::span<const Index> rows) const {
  std::vector<double> features;
  features.reserve(rows.size() * d_);
  std::vector<std::string> ids;
  ids.reserve(rows.size());
  std::optional<LabelSet> labels;
  if (labels_) labels = LabelSet{{}, labels_->names};
  for (Index r : rows) {
    if (r >= n_) {
      fail(ErrorCode::index_out_of_range,
           "row " + std::to_string(r) + " out of range for n=" + std::to_string(n_));
    }
    auto x = row(r);
    features.insert(features.end(), x.begin(), x.end());
    ids.push_back(ids_[r]);
    if (labels) labels->values.push_back(labels_->values[r]);
  }
  return FeatureDataset(rows.size(), d_, std::move(features), std::move(ids), std::move(labels));
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) out << "; ";
    out << issues[i].message;
  }
  return out.str();
}

ValidationReport validate_dataset(const FeatureDataset& dataset) {
  ValidationReport report;
  using Kind = ValidationIssue::Kind;

  for (Index i = 0; i < dataset.n(); ++i) {
    auto x = dataset.row(i);
    for (Index j = 0; j < x.size(); ++j) {
      if (!std::isfinite(x[j])) {
        report.issues.push_back({Kind::non_finite, i, j,
                                 "non-finite value at row " + std::to_string(i) + ", column " +
                                     std::to_string(j) + " (id \"" + dataset.ids()[i] + "\")"});
      }
    }
  }

  std::unordered_map<std::string, Index> seen;
  for (Index i = 0; i < dataset.n(); ++i) {
    const auto& id = dataset.ids()[i];
    auto [it, inserted] = seen.emplace(id, i);
    if (!inserted) {
      report.issues.push_back({Kind::duplicate_id, i, std::nullopt,
                               "duplicate id \"" + id + "\" at rows " +
                                   std::to_string(it->second) + " and " + std::to_string(i)});
    }
  }

  if (dataset.has_labels()) {
    const auto& labels = dataset.labels();
    const std::size_t c = labels.num_classes();
    std::vector<std::size_t> counts(c, 0);
    for (Index i = 0; i < dataset.n(); ++i) {
      auto y = labels.values[i];
      if (y >= c) {
        report.issues.push_back({Kind::label_out_of_range, i, std::nullopt,
                                 "label " + std::to_string(y) + " at row " + std::to_string(i) +
                                     " outside 0.." + std::to_string(c) + "-1"});
      } else {
        ++counts[y];
      }
    }
    for (std::size_t k = 0; k < c; ++k) {
      if (counts[k] == 0) {
        report.issues.push_back({Kind::empty_class, std::nullopt, std::nullopt,
                                 "class " + std::to_string(k) + " (\"" + labels.names[k] +
                                     "\") has no items"});
      }
    }
  }
  return report;
}

void require_valid(const FeatureDataset& dataset) {
  auto report = validate_dataset(dataset);
  if (!report.ok()) fail(ErrorCode::invalid_dataset, report.summary());
}

ClassPartition ClassPartition::whole(std::size_t n) {
  ClassPartition p;
  p.classes.emplace_back(n);
  for (Index i = 0; i < n; ++i) p.classes[0][i] = i;
  return p;
}

ClassPartition partition_by_label(const FeatureDataset& dataset) {
  const auto& labels = dataset.labels();
  ClassPartition p;
  p.classes.resize(labels.num_classes());
  for (Index i = 0; i < dataset.n(); ++i) {
    auto y = labels.values[i];
    if (y >= p.classes.size()) {
      fail(ErrorCode::invalid_dataset, "label " + std::to_string(y) + " at row " +
                                           std::to_string(i) + " exceeds class count");
    }
    p.classes[y].push_back(i);
  }
  for (std::size_t c = 0; c < p.classes.size(); ++c) {
    if (p.classes[c].empty()) {
      fail(ErrorCode::empty_class, "class " + std::to_string(c) + " (\"" + labels.names[c] +
                                       "\") has no items");
    }
  }
  return p;
}

RngSeed derive_seed(RngSeed seed, std::uint64_t stream) {
  std::uint64_t z = seed.value + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return {z ^ (z >> 31)};
}

}  // namespace subsel
