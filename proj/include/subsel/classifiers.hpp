#pragma once

#include <span>
#include <vector>

#include "subsel/common.hpp"
#include "subsel/dataset.hpp"

namespace subsel {

/// Row-major table of per-query class probabilities.
struct ProbabilityTable {
  std::size_t classes = 0;
  std::vector<double> values;

  std::size_t rows() const { return classes == 0 ? 0 : values.size() / classes; }
  std::span<const double> row(Index i) const { return {values.data() + i * classes, classes}; }
  /// argmax per row, ties to the smaller class id.
  std::vector<std::uint32_t> predict() const;
};

/// Fraction of rows whose predicted class equals the dataset label.
double accuracy(const ProbabilityTable& proba, const FeatureDataset& truth);

/// Class frequencies among the k nearest labeled rows (Euclidean; distance
/// ties go to the smaller training index).
ProbabilityTable knn_predict_proba(const FeatureDataset& labeled, const FeatureDataset& queries,
                                   std::size_t k, Exec exec = Exec::parallel);

struct LogRegConfig {
  std::size_t epochs = 300;
  double step = 0.5;
  double l2 = 1e-3;
};

/// Multinomial softmax model. weights is C x (d+1) row-major; the last entry
/// of each row is the bias.
class LogisticRegression {
 public:
  LogisticRegression(std::size_t classes, std::size_t dim);
  LogisticRegression(std::size_t classes, std::size_t dim, std::vector<double> weights);

  std::size_t classes() const { return classes_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> weights() const { return weights_; }

  ProbabilityTable predict_proba(const FeatureDataset& queries) const;

 private:
  std::size_t classes_;
  std::size_t dim_;
  std::vector<double> weights_;
};

/// Mean cross-entropy plus (l2/2)*||W||^2 over the non-bias weights.
double logreg_loss(const FeatureDataset& data, std::span<const double> weights, std::size_t classes,
                   double l2);
std::vector<double> logreg_gradient(const FeatureDataset& data, std::span<const double> weights,
                                    std::size_t classes, double l2);

/// Full-batch gradient descent from zero weights. A step that would raise the
/// loss is halved and retried, so the loss never increases.
LogisticRegression logreg_train(const FeatureDataset& labeled, const LogRegConfig& config);

}  // namespace subsel
