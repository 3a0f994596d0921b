#include "subsel/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "parallel.hpp"

namespace subsel {

std::vector<std::uint32_t> ProbabilityTable::predict() const {
  std::vector<std::uint32_t> out(rows());
  for (Index i = 0; i < out.size(); ++i) {
    auto p = row(i);
    out[i] = static_cast<std::uint32_t>(std::max_element(p.begin(), p.end()) - p.begin());
  }
  return out;
}

double accuracy(const ProbabilityTable& proba, const FeatureDataset& truth) {
  auto predicted = proba.predict();
  if (predicted.size() != truth.n()) {
    fail(ErrorCode::invalid_dataset, "prediction count does not match the evaluation set");
  }
  if (predicted.empty()) return 0.0;
  std::size_t hits = 0;
  for (Index i = 0; i < predicted.size(); ++i) hits += predicted[i] == truth.label(i);
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

ProbabilityTable knn_predict_proba(const FeatureDataset& labeled, const FeatureDataset& queries,
                                   std::size_t k, Exec exec) {
  if (labeled.n() == 0) fail(ErrorCode::empty_training_set, "kNN needs at least one labeled row");
  if (k < 1 || k > labeled.n()) {
    fail(ErrorCode::bad_k, "k=" + std::to_string(k) + " outside 1.." + std::to_string(labeled.n()));
  }
  if (queries.d() != labeled.d()) {
    fail(ErrorCode::invalid_dataset, "query dimension " + std::to_string(queries.d()) +
                                         " differs from training dimension " + std::to_string(labeled.d()));
  }
  const std::size_t classes = labeled.num_classes();
  if (classes == 0) fail(ErrorCode::missing_labels, "kNN training set has no labels");

  ProbabilityTable out{classes, std::vector<double>(queries.n() * classes, 0.0)};
  detail::for_each_index(queries.n(), exec, [&](Index q) {
    auto x = queries.row(q);
    std::vector<std::pair<double, Index>> dist(labeled.n());
    for (Index t = 0; t < labeled.n(); ++t) {
      auto y = labeled.row(t);
      double acc = 0.0;
      for (std::size_t c = 0; c < x.size(); ++c) {
        double diff = x[c] - y[c];
        acc += diff * diff;
      }
      dist[t] = {acc, t};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    for (std::size_t r = 0; r < k; ++r) {
      out.values[q * classes + labeled.label(dist[r].second)] += 1.0 / static_cast<double>(k);
    }
  });
  return out;
}

LogisticRegression::LogisticRegression(std::size_t classes, std::size_t dim)
    : classes_(classes), dim_(dim), weights_(classes * (dim + 1), 0.0) {}

LogisticRegression::LogisticRegression(std::size_t classes, std::size_t dim, std::vector<double> weights)
    : classes_(classes), dim_(dim), weights_(std::move(weights)) {
  if (weights_.size() != classes_ * (dim_ + 1)) {
    fail(ErrorCode::invalid_dataset, "weight matrix must be classes x (dim+1)");
  }
}

namespace {

// Softmax of one row into p (size C), shifted by the max logit.
void softmax_row(std::span<const double> x, std::span<const double> w, std::size_t classes,
                 std::vector<double>& p) {
  const std::size_t stride = x.size() + 1;
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < classes; ++c) {
    auto wc = w.subspan(c * stride, stride);
    double z = wc[x.size()];
    for (std::size_t k = 0; k < x.size(); ++k) z += wc[k] * x[k];
    p[c] = z;
    top = std::max(top, z);
  }
  double total = 0.0;
  for (std::size_t c = 0; c < classes; ++c) {
    p[c] = std::exp(p[c] - top);
    total += p[c];
  }
  for (std::size_t c = 0; c < classes; ++c) p[c] /= total;
}

void check_shape(const FeatureDataset& data, std::span<const double> w, std::size_t classes) {
  if (w.size() != classes * (data.d() + 1)) {
    fail(ErrorCode::invalid_dataset, "weight vector does not match classes x (d+1)");
  }
  if (data.n() == 0) fail(ErrorCode::empty_training_set, "logistic regression needs labeled rows");
}

double penalty(std::span<const double> w, std::size_t classes, std::size_t dim, double l2) {
  double acc = 0.0;
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t k = 0; k < dim; ++k) acc += w[c * (dim + 1) + k] * w[c * (dim + 1) + k];
  }
  return 0.5 * l2 * acc;
}

}  // namespace

ProbabilityTable LogisticRegression::predict_proba(const FeatureDataset& queries) const {
  if (queries.d() != dim_) fail(ErrorCode::invalid_dataset, "query dimension mismatch");
  ProbabilityTable out{classes_, std::vector<double>(queries.n() * classes_)};
  std::vector<double> p(classes_);
  for (Index i = 0; i < queries.n(); ++i) {
    softmax_row(queries.row(i), weights_, classes_, p);
    std::copy(p.begin(), p.end(), out.values.begin() + static_cast<std::ptrdiff_t>(i * classes_));
  }
  return out;
}

double logreg_loss(const FeatureDataset& data, std::span<const double> weights, std::size_t classes,
                   double l2) {
  check_shape(data, weights, classes);
  std::vector<double> p(classes);
  double total = 0.0;
  for (Index i = 0; i < data.n(); ++i) {
    softmax_row(data.row(i), weights, classes, p);
    total -= std::log(std::max(p[data.label(i)], std::numeric_limits<double>::min()));
  }
  return total / static_cast<double>(data.n()) + penalty(weights, classes, data.d(), l2);
}

std::vector<double> logreg_gradient(const FeatureDataset& data, std::span<const double> weights,
                                    std::size_t classes, double l2) {
  check_shape(data, weights, classes);
  const std::size_t d = data.d();
  const std::size_t stride = d + 1;
  std::vector<double> grad(weights.size(), 0.0);
  std::vector<double> p(classes);
  const double scale = 1.0 / static_cast<double>(data.n());
  for (Index i = 0; i < data.n(); ++i) {
    auto x = data.row(i);
    softmax_row(x, weights, classes, p);
    for (std::size_t c = 0; c < classes; ++c) {
      double residual = (p[c] - (data.label(i) == c ? 1.0 : 0.0)) * scale;
      for (std::size_t k = 0; k < d; ++k) grad[c * stride + k] += residual * x[k];
      grad[c * stride + d] += residual;
    }
  }
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t k = 0; k < d; ++k) grad[c * stride + k] += l2 * weights[c * stride + k];
  }
  return grad;
}

LogisticRegression logreg_train(const FeatureDataset& labeled, const LogRegConfig& config) {
  const std::size_t classes = labeled.num_classes();
  std::set<std::uint32_t> present(labeled.labels().values.begin(), labeled.labels().values.end());
  if (present.size() < 2) {
    fail(ErrorCode::single_class_pool, "logistic regression needs at least two classes in the labeled set");
  }

  std::vector<double> w(classes * (labeled.d() + 1), 0.0);
  double loss = logreg_loss(labeled, w, classes, config.l2);
  double step = config.step;
  std::vector<double> trial(w.size());

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    auto grad = logreg_gradient(labeled, w, classes, config.l2);
    bool accepted = false;
    for (int halving = 0; halving < 40 && !accepted; ++halving) {
      for (std::size_t k = 0; k < w.size(); ++k) trial[k] = w[k] - step * grad[k];
      double trial_loss = logreg_loss(labeled, trial, classes, config.l2);
      if (trial_loss <= loss) {
        w.swap(trial);
        loss = trial_loss;
        accepted = true;
      } else {
        step *= 0.5;
      }
    }
    if (!accepted) break;
  }
  return LogisticRegression(classes, labeled.d(), std::move(w));
}

}  // namespace subsel
