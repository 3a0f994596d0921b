#pragma once

#include <span>
#include <string>
#include <vector>

#include "subsel/classifiers.hpp"
#include "subsel/dataset.hpp"

namespace subsel {

enum class UncertaintyMeasure { least_confidence, margin, entropy };

/// least_confidence = 1 - max p; margin = 1 - (max p - runner-up), where the
/// runner-up is the max after removing one argmax occurrence;
/// entropy = -sum p log2 p with 0 log 0 = 0.
/// Throws InvalidSimplex unless p >= 0 and sum p = 1 within 1e-9.
double uncertainty(std::span<const double> p, UncertaintyMeasure measure);

/// Positions of the ceil(beta |U| / 100) highest scores, extended by every
/// score exactly equal to the last admitted one. Ordered by score descending,
/// then position ascending.
std::vector<Index> filter_uncertain(std::span<const double> scores, double beta_percent);

/// Number of items a percentage of `n` stands for: floor or ceil of
/// percent * n / 100, tolerant of round-off in the product.
std::size_t percent_floor(double percent, std::size_t n);
std::size_t percent_ceil(double percent, std::size_t n);

enum class ClassifierKind { logreg, knn };

enum class SelectionKernel { cosine, rbf };

enum class Arm { fass_fl, fass_dispersion, uncertainty, random };

std::string to_string(Arm arm);
std::string to_string(UncertaintyMeasure measure);

struct FassConfig {
  /// Per-round batch as a percentage of the whole pool.
  double batch_percent = 1.0;
  /// Filtered ground set as a percentage of the current unlabeled pool.
  double beta_percent = 10.0;
  std::size_t rounds = 10;
  std::size_t seed_size = 10;
  UncertaintyMeasure measure = UncertaintyMeasure::entropy;
  ClassifierKind classifier = ClassifierKind::logreg;
  LogRegConfig logreg;
  std::size_t knn_k = 5;
  SelectionKernel kernel = SelectionKernel::cosine;
  double rbf_gamma = 1.0;
  RngSeed seed;
};

/// Throws ConfigInvalid on out-of-range settings for a pool of `pool_size`
/// items with `classes` classes.
void validate_config(const FassConfig& config, std::size_t pool_size, std::size_t classes);

struct RoundRecord {
  std::size_t round = 0;
  /// Labeled-set size after this round's batch was added.
  std::size_t labeled_count = 0;
  /// Holdout accuracy of the model retrained on that labeled set.
  double accuracy = 0.0;
  /// Pool indices of the candidate set F the batch was drawn from (all of U
  /// for the random arm, the batch itself for pure uncertainty).
  std::vector<Index> filtered;
  /// Pool indices labeled this round.
  std::vector<Index> selected;
  double seconds = 0.0;
};

struct FassRun {
  Arm arm = Arm::fass_fl;
  std::vector<Index> seed;
  double seed_accuracy = 0.0;
  std::vector<RoundRecord> rounds;
  std::vector<std::string> warnings;
};

/// Mini-batch loop: train on L, score U, keep the beta% most uncertain as F,
/// pick a batch from F with the arm's rule, label it, retrain and report.
/// `pool` labels are read only for items that have been labeled.
FassRun fass_run(const FeatureDataset& pool, const FeatureDataset& holdout, const FassConfig& config,
                 Arm arm = Arm::fass_fl);

/// Same loop with uniformly random batches drawn from U.
FassRun random_baseline_run(const FeatureDataset& pool, const FeatureDataset& holdout,
                            const FassConfig& config);

/// Trapezoidal area under (labeled_count, accuracy), starting from the seed point.
double area_under_curve(const FassRun& run);

/// Holdout accuracy of the configured classifier trained on `labeled`.
double train_and_score(const FeatureDataset& labeled, const FeatureDataset& holdout,
                       const FassConfig& config);

}  // namespace subsel
