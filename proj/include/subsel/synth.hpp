#pragma once

#include <cstddef>

#include "subsel/dataset.hpp"

namespace subsel {

enum class ClassRule {
  /// cluster c belongs to class c mod C
  modulo,
  /// clusters split into C contiguous blocks
  block,
};

/// Gaussian-mixture generator. Each sampled point is emitted `redundancy`
/// times: once as drawn, then with N(0, (sigma/10)^2) jitter per coordinate.
struct SyntheticSpec {
  std::size_t clusters = 2;
  std::size_t points_per_cluster = 50;
  std::size_t dim = 2;
  double sigma = 1.0;
  std::size_t classes = 2;
  ClassRule rule = ClassRule::modulo;
  std::size_t redundancy = 1;
  /// Cluster centers are drawn uniformly from [-spread, spread]^dim.
  double center_spread = 5.0;
  /// Added to every coordinate after sampling, e.g. to keep cosine kernels
  /// away from the origin.
  double offset = 0.0;
};

void validate_spec(const SyntheticSpec& spec);

/// Rows ordered cluster, point, copy; ids "c<cluster>_p<point>_r<copy>".
FeatureDataset generate_synthetic(const SyntheticSpec& spec, RngSeed seed);

struct SyntheticSplit {
  FeatureDataset pool;
  FeatureDataset holdout;
};

/// Pool plus a holdout drawn from the same mixture: `holdout_per_cluster`
/// extra points per cluster, original copies only.
SyntheticSplit generate_synthetic_split(const SyntheticSpec& spec, std::size_t holdout_per_cluster, RngSeed seed);

}  // namespace subsel
