#include "subsel/synth.hpp"

#include <cmath>

namespace subsel {

void validate_spec(const SyntheticSpec& spec) {
  auto bad = [](const std::string& what) { fail(ErrorCode::bad_spec, what); };
  if (spec.clusters < 1) bad("need at least one cluster");
  if (spec.points_per_cluster < 1) bad("need at least one point per cluster");
  if (spec.dim < 1) bad("dimension must be positive");
  if (!(spec.sigma > 0.0) || !std::isfinite(spec.sigma)) bad("sigma must be positive");
  if (spec.redundancy < 1) bad("redundancy factor must be at least 1");
  if (spec.classes < 1 || spec.classes > spec.clusters) bad("class count must lie in 1..clusters");
  if (!(spec.center_spread >= 0.0) || !std::isfinite(spec.center_spread)) bad("center spread must be nonnegative");
  if (!std::isfinite(spec.offset)) bad("offset must be finite");
}

FeatureDataset generate_synthetic(const SyntheticSpec& spec, RngSeed seed) {
  validate_spec(spec);
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> center_dist(-spec.center_spread, spec.center_spread);
  std::normal_distribution<double> noise(0.0, spec.sigma);
  std::normal_distribution<double> jitter(0.0, spec.sigma / 10.0);

  std::vector<double> centers(spec.clusters * spec.dim);
  for (double& c : centers) c = center_dist(rng);

  const std::size_t n = spec.clusters * spec.points_per_cluster * spec.redundancy;
  std::vector<double> features;
  features.reserve(n * spec.dim);
  std::vector<std::string> ids;
  ids.reserve(n);
  LabelSet labels;
  for (std::size_t c = 0; c < spec.classes; ++c) labels.names.push_back(std::to_string(c));

  std::vector<double> point(spec.dim);
  for (std::size_t c = 0; c < spec.clusters; ++c) {
    const auto label = static_cast<std::uint32_t>(
        spec.rule == ClassRule::modulo ? c % spec.classes : c * spec.classes / spec.clusters);
    for (std::size_t p = 0; p < spec.points_per_cluster; ++p) {
      for (std::size_t k = 0; k < spec.dim; ++k) point[k] = centers[c * spec.dim + k] + noise(rng);
      for (std::size_t r = 0; r < spec.redundancy; ++r) {
        for (std::size_t k = 0; k < spec.dim; ++k) {
          features.push_back(point[k] + (r == 0 ? 0.0 : jitter(rng)) + spec.offset);
        }
        ids.push_back("c" + std::to_string(c) + "_p" + std::to_string(p) + "_r" + std::to_string(r));
        labels.values.push_back(label);
      }
    }
  }
  return FeatureDataset(n, spec.dim, std::move(features), std::move(ids), std::move(labels));
}

SyntheticSplit generate_synthetic_split(const SyntheticSpec& spec, std::size_t holdout_per_cluster, RngSeed seed) {
  auto full_spec = spec;
  full_spec.points_per_cluster += holdout_per_cluster;
  auto full = generate_synthetic(full_spec, seed);
  std::vector<Index> pool_rows, holdout_rows;
  for (Index i = 0; i < full.n(); ++i) {
    const std::size_t copy = i % spec.redundancy;
    const std::size_t point = (i / spec.redundancy) % full_spec.points_per_cluster;
    if (point < spec.points_per_cluster) {
      pool_rows.push_back(i);
    } else if (copy == 0) {
      holdout_rows.push_back(i);
    }
  }
  return {full.subset(pool_rows), full.subset(holdout_rows)};
}

}  // namespace subsel
