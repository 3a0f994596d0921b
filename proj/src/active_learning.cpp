#include "subsel/active_learning.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "subsel/kernels.hpp"
#include "subsel/objectives.hpp"
#include "subsel/optimizer.hpp"

namespace subsel {

double uncertainty(std::span<const double> p, UncertaintyMeasure measure) {
  if (p.empty()) fail(ErrorCode::invalid_simplex, "empty probability vector");
  double total = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) fail(ErrorCode::invalid_simplex, "probabilities must be finite and nonnegative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    fail(ErrorCode::invalid_simplex, "probabilities sum to " + std::to_string(total));
  }

  switch (measure) {
    case UncertaintyMeasure::least_confidence:
      return 1.0 - *std::max_element(p.begin(), p.end());
    case UncertaintyMeasure::margin: {
      auto top = std::max_element(p.begin(), p.end());
      double runner_up = 0.0;
      for (auto it = p.begin(); it != p.end(); ++it) {
        if (it != top) runner_up = std::max(runner_up, *it);
      }
      return 1.0 - (*top - runner_up);
    }
    case UncertaintyMeasure::entropy: {
      double h = 0.0;
      for (double v : p) {
        if (v > 0.0) h -= v * std::log2(v);
      }
      return h;
    }
  }
  return 0.0;
}

std::size_t percent_floor(double percent, std::size_t n) {
  return static_cast<std::size_t>(std::floor(percent * static_cast<double>(n) / 100.0 + 1e-9));
}

std::size_t percent_ceil(double percent, std::size_t n) {
  return static_cast<std::size_t>(std::ceil(percent * static_cast<double>(n) / 100.0 - 1e-9));
}

std::vector<Index> filter_uncertain(std::span<const double> scores, double beta_percent) {
  if (scores.empty()) fail(ErrorCode::empty_pool, "no unlabeled items to filter");
  if (!(beta_percent > 0.0) || beta_percent > 100.0) {
    fail(ErrorCode::config_invalid, "beta must lie in (0, 100], got " + std::to_string(beta_percent));
  }
  std::vector<Index> order(scores.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return scores[a] > scores[b]; });

  std::size_t keep = std::clamp<std::size_t>(percent_ceil(beta_percent, scores.size()), 1, scores.size());
  const double last = scores[order[keep - 1]];
  while (keep < order.size() && scores[order[keep]] == last) ++keep;
  order.resize(keep);
  return order;
}

std::string to_string(Arm arm) {
  switch (arm) {
    case Arm::fass_fl: return "fass-fl";
    case Arm::fass_dispersion: return "fass-dispersion";
    case Arm::uncertainty: return "uncertainty";
    case Arm::random: return "random";
  }
  return "unknown";
}

std::string to_string(UncertaintyMeasure measure) {
  switch (measure) {
    case UncertaintyMeasure::least_confidence: return "least_confidence";
    case UncertaintyMeasure::margin: return "margin";
    case UncertaintyMeasure::entropy: return "entropy";
  }
  return "unknown";
}

void validate_config(const FassConfig& config, std::size_t pool_size, std::size_t classes) {
  auto bad = [](const std::string& what) { fail(ErrorCode::config_invalid, what); };
  if (!(config.batch_percent > 0.0) || config.batch_percent > config.beta_percent ||
      config.beta_percent > 100.0) {
    bad("need 0 < B <= beta <= 100");
  }
  if (config.rounds < 1) bad("need at least one round");
  if (config.seed_size < classes) {
    bad("seed size " + std::to_string(config.seed_size) + " is below the class count " + std::to_string(classes));
  }
  if (config.seed_size >= pool_size) bad("seed size must leave unlabeled items in the pool");
  if (percent_floor(config.batch_percent, pool_size) == 0) {
    bad("batch of " + std::to_string(config.batch_percent) + "% of " + std::to_string(pool_size) +
        " items rounds down to zero");
  }
  if (config.classifier == ClassifierKind::knn && config.knn_k < 1) bad("kNN k must be positive");
  if (config.kernel == SelectionKernel::rbf && !(config.rbf_gamma > 0.0)) bad("rbf gamma must be positive");
}

namespace {

ProbabilityTable fit_predict(const FeatureDataset& labeled, const FeatureDataset& queries,
                             const FassConfig& config) {
  if (config.classifier == ClassifierKind::knn) {
    return knn_predict_proba(labeled, queries, std::min(config.knn_k, labeled.n()));
  }
  return logreg_train(labeled, config.logreg).predict_proba(queries);
}

// One item from every class, then uniform draws from the rest of the pool.
std::vector<Index> stratified_seed(const FeatureDataset& pool, std::size_t size, RngSeed seed) {
  auto rng = make_rng(derive_seed(seed, 0));
  auto partition = partition_by_label(pool);
  std::vector<char> taken(pool.n(), 0);
  std::vector<Index> out;
  for (const auto& cls : partition.classes) {
    std::uniform_int_distribution<std::size_t> pick(0, cls.size() - 1);
    Index j = cls[pick(rng)];
    taken[j] = 1;
    out.push_back(j);
  }
  std::vector<Index> rest;
  for (Index j = 0; j < pool.n(); ++j) {
    if (!taken[j]) rest.push_back(j);
  }
  for (std::size_t t = 0; out.size() < size; ++t) {
    std::uniform_int_distribution<std::size_t> pick(t, rest.size() - 1);
    std::swap(rest[t], rest[pick(rng)]);
    out.push_back(rest[t]);
  }
  return out;
}

std::vector<Index> pick_fass(const FeatureDataset& pool, std::span<const Index> filtered, std::size_t batch,
                             Arm arm, const FassConfig& config, std::vector<std::string>& warnings,
                             std::size_t round) {
  if (batch >= filtered.size()) {
    if (batch > filtered.size()) {
      warnings.push_back("round " + std::to_string(round) + ": batch " + std::to_string(batch) +
                         " exceeds filtered set " + std::to_string(filtered.size()) + ", taking all of it");
    }
    return {filtered.begin(), filtered.end()};
  }
  auto ground = pool.subset(filtered);
  std::vector<Index> local;
  if (arm == Arm::fass_fl) {
    auto sim = config.kernel == SelectionKernel::cosine
                   ? cosine_similarity(ground)
                   : rbf_similarity(euclidean_distance(ground), config.rbf_gamma);
    FacilityLocation fl(std::make_shared<SimilarityMatrix>(std::move(sim)));
    local = lazy_greedy(fl, batch).order;
  } else if (batch < 2) {
    warnings.push_back("round " + std::to_string(round) +
                       ": dispersion needs two picks, taking the most uncertain item");
    local = {0};
  } else {
    local = dispersion_greedy(euclidean_distance(ground), batch).order;
  }
  std::vector<Index> out;
  for (Index a : local) out.push_back(filtered[a]);
  return out;
}

FassRun run_loop(const FeatureDataset& pool, const FeatureDataset& holdout, const FassConfig& config,
                 Arm arm) {
  validate_config(config, pool.n(), pool.num_classes());
  using Clock = std::chrono::steady_clock;

  FassRun run;
  run.arm = arm;
  run.seed = stratified_seed(pool, config.seed_size, config.seed);
  auto random_rng = make_rng(derive_seed(config.seed, 1));

  std::vector<char> labeled(pool.n(), 0);
  std::vector<Index> labeled_list = run.seed;
  for (Index j : run.seed) labeled[j] = 1;

  const std::size_t batch = percent_floor(config.batch_percent, pool.n());
  auto train_set = pool.subset(labeled_list);
  run.seed_accuracy = accuracy(fit_predict(train_set, holdout, config), holdout);

  for (std::size_t round = 1; round <= config.rounds; ++round) {
    const auto start = Clock::now();
    std::vector<Index> unlabeled;
    for (Index j = 0; j < pool.n(); ++j) {
      if (!labeled[j]) unlabeled.push_back(j);
    }
    if (unlabeled.empty()) {
      run.warnings.push_back("round " + std::to_string(round) + ": pool exhausted, stopping");
      break;
    }

    RoundRecord rec;
    rec.round = round;
    if (arm == Arm::random) {
      const std::size_t take = std::min(batch, unlabeled.size());
      if (take < batch) {
        run.warnings.push_back("round " + std::to_string(round) + ": batch " + std::to_string(batch) +
                               " exceeds unlabeled pool " + std::to_string(unlabeled.size()) + ", taking all of it");
      }
      for (std::size_t t = 0; t < take; ++t) {
        std::uniform_int_distribution<std::size_t> pick(t, unlabeled.size() - 1);
        std::swap(unlabeled[t], unlabeled[pick(random_rng)]);
        rec.selected.push_back(unlabeled[t]);
      }
      rec.filtered = unlabeled;
    } else {
      auto query = pool.subset(unlabeled);
      auto proba = fit_predict(train_set, query, config);
      std::vector<double> scores(unlabeled.size());
      for (Index q = 0; q < scores.size(); ++q) scores[q] = uncertainty(proba.row(q), config.measure);

      // Positions into `unlabeled`, most uncertain first.
      const bool top_only = arm == Arm::uncertainty;
      auto filtered = filter_uncertain(scores, top_only ? 100.0 : config.beta_percent);
      if (top_only) filtered.resize(std::min(batch, filtered.size()));
      for (Index q : filtered) rec.filtered.push_back(unlabeled[q]);
      rec.selected = top_only ? rec.filtered : pick_fass(pool, rec.filtered, batch, arm, config, run.warnings, round);
    }

    for (Index j : rec.selected) {
      labeled[j] = 1;
      labeled_list.push_back(j);
    }
    train_set = pool.subset(labeled_list);
    rec.labeled_count = labeled_list.size();
    rec.accuracy = accuracy(fit_predict(train_set, holdout, config), holdout);
    rec.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    run.rounds.push_back(std::move(rec));
  }
  return run;
}

}  // namespace

double train_and_score(const FeatureDataset& labeled, const FeatureDataset& holdout, const FassConfig& config) {
  return accuracy(fit_predict(labeled, holdout, config), holdout);
}

FassRun fass_run(const FeatureDataset& pool, const FeatureDataset& holdout, const FassConfig& config, Arm arm) {
  return run_loop(pool, holdout, config, arm);
}

FassRun random_baseline_run(const FeatureDataset& pool, const FeatureDataset& holdout, const FassConfig& config) {
  return run_loop(pool, holdout, config, Arm::random);
}

double area_under_curve(const FassRun& run) {
  double x = static_cast<double>(run.seed.size());
  double y = run.seed_accuracy;
  double area = 0.0;
  for (const auto& rec : run.rounds) {
    double nx = static_cast<double>(rec.labeled_count);
    area += 0.5 * (y + rec.accuracy) * (nx - x);
    x = nx;
    y = rec.accuracy;
  }
  return area;
}

}  // namespace subsel
