#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <memory>
#include <numeric>
#include <sstream>

#include "subsel/io.hpp"
#include "subsel/kernels.hpp"
#include "subsel/objectives.hpp"
#include "subsel/optimizer.hpp"
#include "subsel/version.hpp"

namespace subsel::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json summary(const std::string& command, const GlobalOptions& global, json config) {
  config["format"] = global.format;
  json s;
  s["command"] = command;
  s["version"] = std::string(kVersion);
  s["rng_seed"] = global.rng_seed;
  s["config"] = std::move(config);
  s["kernel"] = nullptr;
  s["objective"] = nullptr;
  s["budget"] = nullptr;
  s["selected_ids"] = nullptr;
  s["metrics"] = json::object();
  s["class_names"] = nullptr;
  s["timings"] = nullptr;
  return s;
}

void write_summary(const GlobalOptions& global, json s, const json& timings) {
  if (global.timings) s["timings"] = timings;
  write_file(fs::path(global.out) / "summary.json", s.dump(2) + "\n");
}

json class_names(const FeatureDataset& ds) {
  return ds.has_labels() ? json(ds.labels().names) : json(nullptr);
}

std::shared_ptr<const SimilarityMatrix> similarity(const FeatureDataset& ds, const std::string& kernel, double gamma) {
  if (kernel == "rbf") return std::make_shared<SimilarityMatrix>(rbf_similarity(euclidean_distance(ds), gamma));
  return std::make_shared<SimilarityMatrix>(cosine_similarity(ds));
}

// Farthest-pair dispersion greedy run separately inside every class.
std::vector<Index> classwise_dispersion(const DistanceMatrix& dist, const ClassPartition& partition, std::size_t k) {
  std::vector<std::size_t> sizes;
  for (const auto& cls : partition.classes) sizes.push_back(cls.size());
  auto quota = proportional_budget(sizes, k);
  std::vector<Index> order;
  for (std::size_t c = 0; c < partition.size(); ++c) {
    const auto& members = partition.classes[c];
    if (quota[c] == 1) {
      order.push_back(members.front());
    } else if (quota[c] >= 2) {
      for (Index a : dispersion_greedy(dist.restrict(members), quota[c]).order) order.push_back(members[a]);
    }
  }
  return order;
}

Selection trace_of(const Objective& objective, std::vector<Index> order) {
  Selection sel;
  sel.budget = order.size();
  std::vector<Index> prefix;
  for (Index j : order) {
    sel.gains.push_back(objective.naive_gain(prefix, j));
    prefix.push_back(j);
    sel.values.push_back(objective.evaluate(prefix));
  }
  sel.order = std::move(order);
  return sel;
}

std::vector<Index> uniform_sample(std::size_t n, std::size_t size, RngSeed seed) {
  auto rng = make_rng(seed);
  std::vector<Index> all(n);
  std::iota(all.begin(), all.end(), Index{0});
  for (std::size_t t = 0; t < size; ++t) {
    std::uniform_int_distribution<std::size_t> pick(t, n - 1);
    std::swap(all[t], all[pick(rng)]);
  }
  all.resize(size);
  return all;
}

double knn_accuracy(const FeatureDataset& train, std::vector<Index> rows, const FeatureDataset& holdout,
                    std::size_t k) {
  // Train rows in pool order so equal subsets give equal tie-breaking.
  std::sort(rows.begin(), rows.end());
  auto subset = train.subset(rows);
  return accuracy(knn_predict_proba(subset, holdout, std::min(k, subset.n())), holdout);
}

template <class E>
E parse_enum(const std::string& text, std::initializer_list<std::pair<const char*, E>> table) {
  for (const auto& [name, value] : table) {
    if (text == name) return value;
  }
  fail(ErrorCode::config_invalid, "unknown choice '" + text + "'");
}

}  // namespace

std::vector<double> parse_fractions(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) fail(ErrorCode::config_invalid, "bad fraction '" + s + "' in '" + text + "'");
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) fail(ErrorCode::config_invalid, "range must be start:stop:step, got '" + text + "'");
    const double start = number(parts[0]), stop = number(parts[1]), step = number(parts[2]);
    if (!(step > 0.0)) fail(ErrorCode::config_invalid, "range step must be positive");
    for (std::size_t i = 0; start + static_cast<double>(i) * step <= stop + 1e-9; ++i) {
      out.push_back(start + static_cast<double>(i) * step);
    }
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
  }
  if (out.empty()) fail(ErrorCode::config_invalid, "no fractions in '" + text + "'");
  for (double f : out) {
    if (!(f > 0.0) || f > 100.0 + 1e-9) fail(ErrorCode::config_invalid, "fractions must lie in (0, 100]");
  }
  return out;
}

std::vector<std::size_t> proportional_budget(const std::vector<std::size_t>& sizes, std::size_t k) {
  const std::size_t n = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  std::vector<std::size_t> quota(sizes.size(), 0);
  if (n == 0) return quota;
  std::vector<std::pair<std::size_t, std::size_t>> remainders;  // (remainder * n, class)
  std::size_t used = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    quota[c] = k * sizes[c] / n;
    used += quota[c];
    remainders.push_back({k * sizes[c] % n, c});
  }
  std::stable_sort(remainders.begin(), remainders.end(), [](auto a, auto b) { return a.first > b.first; });
  for (std::size_t t = 0; used < k && t < remainders.size(); ++t) {
    const std::size_t c = remainders[t].second;
    if (quota[c] < sizes[c]) {
      ++quota[c];
      ++used;
    }
  }
  return quota;
}

void run_select(const GlobalOptions& global, const SelectOptions& opts) {
  const auto start = Clock::now();
  auto ds = read_features(opts.input);

  json config{{"input", opts.input},       {"kernel", opts.kernel},       {"gamma", opts.gamma},
              {"objective", opts.objective}, {"k", opts.k},               {"label_aware", opts.label_aware},
              {"neighbors", opts.neighbors}, {"lambda_fl", opts.lambda_fl}, {"lambda_disp", opts.lambda_disp},
              {"optimizer", opts.optimizer}};
  auto s = summary("select", global, config);
  const bool distance_only = opts.objective == "dispersion";
  s["kernel"] = distance_only ? "euclidean" : opts.kernel;
  s["objective"] = (opts.label_aware ? "label_aware_" : "") + opts.objective;
  s["budget"] = opts.k;
  s["class_names"] = class_names(ds);

  if (opts.label_aware && opts.objective != "fl" && opts.objective != "dispersion") {
    fail(ErrorCode::config_invalid, "label-aware selection supports the fl and dispersion objectives");
  }
  if (opts.optimizer != "auto" && opts.optimizer != "lazy" && opts.optimizer != "naive") {
    fail(ErrorCode::config_invalid, "unknown optimizer '" + opts.optimizer + "'");
  }
  if (opts.k > ds.n()) {
    fail(ErrorCode::bad_budget, "budget " + std::to_string(opts.k) + " exceeds ground set size " + std::to_string(ds.n()));
  }

  std::unique_ptr<Objective> objective;
  std::shared_ptr<const DistanceMatrix> dist;
  std::optional<ClassPartition> partition;
  if (opts.label_aware) partition = partition_by_label(ds);

  if (opts.objective == "fl") {
    auto sim = similarity(ds, opts.kernel, opts.gamma);
    if (partition) {
      objective = std::make_unique<LabelAware>(LabelAware::facility_location(*sim, *partition));
    } else {
      objective = std::make_unique<FacilityLocation>(sim);
    }
  } else if (opts.objective == "sparse-fl") {
    auto graph = std::make_shared<SparseSimilarityGraph>(knn_sparsify(*similarity(ds, opts.kernel, opts.gamma), opts.neighbors));
    objective = std::make_unique<SparseFacilityLocation>(graph);
  } else if (opts.objective == "dispersion") {
    dist = std::make_shared<DistanceMatrix>(euclidean_distance(ds));
    if (partition) {
      objective = std::make_unique<LabelAware>(LabelAware::dispersion(*dist, *partition));
    } else {
      objective = std::make_unique<Dispersion>(dist);
    }
  } else if (opts.objective == "mixture") {
    dist = std::make_shared<DistanceMatrix>(euclidean_distance(ds));
    objective = std::make_unique<Mixture>(similarity(ds, opts.kernel, opts.gamma), dist, opts.lambda_fl, opts.lambda_disp);
  } else {
    fail(ErrorCode::config_invalid, "unknown objective '" + opts.objective + "'");
  }

  GreedyStats stats;
  Selection sel;
  const auto select_start = Clock::now();
  if (opts.k == 0) {
    // Nothing to pick.
  } else if (opts.objective == "dispersion") {
    if (partition) {
      if (opts.k < 2) fail(ErrorCode::bad_budget, "dispersion needs a budget of at least 2");
      sel = trace_of(*objective, classwise_dispersion(*dist, *partition, opts.k));
    } else {
      sel = dispersion_greedy(*dist, opts.k);
    }
  } else {
    const bool lazy = opts.optimizer == "lazy" || (opts.optimizer == "auto" && objective->submodular());
    sel = lazy ? lazy_greedy(*objective, opts.k, &stats) : naive_greedy(*objective, opts.k, &stats);
  }
  const double select_seconds = seconds_since(select_start);

  const double empty_value = objective->evaluate({});
  std::string ids_out, trace = "step,id,gain,value\n0,,0," + format_double(empty_value) + "\n";
  json selected = json::array();
  for (std::size_t t = 0; t < sel.order.size(); ++t) {
    const auto& id = ds.ids()[sel.order[t]];
    ids_out += id + "\n";
    selected.push_back(id);
    trace += std::to_string(t + 1) + "," + id + "," + format_double(sel.gains[t]) + "," + format_double(sel.values[t]) + "\n";
  }
  const fs::path out(global.out);
  write_file(out / "selected_ids.txt", ids_out);
  write_file(out / "trace.csv", trace);

  s["selected_ids"] = selected;
  s["metrics"] = {{"objective_value", nullable(sel.order.empty() ? empty_value : sel.value())},
                  {"gain_evaluations", stats.gain_evaluations},
                  {"lazy_resorts", stats.total_resorts()},
                  {"ground_size", ds.n()}};
  write_summary(global, s, {{"select_seconds", select_seconds}, {"total_seconds", seconds_since(start)}});
}

void run_eval_knn(const GlobalOptions& global, const EvalKnnOptions& opts) {
  const auto start = Clock::now();
  auto train = read_features(opts.train);
  auto holdout = read_features(opts.holdout);
  train.labels();
  holdout.labels();
  if (train.d() != holdout.d()) fail(ErrorCode::invalid_dataset, "train and holdout dimensions differ");
  if (opts.k < 1) fail(ErrorCode::bad_k, "kNN k must be positive");
  if (opts.repeats < 1) fail(ErrorCode::config_invalid, "need at least one random repeat");
  auto fractions = parse_fractions(opts.fractions);
  for (const auto& m : opts.methods) {
    if (m != "fl" && m != "dispersion" && m != "random") fail(ErrorCode::config_invalid, "unknown method '" + m + "'");
  }

  json config{{"train", opts.train},   {"holdout", opts.holdout}, {"fractions", opts.fractions},
              {"methods", opts.methods}, {"repeats", opts.repeats}, {"k", opts.k},
              {"kernel", opts.kernel},   {"gamma", opts.gamma},     {"label_aware", opts.label_aware}};
  auto s = summary("eval-knn", global, config);
  s["kernel"] = opts.kernel;
  s["objective"] = opts.label_aware ? "label_aware_fl" : "fl";
  s["class_names"] = class_names(train);

  const std::size_t n = train.n();
  auto size_at = [&](double f, std::size_t floor_min) { return std::clamp(percent_floor(f, n), floor_min, n); };
  std::size_t max_fl = 0, max_disp = 0;
  for (double f : fractions) {
    max_fl = std::max(max_fl, size_at(f, 1));
    max_disp = std::max(max_disp, size_at(f, 2));
  }

  // Greedy orders are prefix-consistent, so one run covers every fraction.
  std::optional<ClassPartition> partition;
  if (opts.label_aware) partition = partition_by_label(train);
  std::vector<Index> fl_order, disp_order;
  json timings = json::object();
  auto has = [&](const char* m) { return std::find(opts.methods.begin(), opts.methods.end(), m) != opts.methods.end(); };
  if (has("fl")) {
    const auto t0 = Clock::now();
    auto sim = similarity(train, opts.kernel, opts.gamma);
    if (partition) {
      fl_order = lazy_greedy(LabelAware::facility_location(*sim, *partition), max_fl).order;
    } else {
      fl_order = lazy_greedy(FacilityLocation(sim), max_fl).order;
    }
    timings["fl_seconds"] = seconds_since(t0);
  }
  if (has("dispersion")) {
    if (n < 2) fail(ErrorCode::bad_budget, "dispersion needs at least two training items");
    const auto t0 = Clock::now();
    auto dist = euclidean_distance(train);
    disp_order = partition ? classwise_dispersion(dist, *partition, max_disp) : dispersion_greedy(dist, max_disp).order;
    timings["dispersion_seconds"] = seconds_since(t0);
  }

  std::string csv = "fraction,method,accuracy\n";
  json curve = json::array();
  for (double f : fractions) {
    for (const auto& m : opts.methods) {
      double acc = 0.0;
      std::size_t size = 0;
      if (m == "fl") {
        size = size_at(f, 1);
        acc = knn_accuracy(train, {fl_order.begin(), fl_order.begin() + static_cast<std::ptrdiff_t>(size)}, holdout, opts.k);
      } else if (m == "dispersion") {
        size = std::min(size_at(f, 2), disp_order.size());
        if (partition) {
          // Per-class quotas differ between budgets, so rerun at this size.
          auto dist = euclidean_distance(train);
          auto order = classwise_dispersion(dist, *partition, size);
          acc = knn_accuracy(train, order, holdout, opts.k);
        } else {
          acc = knn_accuracy(train, {disp_order.begin(), disp_order.begin() + static_cast<std::ptrdiff_t>(size)}, holdout, opts.k);
        }
      } else {
        size = size_at(f, 1);
        // Sum correct counts and divide once, so equal runs average exactly.
        const auto m = static_cast<double>(holdout.n());
        double correct = 0.0;
        for (std::size_t r = 0; r < opts.repeats; ++r) {
          auto sample = uniform_sample(n, size, derive_seed({global.rng_seed}, r));
          correct += std::round(knn_accuracy(train, sample, holdout, opts.k) * m);
        }
        acc = correct / (static_cast<double>(opts.repeats) * m);
      }
      csv += format_double(f) + "," + m + "," + format_double(acc) + "\n";
      curve.push_back({{"fraction", f}, {"method", m}, {"subset_size", size}, {"accuracy", acc}});
    }
  }
  write_file(fs::path(global.out) / "curve.csv", csv);

  std::vector<Index> all(n);
  std::iota(all.begin(), all.end(), Index{0});
  s["metrics"] = {{"curve", curve}, {"full_data_accuracy", knn_accuracy(train, all, holdout, opts.k)}};
  timings["total_seconds"] = seconds_since(start);
  write_summary(global, s, timings);
}

void run_fass(const GlobalOptions& global, FassOptions opts) {
  const auto start = Clock::now();
  auto pool = read_features(opts.pool);
  auto holdout = read_features(opts.holdout);
  pool.labels();
  holdout.labels();
  if (pool.d() != holdout.d()) fail(ErrorCode::invalid_dataset, "pool and holdout dimensions differ");

  auto& cfg = opts.config;
  cfg.seed = {global.rng_seed};
  cfg.measure = parse_enum<UncertaintyMeasure>(opts.measure, {{"least_confidence", UncertaintyMeasure::least_confidence},
                                                              {"margin", UncertaintyMeasure::margin},
                                                              {"entropy", UncertaintyMeasure::entropy}});
  cfg.classifier = parse_enum<ClassifierKind>(opts.classifier, {{"logreg", ClassifierKind::logreg}, {"knn", ClassifierKind::knn}});
  cfg.kernel = parse_enum<SelectionKernel>(opts.kernel, {{"cosine", SelectionKernel::cosine}, {"rbf", SelectionKernel::rbf}});
  std::vector<Arm> arms;
  for (const auto& a : opts.arms) {
    arms.push_back(parse_enum<Arm>(a, {{"fass-fl", Arm::fass_fl},
                                       {"fass-dispersion", Arm::fass_dispersion},
                                       {"uncertainty", Arm::uncertainty},
                                       {"random", Arm::random}}));
  }
  validate_config(cfg, pool.n(), pool.num_classes());

  json config{{"pool", opts.pool},
              {"holdout", opts.holdout},
              {"arms", opts.arms},
              {"batch_percent", cfg.batch_percent},
              {"beta_percent", cfg.beta_percent},
              {"rounds", cfg.rounds},
              {"seed_size", cfg.seed_size},
              {"measure", opts.measure},
              {"classifier", opts.classifier},
              {"knn_k", cfg.knn_k},
              {"kernel", opts.kernel},
              {"gamma", cfg.rbf_gamma},
              {"epochs", cfg.logreg.epochs},
              {"step", cfg.logreg.step},
              {"l2", cfg.logreg.l2}};
  auto s = summary("fass", global, config);
  s["kernel"] = opts.kernel;
  s["objective"] = "facility_location";
  s["budget"] = percent_floor(cfg.batch_percent, pool.n());
  s["class_names"] = class_names(pool);

  std::string csv = "arm,round,labeled_count,accuracy\n";
  json per_arm = json::object();
  json timings = json::object();
  for (Arm arm : arms) {
    auto run = fass_run(pool, holdout, cfg, arm);
    const auto name = to_string(arm);
    json rounds = json::array();
    double seconds = 0.0;
    for (const auto& rec : run.rounds) {
      csv += name + "," + std::to_string(rec.round) + "," + std::to_string(rec.labeled_count) + "," +
             format_double(rec.accuracy) + "\n";
      json ids = json::array();
      for (Index j : rec.selected) ids.push_back(pool.ids()[j]);
      rounds.push_back({{"round", rec.round},
                        {"labeled_count", rec.labeled_count},
                        {"accuracy", rec.accuracy},
                        {"filtered_size", rec.filtered.size()},
                        {"selected_ids", ids}});
      seconds += rec.seconds;
    }
    json seed_ids = json::array();
    for (Index j : run.seed) seed_ids.push_back(pool.ids()[j]);
    per_arm[name] = {{"seed_ids", seed_ids},
                     {"seed_accuracy", run.seed_accuracy},
                     {"auc", area_under_curve(run)},
                     {"final_accuracy", run.rounds.empty() ? run.seed_accuracy : run.rounds.back().accuracy},
                     {"rounds", rounds},
                     {"warnings", run.warnings}};
    timings[name + "_seconds"] = seconds;
  }
  write_file(fs::path(global.out) / "curve.csv", csv);
  s["metrics"] = {{"arms", per_arm}};
  timings["total_seconds"] = seconds_since(start);
  write_summary(global, s, timings);
}

void run_synth(const GlobalOptions& global, SynthOptions opts) {
  const auto start = Clock::now();
  opts.spec.rule = parse_enum<ClassRule>(opts.rule, {{"modulo", ClassRule::modulo}, {"block", ClassRule::block}});
  auto split = generate_synthetic_split(opts.spec, opts.holdout_points, {global.rng_seed});
  const bool binary = global.format == "bin";
  const auto format = binary ? FileFormat::binary : FileFormat::csv;
  const std::string ext = binary ? ".bin" : ".csv";
  const fs::path out(global.out);
  write_features(out / ("features" + ext), split.pool, format);
  if (opts.holdout_points > 0) write_features(out / ("holdout" + ext), split.holdout, format);

  const auto& sp = opts.spec;
  json config{{"clusters", sp.clusters},     {"points", sp.points_per_cluster}, {"dim", sp.dim},
              {"sigma", sp.sigma},           {"classes", sp.classes},           {"rule", opts.rule},
              {"redundancy", sp.redundancy}, {"spread", sp.center_spread},      {"offset", sp.offset},
              {"holdout_points", opts.holdout_points}};
  auto s = summary("synth", global, config);
  s["class_names"] = class_names(split.pool);
  s["metrics"] = {{"rows", split.pool.n()}, {"holdout_rows", split.holdout.n()}, {"dim", split.pool.d()}};
  write_summary(global, s, {{"total_seconds", seconds_since(start)}});
}

void run_kernel(const GlobalOptions& global, const KernelOptionsCli& opts) {
  const auto start = Clock::now();
  auto ds = read_features(opts.input);
  std::vector<double> values;
  if (opts.kernel == "euclidean") {
    auto m = euclidean_distance(ds);
    values.assign(m.values().begin(), m.values().end());
  } else if (opts.kernel == "cosine" || opts.kernel == "rbf") {
    auto m = similarity(ds, opts.kernel, opts.gamma);
    values.assign(m->values().begin(), m->values().end());
  } else {
    fail(ErrorCode::config_invalid, "unknown kernel '" + opts.kernel + "'");
  }

  const std::size_t n = ds.n();
  std::string csv = "id";
  for (const auto& id : ds.ids()) csv += "," + id;
  csv += "\n";
  for (Index i = 0; i < n; ++i) {
    csv += ds.ids()[i];
    for (Index j = 0; j < n; ++j) csv += "," + format_double(values[i * n + j]);
    csv += "\n";
  }
  write_file(fs::path(global.out) / "kernel.csv", csv);

  auto s = summary("kernel", global, {{"input", opts.input}, {"kernel", opts.kernel}, {"gamma", opts.gamma}});
  s["kernel"] = opts.kernel;
  s["class_names"] = class_names(ds);
  s["metrics"] = {{"rows", n}};
  write_summary(global, s, {{"total_seconds", seconds_since(start)}});
}

}  // namespace subsel::cli
