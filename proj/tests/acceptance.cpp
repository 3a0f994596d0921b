// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "subsel/active_learning.hpp"
#include "subsel/io.hpp"
#include "subsel/optimizer.hpp"
#include "subsel/synth.hpp"

using namespace subsel;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("threw: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  failures += !out.pass;
  std::printf("%s [%d] %s: %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", id, title.c_str(), out.detail.c_str(), secs);
  std::fflush(stdout);
}

double seconds(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::shared_ptr<const SimilarityMatrix> shared_sim(const oracle::Matrix& m) {
  return std::make_shared<SimilarityMatrix>(oracle::to_similarity(m));
}

Outcome greedy_fl_bound() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  const double factor = 1.0 - std::exp(-1.0);
  int violations = 0;
  double worst = 1.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 11;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(4, n);
    auto m = oracle::random_similarity(n, rng);
    FacilityLocation f(shared_sim(m));
    const double greedy = naive_greedy(f, k).value();
    const double opt = oracle::best_over_subsets(n, k, [&](const oracle::Subset& x) { return oracle::facility_location(m, x); });
    worst = std::min(worst, greedy / opt);
    violations += greedy < factor * opt - 1e-12;
  }
  const double t = seconds(start);
  return {violations == 0 && t < 30.0, fmt("200 instances, %d violations, worst ratio %.4f, %.2fs", violations, worst, t)};
}

Outcome dispersion_bound() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1002);
  int violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + rng() % 10;
    const std::size_t k = 2 + rng() % std::min<std::size_t>(4, n - 1);
    auto m = oracle::random_metric(n, rng);
    const double greedy = dispersion_greedy(oracle::to_distance(m), k).value();
    const double opt = oracle::best_over_subsets(n, k, [&](const oracle::Subset& x) { return oracle::dispersion(m, x); });
    worst = std::min(worst, greedy / opt);
    violations += greedy < 0.5 * opt - 1e-12;
  }
  const double t = seconds(start);
  return {violations == 0 && t < 30.0, fmt("100 instances, %d violations, worst ratio %.4f, %.2fs", violations, worst, t)};
}

Outcome lazy_equals_naive() {
  std::mt19937_64 rng(1003);
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 1 + rng() % 20;
    const std::size_t n = k + rng() % (201 - k);
    FacilityLocation f(shared_sim(oracle::random_similarity(n, rng)));
    mismatches += naive_greedy(f, k).order != lazy_greedy(f, k).order;
  }
  FacilityLocation big(shared_sim(oracle::random_similarity(2000, rng)));
  GreedyStats naive_stats, lazy_stats;
  auto naive = naive_greedy(big, 50, &naive_stats);
  auto lazy = lazy_greedy(big, 50, &lazy_stats);
  const bool same_big = naive.order == lazy.order;
  return {mismatches == 0 && same_big && lazy_stats.gain_evaluations < naive_stats.gain_evaluations,
          fmt("100 instances, %d order mismatches; n=2000 k=50: lazy %llu vs naive %llu gain evaluations", mismatches,
              static_cast<unsigned long long>(lazy_stats.gain_evaluations),
              static_cast<unsigned long long>(naive_stats.gain_evaluations))};
}

Outcome memo_exactness() {
  std::mt19937_64 rng(1004);
  double worst[4] = {0, 0, 0, 0};
  auto pick_outside = [&](const oracle::Subset& x, std::size_t n) {
    std::vector<char> in(n, 0);
    for (auto j : x) in[j] = 1;
    Index j = rng() % n;
    while (in[j]) j = (j + 1) % n;
    return j;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 3 + rng() % 28;
    auto sm = oracle::random_similarity(n, rng);
    auto dm = oracle::random_metric(n, rng);
    auto s = shared_sim(sm);
    auto d = std::make_shared<DistanceMatrix>(oracle::to_distance(dm));
    auto x = oracle::random_subset(n, 0.4, rng);
    if (x.size() == n) x.pop_back();
    const Index j = pick_outside(x, n);
    auto xj = x;
    xj.push_back(j);

    oracle::Subset classes[3];
    std::vector<std::size_t> owner(n);
    for (Index i = 0; i < n; ++i) classes[owner[i] = rng() % 3].push_back(i);
    ClassPartition p;
    for (auto& c : classes) {
      if (!c.empty()) p.classes.push_back(c);
    }

    auto memo = [&](const Objective& f) {
      auto st = f.make_state();
      for (auto v : x) st->add(v);
      return st->gain(j);
    };
    auto disp_diff = [&](const oracle::Subset& a, const oracle::Subset& b) {
      return dispersion_difference(oracle::dispersion(dm, a), oracle::dispersion(dm, b));
    };
    auto label_aware = [&](const oracle::Subset& sub) {
      double total = 0.0;
      for (const auto& cls : p.classes) {
        oracle::Subset inside;
        for (auto v : sub) {
          if (std::find(cls.begin(), cls.end(), v) != cls.end()) inside.push_back(v);
        }
        total += oracle::facility_location_on(sm, cls, inside);
      }
      return total;
    };

    const double fl_expect = oracle::facility_location(sm, xj) - oracle::facility_location(sm, x);
    worst[0] = std::max(worst[0], std::abs(memo(FacilityLocation(s)) - fl_expect));
    worst[1] = std::max(worst[1], std::abs(memo(Dispersion(d)) - disp_diff(x, xj)));
    worst[2] = std::max(worst[2], std::abs(memo(LabelAware::facility_location(*s, p)) - (label_aware(xj) - label_aware(x))));
    const double l1 = 0.7, l2 = 0.3;
    worst[3] = std::max(worst[3], std::abs(memo(Mixture(s, d, l1, l2)) - (l1 * fl_expect + l2 * disp_diff(x, xj))));
  }
  const double w = *std::max_element(worst, worst + 4);
  return {w <= 1e-9, fmt("max |memo - evaluate difference|: FL %.1e, dispersion %.1e, label-aware %.1e, mixture %.1e",
                         worst[0], worst[1], worst[2], worst[3])};
}

Outcome uncertainty_formulas() {
  using UM = UncertaintyMeasure;
  std::vector<std::string> bad;
  auto expect = [&](std::vector<double> p, UM m, double want, double tol) {
    const double got = uncertainty(p, m);
    if (!(std::abs(got - want) <= tol)) bad.push_back(to_string(m) + fmt(" got %.17g want %.17g", got, want));
  };
  for (auto m : {UM::least_confidence, UM::margin, UM::entropy}) expect({1.0, 0.0}, m, 0.0, 0.0);
  expect({0.5, 0.5}, UM::least_confidence, 0.5, 0.0);
  expect({0.5, 0.5}, UM::margin, 1.0, 0.0);
  expect({0.5, 0.5}, UM::entropy, 1.0, 0.0);
  expect({0.7, 0.2, 0.1}, UM::least_confidence, 0.3, 1e-15);
  expect({0.7, 0.2, 0.1}, UM::margin, 0.5, 1e-15);
  expect({0.7, 0.2, 0.1}, UM::entropy, 1.1567796494470395, 1e-14);
  for (std::size_t c = 2; c <= 10; ++c) {
    expect(std::vector<double>(c, 1.0 / static_cast<double>(c)), UM::entropy, std::log2(static_cast<double>(c)), 1e-12);
  }
  return {bad.empty(), bad.empty() ? "tabulated cases and entropy(uniform, C) for C=2..10 match" : bad.front()};
}

Outcome filter_semantics() {
  std::mt19937_64 rng(1006);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    std::vector<double> scores(n);
    const bool coarse = trial % 2 == 0;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& s : scores) s = coarse ? static_cast<double>(rng() % 6) / 5.0 : u(rng);
    const double beta = 0.5 + u(rng) * 99.5;
    auto f = filter_uncertain(scores, beta);
    const auto quota = static_cast<std::size_t>(std::ceil(beta * static_cast<double>(n) / 100.0 - 1e-9));
    std::set<Index> in(f.begin(), f.end());
    double min_in = std::numeric_limits<double>::infinity();
    for (Index i : f) min_in = std::min(min_in, scores[i]);
    bool ok = f.size() >= std::max<std::size_t>(quota, 1) && in.size() == f.size();
    for (Index i = 0; i < n && ok; ++i) {
      if (!in.count(i) && scores[i] >= min_in) ok = false;
    }
    // Nothing beyond the quota unless it ties the last admitted score.
    std::vector<double> sorted;
    for (Index i : f) sorted.push_back(scores[i]);
    std::sort(sorted.rbegin(), sorted.rend());
    for (std::size_t t = std::max<std::size_t>(quota, 1); t < sorted.size() && ok; ++t) ok = sorted[t] == min_in;
    violations += !ok;
  }
  return {violations == 0, fmt("1000 score vectors, %d violations", violations)};
}

double knn_accuracy(const FeatureDataset& train, std::vector<Index> rows, const FeatureDataset& holdout) {
  std::sort(rows.begin(), rows.end());
  auto subset = train.subset(rows);
  return accuracy(knn_predict_proba(subset, holdout, std::min<std::size_t>(5, subset.n())), holdout);
}

Outcome knn_redundant_pool() {
  const auto start = std::chrono::steady_clock::now();
  SyntheticSpec spec{10, 10, 5, 1.0, 2, ClassRule::modulo, 5, 4.0, 0.0};
  auto data = generate_synthetic_split(spec, 100, {1});
  const auto& train = data.pool;
  const std::size_t n = train.n();

  auto sim = std::make_shared<SimilarityMatrix>(rbf_similarity(euclidean_distance(train), 0.5));
  auto order = lazy_greedy(FacilityLocation(sim), percent_floor(40, n)).order;
  std::vector<Index> all(n);
  std::iota(all.begin(), all.end(), Index{0});
  const double full = knn_accuracy(train, all, data.holdout);

  bool ok = true;
  std::string detail = fmt("n=%zu full=%.3f;", n, full);
  double fl40 = 0.0;
  for (double f : {10.0, 20.0, 30.0, 40.0}) {
    const std::size_t size = percent_floor(f, n);
    const double fl = knn_accuracy(train, {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(size)}, data.holdout);
    double random = 0.0;
    for (std::uint64_t r = 0; r < 20; ++r) {
      auto rng = make_rng(derive_seed({7}, r));
      auto perm = all;
      for (std::size_t t = 0; t < size; ++t) {
        std::uniform_int_distribution<std::size_t> pick(t, n - 1);
        std::swap(perm[t], perm[pick(rng)]);
      }
      random += knn_accuracy(train, {perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(size)}, data.holdout);
    }
    random /= 20.0;
    ok = ok && fl >= random;
    if (f == 40.0) fl40 = fl;
    detail += fmt(" %g%%: fl %.3f vs random %.3f", f, fl, random);
  }
  ok = ok && std::abs(fl40 - full) <= 0.02;
  const double t = seconds(start);
  ok = ok && t < 120.0;
  return {ok, detail + fmt("; |fl40 - full| = %.3f", std::abs(fl40 - full))};
}

Outcome fass_ordering() {
  const auto start = std::chrono::steady_clock::now();
  SyntheticSpec spec{4, 20, 30, 1.0, 2, ClassRule::modulo, 5, 0.8, 0.0};
  auto data = generate_synthetic_split(spec, 100, {1});
  FassConfig cfg;
  cfg.rounds = 10;
  cfg.batch_percent = 2;
  cfg.beta_percent = 10;
  cfg.seed_size = 20;
  cfg.kernel = SelectionKernel::rbf;
  cfg.rbf_gamma = 0.5;

  double auc_fl = 0.0, auc_unc = 0.0, auc_rand = 0.0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    cfg.seed = {s};
    auc_fl += area_under_curve(fass_run(data.pool, data.holdout, cfg, Arm::fass_fl)) / 10.0;
    auc_unc += area_under_curve(fass_run(data.pool, data.holdout, cfg, Arm::uncertainty)) / 10.0;
    auc_rand += area_under_curve(random_baseline_run(data.pool, data.holdout, cfg)) / 10.0;
  }
  const double t = seconds(start);
  const bool ok = auc_fl >= auc_unc && auc_unc >= auc_rand && auc_fl - auc_rand > 0.0 && t < 300.0;
  return {ok, fmt("n=%zu mean AUC fass-fl %.3f, uncertainty %.3f, random %.3f", data.pool.n(), auc_fl, auc_unc, auc_rand)};
}

Outcome gradient_check() {
  std::mt19937_64 rng(1009);
  auto data = generate_synthetic({3, 15, 4, 1.0, 3, ClassRule::modulo, 1, 2.0, 0.0}, {9});
  const std::size_t classes = 3, width = data.d() + 1;
  const double l2 = 0.05, h = 1e-5;
  std::normal_distribution<double> g(0.0, 0.5);
  double worst = 0.0;
  for (int point = 0; point < 20; ++point) {
    std::vector<double> w(classes * width);
    for (auto& v : w) v = g(rng);
    auto grad = logreg_gradient(data, w, classes, l2);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      auto up = w, down = w;
      up[k] += h;
      down[k] -= h;
      const double fd = (logreg_loss(data, up, classes, l2) - logreg_loss(data, down, classes, l2)) / (2 * h);
      num += (grad[k] - fd) * (grad[k] - fd);
      den += fd * fd;
    }
    worst = std::max(worst, std::sqrt(num / den));
  }
  return {worst <= 1e-5, fmt("20 points, worst relative error %.2e", worst)};
}

std::string slurp(const fs::path& p) { return read_file(p); }

bool same_tree(const fs::path& a, const fs::path& b, std::string& why) {
  std::set<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) names.insert(e.path().filename().string());
  std::set<std::string> other;
  for (const auto& e : fs::directory_iterator(b)) other.insert(e.path().filename().string());
  if (names != other || names.empty()) {
    why = "file lists differ in " + a.filename().string();
    return false;
  }
  for (const auto& n : names) {
    if (slurp(a / n) != slurp(b / n)) {
      why = n + " differs";
      return false;
    }
  }
  return true;
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "subsel_acceptance_cli";
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string cli = SUBSEL_CLI_PATH;
  auto run = [&](const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " 2>/dev/null";
    if (std::system(cmd.c_str()) != 0) throw std::runtime_error("command failed: " + args);
  };
  const std::string data = (root / "data").string();
  run("--out " + data + " --rng-seed 5 synth --clusters 4 --points 15 --redundancy 3 --dim 3 --holdout-points 10");
  const std::string pool = data + "/features.csv", holdout = data + "/holdout.csv";

  const std::vector<std::pair<std::string, std::string>> commands{
      {"synth", "synth --clusters 3 --points 20 --redundancy 2"},
      {"synth-bin", "--format bin synth --clusters 3 --points 20"},
      {"kernel", "kernel --input " + pool + " --kernel rbf --gamma 0.3"},
      {"select-fl", "select --input " + pool + " --k 12"},
      {"select-label-aware", "select --input " + pool + " --k 12 --label-aware --objective dispersion"},
      {"select-mixture", "select --input " + pool + " --k 8 --objective mixture --lambda-disp 0.5"},
      {"eval-knn", "eval-knn --train " + pool + " --holdout " + holdout + " --fractions 10:50:20 --repeats 5"},
      {"fass", "fass --pool " + pool + " --holdout " + holdout + " --rounds 3 --batch 5 --beta 20"},
  };
  for (const auto& [name, args] : commands) {
    // Thread count is varied on purpose: it may change speed, never bytes.
    run("--out " + (root / (name + "_a")).string() + " --threads 1 --rng-seed 11 " + args);
    run("--out " + (root / (name + "_b")).string() + " --threads 3 --rng-seed 11 " + args);
    std::string why;
    if (!same_tree(root / (name + "_a"), root / (name + "_b"), why)) return {false, name + ": " + why};
  }
  fs::remove_all(root);
  return {true, fmt("%zu command lines rerun, all outputs byte-identical", commands.size())};
}

}  // namespace

int main() {
  criterion(1, "greedy facility location within 1-1/e of optimum", greedy_fl_bound);
  criterion(2, "farthest-pair dispersion greedy within 1/2 of optimum", dispersion_bound);
  criterion(3, "lazy greedy reproduces naive greedy with fewer evaluations", lazy_equals_naive);
  criterion(4, "memoized gains equal evaluate differences", memo_exactness);
  criterion(5, "uncertainty formulas", uncertainty_formulas);
  criterion(6, "uncertainty filter quota, ties and dominance", filter_semantics);
  criterion(7, "kNN on FL subsets of a redundant pool", knn_redundant_pool);
  criterion(8, "FASS(FL) >= uncertainty >= random by AUC", fass_ordering);
  criterion(9, "logistic regression gradient vs finite differences", gradient_check);
  criterion(10, "CLI reruns are byte-identical", cli_determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
