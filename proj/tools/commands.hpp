#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subsel/active_learning.hpp"
#include "subsel/synth.hpp"

namespace subsel::cli {

struct GlobalOptions {
  std::uint64_t rng_seed = 0;
  std::string format = "csv";
  std::string out = ".";
  int threads = 0;
  bool timings = false;
};

struct SelectOptions {
  std::string input;
  std::string kernel = "cosine";
  double gamma = 1.0;
  std::string objective = "fl";
  std::size_t k = 0;
  bool label_aware = false;
  std::size_t neighbors = 10;
  double lambda_fl = 1.0;
  double lambda_disp = 1.0;
  std::string optimizer = "auto";
};

struct EvalKnnOptions {
  std::string train;
  std::string holdout;
  std::string fractions = "5:100:5";
  std::vector<std::string> methods{"fl", "dispersion", "random"};
  std::size_t repeats = 20;
  std::size_t k = 5;
  std::string kernel = "cosine";
  double gamma = 1.0;
  bool label_aware = false;
};

struct FassOptions {
  std::string pool;
  std::string holdout;
  std::vector<std::string> arms{"fass-fl", "fass-dispersion", "uncertainty", "random"};
  FassConfig config;
  std::string measure = "entropy";
  std::string classifier = "logreg";
  std::string kernel = "cosine";
};

struct SynthOptions {
  SyntheticSpec spec;
  std::string rule = "modulo";
  std::size_t holdout_points = 0;
};

struct KernelOptionsCli {
  std::string input;
  std::string kernel = "cosine";
  double gamma = 1.0;
};

void run_select(const GlobalOptions& global, const SelectOptions& opts);
void run_eval_knn(const GlobalOptions& global, const EvalKnnOptions& opts);
void run_fass(const GlobalOptions& global, FassOptions opts);
void run_synth(const GlobalOptions& global, SynthOptions opts);
void run_kernel(const GlobalOptions& global, const KernelOptionsCli& opts);

/// "a:b:s" (inclusive range) or a comma list of percentages in (0, 100].
std::vector<double> parse_fractions(const std::string& text);

/// Splits `k` over classes proportionally to their sizes (largest remainder,
/// ties to the smaller class), never exceeding a class's size.
std::vector<std::size_t> proportional_budget(const std::vector<std::size_t>& sizes, std::size_t k);

}  // namespace subsel::cli
