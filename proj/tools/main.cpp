#include <omp.h>

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>

#include "commands.hpp"
#include "subsel/version.hpp"

using namespace subsel;
using namespace subsel::cli;

namespace {

int report(std::string_view code, const std::string& message, int exit_code) {
  nlohmann::json err{{"error", code}, {"message", message}, {"exit_code", exit_code}};
  std::cerr << err.dump() << "\n";
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data subset selection and diversified active learning"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--rng-seed", global.rng_seed, "Seed for every random stream");
  app.add_option("--format", global.format, "Feature file format written by synth")
      ->check(CLI::IsMember({"csv", "bin"}));
  app.add_option("--out", global.out, "Output directory");
  app.add_option("--threads", global.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  app.add_flag("--timings", global.timings, "Record wall-clock timings in summary.json");

  SelectOptions sel;
  auto* select = app.add_subcommand("select", "Pick a subset maximizing an objective");
  select->add_option("--input", sel.input, "Feature file")->required();
  select->add_option("--kernel", sel.kernel, "Similarity kernel")->check(CLI::IsMember({"cosine", "rbf"}));
  select->add_option("--gamma", sel.gamma, "RBF bandwidth");
  select->add_option("--objective", sel.objective, "Objective")
      ->check(CLI::IsMember({"fl", "sparse-fl", "dispersion", "mixture"}));
  select->add_option("--k", sel.k, "Budget")->required();
  select->add_flag("--label-aware", sel.label_aware, "Sum the objective over classes");
  select->add_option("--neighbors", sel.neighbors, "Neighbors kept by sparse-fl");
  select->add_option("--lambda-fl", sel.lambda_fl, "Mixture weight of facility location");
  select->add_option("--lambda-disp", sel.lambda_disp, "Mixture weight of dispersion");
  select->add_option("--optimizer", sel.optimizer, "Greedy variant")->check(CLI::IsMember({"auto", "lazy", "naive"}));

  EvalKnnOptions knn;
  auto* eval = app.add_subcommand("eval-knn", "kNN accuracy of selected subsets versus random ones");
  eval->add_option("--train", knn.train, "Labeled training pool")->required();
  eval->add_option("--holdout", knn.holdout, "Labeled holdout set")->required();
  eval->add_option("--fractions", knn.fractions, "Percentages, start:stop:step or a comma list");
  eval->add_option("--methods", knn.methods, "Methods")->delimiter(',')->check(CLI::IsMember({"fl", "dispersion", "random"}));
  eval->add_option("--repeats", knn.repeats, "Random subsets averaged per fraction");
  eval->add_option("--k", knn.k, "Neighbors for kNN");
  eval->add_option("--kernel", knn.kernel, "Similarity kernel for fl")->check(CLI::IsMember({"cosine", "rbf"}));
  eval->add_option("--gamma", knn.gamma, "RBF bandwidth");
  eval->add_flag("--label-aware", knn.label_aware, "Select within each class");

  FassOptions fass;
  auto* fcmd = app.add_subcommand("fass", "Active learning with filtered submodular batches");
  fcmd->add_option("--pool", fass.pool, "Labeled pool (labels revealed on selection)")->required();
  fcmd->add_option("--holdout", fass.holdout, "Labeled holdout set")->required();
  fcmd->add_option("--arms", fass.arms, "Arms to run")
      ->delimiter(',')
      ->check(CLI::IsMember({"fass-fl", "fass-dispersion", "uncertainty", "random"}));
  fcmd->add_option("--batch", fass.config.batch_percent, "Batch size B, percent of the pool");
  fcmd->add_option("--beta", fass.config.beta_percent, "Filter size, percent of the unlabeled pool");
  fcmd->add_option("--rounds", fass.config.rounds, "Rounds T");
  fcmd->add_option("--seed-size", fass.config.seed_size, "Initial labeled items");
  fcmd->add_option("--measure", fass.measure, "Uncertainty measure")
      ->check(CLI::IsMember({"least_confidence", "margin", "entropy"}));
  fcmd->add_option("--classifier", fass.classifier, "Model")->check(CLI::IsMember({"logreg", "knn"}));
  fcmd->add_option("--knn-k", fass.config.knn_k, "Neighbors when the model is kNN");
  fcmd->add_option("--kernel", fass.kernel, "Similarity for fass-fl")->check(CLI::IsMember({"cosine", "rbf"}));
  fcmd->add_option("--gamma", fass.config.rbf_gamma, "RBF bandwidth");
  fcmd->add_option("--epochs", fass.config.logreg.epochs, "Logistic regression epochs");
  fcmd->add_option("--step", fass.config.logreg.step, "Logistic regression step size");
  fcmd->add_option("--l2", fass.config.logreg.l2, "Logistic regression L2 penalty");

  SynthOptions syn;
  auto* scmd = app.add_subcommand("synth", "Generate a Gaussian-mixture dataset");
  scmd->add_option("--clusters", syn.spec.clusters, "Clusters");
  scmd->add_option("--points", syn.spec.points_per_cluster, "Points per cluster");
  scmd->add_option("--dim", syn.spec.dim, "Dimension");
  scmd->add_option("--sigma", syn.spec.sigma, "Cluster standard deviation");
  scmd->add_option("--classes", syn.spec.classes, "Classes");
  scmd->add_option("--rule", syn.rule, "Cluster-to-class rule")->check(CLI::IsMember({"modulo", "block"}));
  scmd->add_option("--redundancy", syn.spec.redundancy, "Near-duplicate copies per point");
  scmd->add_option("--spread", syn.spec.center_spread, "Centers drawn from [-spread, spread]");
  scmd->add_option("--offset", syn.spec.offset, "Shift added to every coordinate");
  scmd->add_option("--holdout-points", syn.holdout_points, "Also write a holdout with this many points per cluster");

  KernelOptionsCli kern;
  auto* kcmd = app.add_subcommand("kernel", "Dump a similarity or distance matrix");
  kcmd->add_option("--input", kern.input, "Feature file")->required();
  kcmd->add_option("--kernel", kern.kernel, "Kernel")->check(CLI::IsMember({"cosine", "rbf", "euclidean"}));
  kcmd->add_option("--gamma", kern.gamma, "RBF bandwidth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("UsageError", e.what(), 2);
  }

  if (global.threads > 0) omp_set_num_threads(global.threads);
  try {
    if (*select) run_select(global, sel);
    if (*eval) run_eval_knn(global, knn);
    if (*fcmd) run_fass(global, fass);
    if (*scmd) run_synth(global, syn);
    if (*kcmd) run_kernel(global, kern);
  } catch (const Error& e) {
    return report(to_string(e.code()), e.what(), is_validation_error(e.code()) ? 2 : 3);
  } catch (const std::exception& e) {
    return report("InternalError", e.what(), 3);
  }
  return 0;
}
