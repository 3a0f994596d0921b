#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "subsel/dataset.hpp"
#include "subsel/kernels.hpp"

namespace subsel {

inline constexpr double kDispersionSentinel = std::numeric_limits<double>::infinity();

/// Counts kernel entries read, to compare memoized and naive gain costs.
struct OpCounter {
  std::uint64_t entries = 0;
};

// ---------------------------------------------------------------------------
// Facility location: f(X) = sum_i max_{j in X} s_ij, f(empty) = 0.

/// Running maxima m_i = max_{k in X} s_ik (0 for the empty set).
struct FLPrecompute {
  std::vector<double> max_sim;
  std::vector<char> selected;

  static FLPrecompute empty(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<char>(n, 0)}; }
};

double fl_evaluate(const SimilarityMatrix& sim, std::span<const Index> subset,
                   OpCounter* counter = nullptr);
/// sum_i max(m_i, s_ij) - m_i, accumulated in ascending i.
double fl_gain(const SimilarityMatrix& sim, const FLPrecompute& pre, Index j,
               OpCounter* counter = nullptr);
void fl_update(FLPrecompute& pre, const SimilarityMatrix& sim, Index j);

/// Missing edges count as similarity 0; an item in X always covers itself (s_ii = 1).
double fl_evaluate_sparse(const SparseSimilarityGraph& graph, std::span<const Index> subset);

// ---------------------------------------------------------------------------
// Dispersion (disparity-min): f(X) = min_{k != l in X} d_kl, +inf below two items.

struct DispPrecompute {
  double current_min = kDispersionSentinel;
  std::vector<Index> members;
  std::vector<char> selected;

  static DispPrecompute empty(std::size_t n) { return {kDispersionSentinel, {}, std::vector<char>(n, 0)}; }
};

/// Marginal change under the sentinel convention: 0 while the value stays at
/// the sentinel, the new value when it first becomes finite, the plain
/// difference afterwards.
double dispersion_difference(double before, double after);

double disp_evaluate(const DistanceMatrix& dist, std::span<const Index> subset);
double disp_gain(const DistanceMatrix& dist, const DispPrecompute& pre, Index j);
void disp_update(DispPrecompute& pre, const DistanceMatrix& dist, Index j);

/// lambda_fl * fl_gain + lambda_disp * disp_gain.
double mixture_gain(double lambda_fl, double lambda_disp, const SimilarityMatrix& sim,
                    const DistanceMatrix& dist, const FLPrecompute& fl, const DispPrecompute& disp,
                    Index j);

// ---------------------------------------------------------------------------
// Polymorphic set functions for the optimizers.

/// Memoized selection state of one objective. gain() is pure and may be
/// called concurrently; add() needs exclusive access.
class ObjectiveState {
 public:
  explicit ObjectiveState(std::size_t n) : in_set_(n, 0) {}
  virtual ~ObjectiveState() = default;

  virtual double gain(Index j) const = 0;
  virtual void add(Index j) = 0;
  virtual double value() const = 0;

  bool contains(Index j) const { return in_set_[j] != 0; }
  const std::vector<Index>& selected() const { return order_; }
  std::size_t ground_size() const { return in_set_.size(); }

 protected:
  void check_candidate(Index j) const;
  void mark(Index j);

 private:
  std::vector<char> in_set_;
  std::vector<Index> order_;
};

class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t ground_size() const = 0;
  virtual bool submodular() const = 0;
  virtual std::string name() const = 0;
  /// Full evaluation from scratch.
  virtual double evaluate(std::span<const Index> subset) const = 0;
  /// f(X u {j}) - f(X) computed by two full evaluations (no memoization).
  virtual double naive_gain(std::span<const Index> subset, Index j) const;
  virtual std::unique_ptr<ObjectiveState> make_state() const = 0;
};

class FacilityLocation final : public Objective {
 public:
  explicit FacilityLocation(std::shared_ptr<const SimilarityMatrix> sim);

  std::size_t ground_size() const override { return sim_->n(); }
  bool submodular() const override { return true; }
  std::string name() const override { return "facility_location"; }
  double evaluate(std::span<const Index> subset) const override;
  std::unique_ptr<ObjectiveState> make_state() const override;

  const SimilarityMatrix& similarity() const { return *sim_; }

 private:
  std::shared_ptr<const SimilarityMatrix> sim_;
};

/// Facility location over a nearest-neighbor graph.
class SparseFacilityLocation final : public Objective {
 public:
  explicit SparseFacilityLocation(std::shared_ptr<const SparseSimilarityGraph> graph);

  std::size_t ground_size() const override { return graph_->n(); }
  bool submodular() const override { return true; }
  std::string name() const override { return "facility_location_sparse"; }
  double evaluate(std::span<const Index> subset) const override;
  std::unique_ptr<ObjectiveState> make_state() const override;

 private:
  class State;
  std::shared_ptr<const SparseSimilarityGraph> graph_;
  // reverse_[j]: every (i, s_ij) whose row i stores j, plus (j, 1), ascending i.
  std::vector<std::vector<Neighbor>> reverse_;
};

class Dispersion final : public Objective {
 public:
  explicit Dispersion(std::shared_ptr<const DistanceMatrix> dist);

  std::size_t ground_size() const override { return dist_->n(); }
  bool submodular() const override { return false; }
  std::string name() const override { return "dispersion"; }
  double evaluate(std::span<const Index> subset) const override;
  double naive_gain(std::span<const Index> subset, Index j) const override;
  std::unique_ptr<ObjectiveState> make_state() const override;

  const DistanceMatrix& distance() const { return *dist_; }

 private:
  std::shared_ptr<const DistanceMatrix> dist_;
};

/// lambda_fl * FL + lambda_disp * Dispersion. Submodular only when lambda_disp = 0.
class Mixture final : public Objective {
 public:
  Mixture(std::shared_ptr<const SimilarityMatrix> sim, std::shared_ptr<const DistanceMatrix> dist,
          double lambda_fl, double lambda_disp);

  std::size_t ground_size() const override { return sim_->n(); }
  bool submodular() const override { return lambda_disp_ == 0.0; }
  std::string name() const override { return "mixture"; }
  double evaluate(std::span<const Index> subset) const override;
  double naive_gain(std::span<const Index> subset, Index j) const override;
  std::unique_ptr<ObjectiveState> make_state() const override;

 private:
  class State;
  std::shared_ptr<const SimilarityMatrix> sim_;
  std::shared_ptr<const DistanceMatrix> dist_;
  double lambda_fl_;
  double lambda_disp_;
};

/// Sum over classes of the inner objective applied to X n V_c, where each
/// inner objective sees only V_c as its ground set.
class LabelAware final : public Objective {
 public:
  static LabelAware facility_location(const SimilarityMatrix& sim, const ClassPartition& partition);
  static LabelAware dispersion(const DistanceMatrix& dist, const ClassPartition& partition);

  std::size_t ground_size() const override { return owner_.size(); }
  bool submodular() const override;
  std::string name() const override;
  double evaluate(std::span<const Index> subset) const override;
  double naive_gain(std::span<const Index> subset, Index j) const override;
  std::unique_ptr<ObjectiveState> make_state() const override;

 private:
  class State;
  LabelAware(ClassPartition partition, std::vector<std::unique_ptr<Objective>> inner);
  /// Splits a global subset into per-class local index lists.
  std::vector<std::vector<Index>> split(std::span<const Index> subset) const;

  ClassPartition partition_;
  std::vector<std::shared_ptr<const Objective>> inner_;
  std::vector<std::size_t> owner_;  // class of each global item
  std::vector<Index> local_;        // position of each item inside its class
};

/// f(X) = sum_{j in X} w_j. Every cached bound stays exact under lazy greedy.
class Modular final : public Objective {
 public:
  explicit Modular(std::vector<double> weights);

  std::size_t ground_size() const override { return weights_.size(); }
  bool submodular() const override { return true; }
  std::string name() const override { return "modular"; }
  double evaluate(std::span<const Index> subset) const override;
  std::unique_ptr<ObjectiveState> make_state() const override;

 private:
  std::vector<double> weights_;
};

}  // namespace subsel
