#include "subsel/objectives.hpp"

#include <algorithm>
#include <cmath>

namespace subsel {
namespace {

void check_index(Index j, std::size_t n) {
  if (j >= n) {
    fail(ErrorCode::index_out_of_range,
         "index " + std::to_string(j) + " out of range for ground set of size " + std::to_string(n));
  }
}

void check_subset(std::span<const Index> subset, std::size_t n) {
  for (Index j : subset) check_index(j, n);
}

void check_not_selected(const std::vector<char>& selected, Index j) {
  check_index(j, selected.size());
  if (selected[j]) fail(ErrorCode::already_selected, "item " + std::to_string(j) + " already selected");
}

std::vector<Index> with_item(std::span<const Index> subset, Index j) {
  std::vector<Index> out(subset.begin(), subset.end());
  out.push_back(j);
  return out;
}

void check_weights(double lambda_fl, double lambda_disp) {
  if (!std::isfinite(lambda_fl) || !std::isfinite(lambda_disp) || lambda_fl < 0.0 ||
      lambda_disp < 0.0 || (lambda_fl == 0.0 && lambda_disp == 0.0)) {
    fail(ErrorCode::bad_weights, "mixture weights must be nonnegative and not both zero");
  }
}

}  // namespace

// -- facility location --------------------------------------------------------

double fl_evaluate(const SimilarityMatrix& sim, std::span<const Index> subset, OpCounter* counter) {
  check_subset(subset, sim.n());
  if (subset.empty()) return 0.0;
  double total = 0.0;
  for (Index i = 0; i < sim.n(); ++i) {
    auto si = sim.row(i);
    double best = 0.0;
    for (Index j : subset) best = std::max(best, si[j]);
    total += best;
  }
  if (counter) counter->entries += sim.n() * subset.size();
  return total;
}

double fl_gain(const SimilarityMatrix& sim, const FLPrecompute& pre, Index j, OpCounter* counter) {
  check_not_selected(pre.selected, j);
  // s is symmetric, so column j is read as row j.
  auto sj = sim.row(j);
  double gain = 0.0;
  for (Index i = 0; i < sim.n(); ++i) {
    double m = pre.max_sim[i];
    gain += std::max(m, sj[i]) - m;
  }
  if (counter) counter->entries += sim.n();
  return gain;
}

void fl_update(FLPrecompute& pre, const SimilarityMatrix& sim, Index j) {
  check_not_selected(pre.selected, j);
  auto sj = sim.row(j);
  for (Index i = 0; i < sim.n(); ++i) pre.max_sim[i] = std::max(pre.max_sim[i], sj[i]);
  pre.selected[j] = 1;
}

double fl_evaluate_sparse(const SparseSimilarityGraph& graph, std::span<const Index> subset) {
  check_subset(subset, graph.n());
  std::vector<char> in_set(graph.n(), 0);
  for (Index j : subset) in_set[j] = 1;
  double total = 0.0;
  for (Index i = 0; i < graph.n(); ++i) {
    if (in_set[i]) {
      total += 1.0;
      continue;
    }
    // Rows are sorted by descending similarity: the first hit is the max.
    for (const auto& nb : graph.row(i)) {
      if (in_set[nb.index]) {
        total += nb.similarity;
        break;
      }
    }
  }
  return total;
}

// -- dispersion ---------------------------------------------------------------

double dispersion_difference(double before, double after) {
  if (std::isinf(after)) return 0.0;
  if (std::isinf(before)) return after;
  return after - before;
}

double disp_evaluate(const DistanceMatrix& dist, std::span<const Index> subset) {
  check_subset(subset, dist.n());
  double best = kDispersionSentinel;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      if (subset[a] != subset[b]) best = std::min(best, dist(subset[a], subset[b]));
    }
  }
  return best;
}

double disp_gain(const DistanceMatrix& dist, const DispPrecompute& pre, Index j) {
  check_not_selected(pre.selected, j);
  double nearest = kDispersionSentinel;
  for (Index k : pre.members) nearest = std::min(nearest, dist(k, j));
  return dispersion_difference(pre.current_min, std::min(pre.current_min, nearest));
}

void disp_update(DispPrecompute& pre, const DistanceMatrix& dist, Index j) {
  check_not_selected(pre.selected, j);
  for (Index k : pre.members) pre.current_min = std::min(pre.current_min, dist(k, j));
  pre.members.push_back(j);
  pre.selected[j] = 1;
}

double mixture_gain(double lambda_fl, double lambda_disp, const SimilarityMatrix& sim,
                    const DistanceMatrix& dist, const FLPrecompute& fl, const DispPrecompute& disp,
                    Index j) {
  check_weights(lambda_fl, lambda_disp);
  double gain = 0.0;
  if (lambda_fl != 0.0) gain += lambda_fl * fl_gain(sim, fl, j);
  if (lambda_disp != 0.0) gain += lambda_disp * disp_gain(dist, disp, j);
  return gain;
}

// -- polymorphic objectives ---------------------------------------------------

void ObjectiveState::check_candidate(Index j) const {
  check_not_selected(in_set_, j);
}

void ObjectiveState::mark(Index j) {
  check_candidate(j);
  in_set_[j] = 1;
  order_.push_back(j);
}

double Objective::naive_gain(std::span<const Index> subset, Index j) const {
  auto grown = with_item(subset, j);
  return evaluate(grown) - evaluate(subset);
}

namespace {

class FLState final : public ObjectiveState {
 public:
  explicit FLState(const SimilarityMatrix& sim)
      : ObjectiveState(sim.n()), sim_(sim), pre_(FLPrecompute::empty(sim.n())) {}

  double gain(Index j) const override { return fl_gain(sim_, pre_, j); }
  void add(Index j) override {
    fl_update(pre_, sim_, j);
    mark(j);
    value_ = 0.0;
    for (double m : pre_.max_sim) value_ += m;
  }
  double value() const override { return value_; }

 private:
  const SimilarityMatrix& sim_;
  FLPrecompute pre_;
  double value_ = 0.0;
};

class DispState final : public ObjectiveState {
 public:
  explicit DispState(const DistanceMatrix& dist)
      : ObjectiveState(dist.n()), dist_(dist), pre_(DispPrecompute::empty(dist.n())) {}

  double gain(Index j) const override { return disp_gain(dist_, pre_, j); }
  void add(Index j) override {
    disp_update(pre_, dist_, j);
    mark(j);
  }
  double value() const override { return pre_.current_min; }

 private:
  const DistanceMatrix& dist_;
  DispPrecompute pre_;
};

class ModularState final : public ObjectiveState {
 public:
  explicit ModularState(const std::vector<double>& w) : ObjectiveState(w.size()), w_(w) {}

  double gain(Index j) const override {
    check_candidate(j);
    return w_[j];
  }
  void add(Index j) override {
    mark(j);
    value_ += w_[j];
  }
  double value() const override { return value_; }

 private:
  const std::vector<double>& w_;
  double value_ = 0.0;
};

}  // namespace

FacilityLocation::FacilityLocation(std::shared_ptr<const SimilarityMatrix> sim)
    : sim_(std::move(sim)) {}

double FacilityLocation::evaluate(std::span<const Index> subset) const {
  return fl_evaluate(*sim_, subset);
}

std::unique_ptr<ObjectiveState> FacilityLocation::make_state() const {
  return std::make_unique<FLState>(*sim_);
}

// Sparse FL keeps its own running maxima; a candidate only touches the rows
// that store it plus its own row.
class SparseFacilityLocation::State final : public ObjectiveState {
 public:
  explicit State(const SparseFacilityLocation& owner)
      : ObjectiveState(owner.ground_size()), owner_(owner), max_sim_(owner.ground_size(), 0.0) {}

  double gain(Index j) const override {
    check_candidate(j);
    double g = 0.0;
    for (const auto& e : owner_.reverse_[j]) g += std::max(max_sim_[e.index], e.similarity) - max_sim_[e.index];
    return g;
  }
  void add(Index j) override {
    check_candidate(j);
    for (const auto& e : owner_.reverse_[j]) max_sim_[e.index] = std::max(max_sim_[e.index], e.similarity);
    mark(j);
    value_ = 0.0;
    for (double m : max_sim_) value_ += m;
  }
  double value() const override { return value_; }

 private:
  const SparseFacilityLocation& owner_;
  std::vector<double> max_sim_;
  double value_ = 0.0;
};

SparseFacilityLocation::SparseFacilityLocation(std::shared_ptr<const SparseSimilarityGraph> graph)
    : graph_(std::move(graph)), reverse_(graph_->n()) {
  for (Index i = 0; i < graph_->n(); ++i) {
    reverse_[i].push_back({i, 1.0});
    for (const auto& nb : graph_->row(i)) reverse_[nb.index].push_back({i, nb.similarity});
  }
  for (auto& list : reverse_) {
    std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
  }
}

double SparseFacilityLocation::evaluate(std::span<const Index> subset) const {
  return fl_evaluate_sparse(*graph_, subset);
}

std::unique_ptr<ObjectiveState> SparseFacilityLocation::make_state() const {
  return std::make_unique<State>(*this);
}

Dispersion::Dispersion(std::shared_ptr<const DistanceMatrix> dist) : dist_(std::move(dist)) {}

double Dispersion::evaluate(std::span<const Index> subset) const {
  return disp_evaluate(*dist_, subset);
}

double Dispersion::naive_gain(std::span<const Index> subset, Index j) const {
  auto grown = with_item(subset, j);
  return dispersion_difference(evaluate(subset), evaluate(grown));
}

std::unique_ptr<ObjectiveState> Dispersion::make_state() const {
  return std::make_unique<DispState>(*dist_);
}

// -- mixture ------------------------------------------------------------------

class Mixture::State final : public ObjectiveState {
 public:
  explicit State(const Mixture& owner)
      : ObjectiveState(owner.ground_size()),
        owner_(owner),
        fl_(FLPrecompute::empty(owner.ground_size())),
        disp_(DispPrecompute::empty(owner.ground_size())) {}

  double gain(Index j) const override {
    return mixture_gain(owner_.lambda_fl_, owner_.lambda_disp_, *owner_.sim_, *owner_.dist_, fl_, disp_, j);
  }
  void add(Index j) override {
    check_candidate(j);
    fl_update(fl_, *owner_.sim_, j);
    disp_update(disp_, *owner_.dist_, j);
    mark(j);
  }
  double value() const override {
    double fl = 0.0;
    for (double m : fl_.max_sim) fl += m;
    double v = owner_.lambda_fl_ * fl;
    if (owner_.lambda_disp_ != 0.0) v += owner_.lambda_disp_ * disp_.current_min;
    return v;
  }

 private:
  const Mixture& owner_;
  FLPrecompute fl_;
  DispPrecompute disp_;
};

Mixture::Mixture(std::shared_ptr<const SimilarityMatrix> sim, std::shared_ptr<const DistanceMatrix> dist,
                 double lambda_fl, double lambda_disp)
    : sim_(std::move(sim)), dist_(std::move(dist)), lambda_fl_(lambda_fl), lambda_disp_(lambda_disp) {
  check_weights(lambda_fl, lambda_disp);
  if (sim_->n() != dist_->n()) {
    fail(ErrorCode::invalid_dataset, "similarity and distance matrices differ in size");
  }
}

double Mixture::evaluate(std::span<const Index> subset) const {
  double v = lambda_fl_ * fl_evaluate(*sim_, subset);
  if (lambda_disp_ != 0.0) v += lambda_disp_ * disp_evaluate(*dist_, subset);
  return v;
}

double Mixture::naive_gain(std::span<const Index> subset, Index j) const {
  auto grown = with_item(subset, j);
  double g = lambda_fl_ * (fl_evaluate(*sim_, grown) - fl_evaluate(*sim_, subset));
  if (lambda_disp_ != 0.0) {
    g += lambda_disp_ * dispersion_difference(disp_evaluate(*dist_, subset), disp_evaluate(*dist_, grown));
  }
  return g;
}

std::unique_ptr<ObjectiveState> Mixture::make_state() const {
  return std::make_unique<State>(*this);
}

// -- label-aware --------------------------------------------------------------

class LabelAware::State final : public ObjectiveState {
 public:
  explicit State(const LabelAware& owner) : ObjectiveState(owner.ground_size()), owner_(owner) {
    for (const auto& f : owner.inner_) inner_.push_back(f->make_state());
  }

  double gain(Index j) const override {
    check_candidate(j);
    return inner_[owner_.owner_[j]]->gain(owner_.local_[j]);
  }
  void add(Index j) override {
    check_candidate(j);
    inner_[owner_.owner_[j]]->add(owner_.local_[j]);
    mark(j);
  }
  double value() const override {
    double v = 0.0;
    for (const auto& s : inner_) v += s->value();
    return v;
  }

 private:
  const LabelAware& owner_;
  std::vector<std::unique_ptr<ObjectiveState>> inner_;
};

LabelAware::LabelAware(ClassPartition partition, std::vector<std::unique_ptr<Objective>> inner)
    : partition_(std::move(partition)) {
  std::size_t n = 0;
  for (const auto& cls : partition_.classes) n += cls.size();
  owner_.assign(n, partition_.size());
  local_.assign(n, 0);
  for (std::size_t c = 0; c < partition_.size(); ++c) {
    const auto& cls = partition_.classes[c];
    for (std::size_t a = 0; a < cls.size(); ++a) {
      if (cls[a] >= n || owner_[cls[a]] != partition_.size()) {
        fail(ErrorCode::invalid_dataset, "class partition is not a partition of 0..n-1");
      }
      owner_[cls[a]] = c;
      local_[cls[a]] = a;
    }
  }
  for (auto& f : inner) inner_.push_back(std::move(f));
}

LabelAware LabelAware::facility_location(const SimilarityMatrix& sim, const ClassPartition& partition) {
  std::vector<std::unique_ptr<Objective>> inner;
  for (const auto& cls : partition.classes) {
    inner.push_back(std::make_unique<FacilityLocation>(std::make_shared<SimilarityMatrix>(sim.restrict(cls))));
  }
  LabelAware out(partition, std::move(inner));
  if (out.ground_size() != sim.n()) fail(ErrorCode::invalid_dataset, "partition does not cover the kernel");
  return out;
}

LabelAware LabelAware::dispersion(const DistanceMatrix& dist, const ClassPartition& partition) {
  std::vector<std::unique_ptr<Objective>> inner;
  for (const auto& cls : partition.classes) {
    inner.push_back(std::make_unique<Dispersion>(std::make_shared<DistanceMatrix>(dist.restrict(cls))));
  }
  LabelAware out(partition, std::move(inner));
  if (out.ground_size() != dist.n()) fail(ErrorCode::invalid_dataset, "partition does not cover the kernel");
  return out;
}

bool LabelAware::submodular() const {
  return std::all_of(inner_.begin(), inner_.end(), [](const auto& f) { return f->submodular(); });
}

std::string LabelAware::name() const {
  return "label_aware(" + (inner_.empty() ? std::string("none") : inner_.front()->name()) + ")";
}

std::vector<std::vector<Index>> LabelAware::split(std::span<const Index> subset) const {
  check_subset(subset, ground_size());
  std::vector<std::vector<Index>> parts(partition_.size());
  for (Index j : subset) parts[owner_[j]].push_back(local_[j]);
  return parts;
}

double LabelAware::evaluate(std::span<const Index> subset) const {
  auto parts = split(subset);
  double v = 0.0;
  for (std::size_t c = 0; c < parts.size(); ++c) v += inner_[c]->evaluate(parts[c]);
  return v;
}

double LabelAware::naive_gain(std::span<const Index> subset, Index j) const {
  check_index(j, ground_size());
  auto parts = split(subset);
  return inner_[owner_[j]]->naive_gain(parts[owner_[j]], local_[j]);
}

std::unique_ptr<ObjectiveState> LabelAware::make_state() const {
  return std::make_unique<State>(*this);
}

// -- modular ------------------------------------------------------------------

Modular::Modular(std::vector<double> weights) : weights_(std::move(weights)) {}

double Modular::evaluate(std::span<const Index> subset) const {
  check_subset(subset, weights_.size());
  double v = 0.0;
  for (Index j : subset) v += weights_[j];
  return v;
}

std::unique_ptr<ObjectiveState> Modular::make_state() const {
  return std::make_unique<ModularState>(weights_);
}

}  // namespace subsel
