#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cbce/interval.hpp"
#include "cbce/sleeping_cb.hpp"

namespace cbce {

using RunId = std::uint64_t;

enum class PriorMode { StartDecay, Uniform };

/// Unnormalized prior weight 1 / (start^2 (1 + floor(log2 start))) of a run
/// beginning at `start`.
double start_decay_prior_weight(Time start);

/// sqrt(|J| (7 ln J_2 + 5)): meta-regret bound of CBCE on a schedule
/// interval with the decaying prior and delta = 0.
double cbce_meta_regret_bound(const Interval& j);

/// (4 / (2^alpha - 1)) c |I|^alpha + 8 sqrt(|I| (7 ln I_2 + 5)) for a
/// black box whose regret over T rounds is at most c T^alpha.
/// Throws std::domain_error unless 0 < alpha < 1.
double cbce_sa_regret_bound(const Interval& i, double c, double alpha);

/// Combines black-box runs with Sleeping CB; each run is one expert, awake
/// exactly on its interval.
class CbceAggregator {
 public:
  explicit CbceAggregator(PriorMode mode = PriorMode::Uniform, KtPotentialParams params = {})
      : mode_(mode), engine_(params) {}

  RunId add_run(const Interval& j);
  void retire(RunId id) { engine_.retire(id); }
  void weights(std::span<const RunId> ids, std::vector<double>& out) const {
    engine_.decide_into(ids, out);
  }
  void update(std::span<const RunId> ids, std::span<const double> losses, double learner_loss) {
    engine_.update(ids, losses, learner_loss);
  }

  PriorMode prior_mode() const { return mode_; }
  const SleepingCb& engine() const { return engine_; }

 private:
  PriorMode mode_;
  SleepingCb engine_;
};

/// Multiplicative weights over intervals (SAOL). A run on J uses rate
/// eta_J = min(1/2, 1/sqrt|J|), starts with weight eta_J and is updated as
/// w <- max(0, w (1 + eta_J (learner_loss - run_loss))).
class SaolAggregator {
 public:
  RunId add_run(const Interval& j);
  void retire(RunId id) { retired_.at(id) = 1; }
  /// Weights normalized over `ids`; uniform when they are all zero.
  void weights(std::span<const RunId> ids, std::vector<double>& out) const;
  void update(std::span<const RunId> ids, std::span<const double> losses, double learner_loss);

  double rate(RunId id) const { return eta_.at(id); }
  double raw_weight(RunId id) const { return w_.at(id); }

 private:
  std::vector<double> eta_;
  std::vector<double> w_;
  std::vector<char> retired_;
};

/// Loss of one awake run at one round, with its meta weight.
struct RunRecord {
  RunId run_id = 0;
  Interval interval;
  double loss = 0.0;
  double weight = 0.0;
};

template <class Decision>
struct MetaStep {
  Decision decision;
  double loss = 0.0;
  std::vector<RunRecord> runs;
};

/// Restarts a black-box learner on every interval of a schedule and
/// combines the live runs with `Aggregator`.
///
/// `Family` supplies make(hint), loss(round, decision) and
/// combine(decisions, weights) for one black-box learner type. Runs born
/// at t >= 2 are warm-started from the previous combined decision when
/// `warm_start` is set. A run is dropped as soon as its interval ends.
///
/// Decisions are weighted averages, which keeps the meta loss below the
/// weighted run losses for convex losses. Randomized selection of a run
/// (for nonconvex losses) is not implemented.
template <class Family, class Aggregator>
class IntervalMeta {
 public:
  using Learner = typename Family::Learner;
  using Decision = typename Family::Decision;
  using Round = typename Family::Round;

  IntervalMeta(Family family, Schedule schedule, Aggregator aggregator, bool warm_start = true)
      : family_(std::move(family)),
        schedule_(schedule),
        aggregator_(std::move(aggregator)),
        warm_start_(warm_start) {}

  MetaStep<Decision> step(const Round& round) {
    const Time t = t_ + 1;
    std::erase_if(runs_, [&](const Run& r) {
      if (r.interval.end >= t) return false;
      aggregator_.retire(r.id);
      return true;
    });
    for (const Interval& j : schedule_.starting_at(t)) {
      const Decision* hint = (warm_start_ && previous_) ? &*previous_ : nullptr;
      const RunId id = aggregator_.add_run(j);
      runs_.push_back(Run{id, j, family_.make(hint)});
    }

    ids_.clear();
    decisions_.clear();
    for (const Run& r : runs_) {
      ids_.push_back(r.id);
      decisions_.push_back(&r.learner.decision());
    }
    aggregator_.weights(ids_, weights_);

    MetaStep<Decision> out;
    out.decision = family_.combine(decisions_, weights_);
    out.loss = family_.loss(round, out.decision);
    run_losses_.resize(runs_.size());
    out.runs.reserve(runs_.size());
    for (std::size_t k = 0; k < runs_.size(); ++k) {
      run_losses_[k] = family_.loss(round, *decisions_[k]);
      out.runs.push_back(RunRecord{runs_[k].id, runs_[k].interval, run_losses_[k], weights_[k]});
    }
    aggregator_.update(ids_, run_losses_, out.loss);
    for (Run& r : runs_) r.learner.observe(round);

    previous_ = out.decision;
    t_ = t;
    return out;
  }

  /// Rounds played so far.
  Time time() const { return t_; }
  std::size_t live_runs() const { return runs_.size(); }
  const Schedule& schedule() const { return schedule_; }
  const Aggregator& aggregator() const { return aggregator_; }
  const Family& family() const { return family_; }
  const std::optional<Decision>& last_decision() const { return previous_; }

 private:
  struct Run {
    RunId id;
    Interval interval;
    Learner learner;
  };

  Family family_;
  Schedule schedule_;
  Aggregator aggregator_;
  bool warm_start_;
  std::vector<Run> runs_;
  std::optional<Decision> previous_;
  Time t_ = 0;

  std::vector<RunId> ids_;
  std::vector<const Decision*> decisions_;
  std::vector<double> weights_;
  std::vector<double> run_losses_;
};

template <class Family>
using Cbce = IntervalMeta<Family, CbceAggregator>;

template <class Family>
using Saol = IntervalMeta<Family, SaolAggregator>;

template <class Family>
Cbce<Family> make_cbce(Family family, Schedule schedule, PriorMode mode = PriorMode::Uniform,
                       bool warm_start = true, KtPotentialParams params = {}) {
  return Cbce<Family>(std::move(family), schedule, CbceAggregator(mode, params), warm_start);
}

template <class Family>
Saol<Family> make_saol(Family family, Schedule schedule, bool warm_start = true) {
  return Saol<Family>(std::move(family), schedule, SaolAggregator{}, warm_start);
}

/// Fixed Share over N experts: exponential weights followed by sharing a
/// fraction alpha of each expert's weight uniformly among the others.
struct FixedShareParams {
  double eta = 0.0;
  double alpha = 0.0;

  /// alpha = m / (T - 1), eta = sqrt((2 / T) ((m + 1) ln N + (T - 1) H(alpha)))
  /// with H the binary entropy in nats.
  static FixedShareParams tuned(std::size_t n_experts, Time horizon, Time switches);
};

class FixedShare {
 public:
  FixedShare(std::size_t n_experts, FixedShareParams params);

  struct Step {
    std::vector<double> decision;
    double loss = 0.0;
  };

  Step step(std::span<const double> losses);
  const std::vector<double>& decision() const { return w_; }
  const FixedShareParams& params() const { return params_; }

 private:
  FixedShareParams params_;
  std::vector<double> w_;
};

}  // namespace cbce
