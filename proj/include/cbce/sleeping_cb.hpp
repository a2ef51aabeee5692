#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cbce/coin_betting.hpp"

namespace cbce {

/// Dense handle of an expert registered with a SleepingCb engine.
using ExpertId = std::size_t;

/// Result of one SleepingCb::update call.
struct UpdateSummary {
  /// sum over awake i of prior_i * g_i * w_i with the prior normalized over
  /// all registered experts. Never positive when learner_loss is the
  /// p-weighted average of the expert losses.
  double prior_weighted_gain = 0.0;
};

/// Sleeping coin betting with the KT potential.
///
/// Experts are registered online with an unnormalized positive prior
/// weight. At each round the caller names the awake experts; decide()
/// returns a probability vector aligned with that list (zero mass on every
/// sleeping expert by construction) and update() feeds back the losses.
///
/// Each expert bets with its own clock S (one plus its awake-round count),
/// so the betting fraction of expert i is z_i / (S_i + delta).
class SleepingCb {
 public:
  explicit SleepingCb(KtPotentialParams params = {}) : params_(params) {}

  /// Registers `count` experts sharing one prior weight; returns the first id.
  ExpertId add_experts(std::size_t count, double prior_weight = 1.0);
  ExpertId add_expert(double prior_weight = 1.0) { return add_experts(1, prior_weight); }

  /// Marks an expert as permanently asleep. Its state stays readable.
  void retire(ExpertId id);
  bool retired(ExpertId id) const { return retired_.at(id); }

  /// Probability vector over `awake`, in the same order.
  /// Throws std::domain_error on an empty or unknown awake set.
  std::vector<double> decide(std::span<const ExpertId> awake) const;
  void decide_into(std::span<const ExpertId> awake, std::vector<double>& out) const;

  /// Feeds back the losses of the awake experts (aligned with `awake`) and
  /// the learner loss used to form the coins. All losses must lie in [0, 1].
  UpdateSummary update(std::span<const ExpertId> awake, std::span<const double> losses,
                       double learner_loss);

  std::size_t size() const { return bettors_.size(); }
  const BettorState& bettor(ExpertId id) const { return bettors_.at(id); }
  double prior(ExpertId id) const { return prior_.at(id); }
  std::span<const double> priors() const { return prior_; }
  /// Number of completed update() calls.
  std::int64_t rounds() const { return rounds_; }
  KtPotentialParams params() const { return params_; }

 private:
  void check_awake(std::span<const ExpertId> awake) const;

  KtPotentialParams params_;
  std::vector<BettorState> bettors_;
  std::vector<double> prior_;
  std::vector<char> retired_;
  double prior_total_ = 0.0;
  std::int64_t rounds_ = 0;
};

/// Sleeping-CB regret bound with the KT potential and delta = 0:
/// sqrt(2 * (sum_i u_i S_i) * (KL(u || prior) + ln(T)/2 + 2)).
/// `prior` is normalized here. Throws std::domain_error when u puts mass on
/// an expert with zero prior, or when sizes disagree.
double sleeping_cb_regret_bound(std::span<const double> u, std::span<const double> s_values,
                        std::span<const double> prior, std::int64_t horizon);

}  // namespace cbce
