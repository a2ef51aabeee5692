#include "cbce/sleeping_cb.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cbce {

ExpertId SleepingCb::add_experts(std::size_t count, double prior_weight) {
  if (!(prior_weight > 0.0) || !std::isfinite(prior_weight)) {
    throw std::domain_error("prior weight must be positive and finite");
  }
  const ExpertId first = bettors_.size();
  bettors_.resize(first + count);
  prior_.resize(first + count, prior_weight);
  retired_.resize(first + count, 0);
  prior_total_ += prior_weight * static_cast<double>(count);
  return first;
}

void SleepingCb::retire(ExpertId id) { retired_.at(id) = 1; }

void SleepingCb::check_awake(std::span<const ExpertId> awake) const {
  if (awake.empty()) throw std::domain_error("sleeping CB: awake set is empty");
  for (ExpertId id : awake) {
    if (id >= bettors_.size()) {
      throw std::domain_error("sleeping CB: unknown expert " + std::to_string(id));
    }
    if (retired_[id]) {
      throw std::domain_error("sleeping CB: expert " + std::to_string(id) + " is retired");
    }
  }
}

std::vector<double> SleepingCb::decide(std::span<const ExpertId> awake) const {
  std::vector<double> out;
  decide_into(awake, out);
  return out;
}

void SleepingCb::decide_into(std::span<const ExpertId> awake, std::vector<double>& out) const {
  check_awake(awake);
  out.resize(awake.size());
  double total = 0.0;
  for (std::size_t k = 0; k < awake.size(); ++k) {
    const ExpertId id = awake[k];
    const double w = bet_amount(bettors_[id], params_);
    out[k] = w > 0.0 ? prior_[id] * w : 0.0;
    total += out[k];
  }
  if (total > 0.0) {
    for (double& p : out) p /= total;
    return;
  }
  // Every awake bet is non-positive: fall back to the prior on the awake set.
  total = 0.0;
  for (std::size_t k = 0; k < awake.size(); ++k) {
    out[k] = prior_[awake[k]];
    total += out[k];
  }
  for (double& p : out) p /= total;
}

UpdateSummary SleepingCb::update(std::span<const ExpertId> awake, std::span<const double> losses,
                                 double learner_loss) {
  check_awake(awake);
  if (losses.size() != awake.size()) {
    throw std::domain_error("sleeping CB: one loss per awake expert required");
  }
  if (!(learner_loss >= 0.0 && learner_loss <= 1.0)) {
    throw std::domain_error("sleeping CB: learner loss outside [0, 1]");
  }
  for (double l : losses) {
    if (!(l >= 0.0 && l <= 1.0)) throw std::domain_error("sleeping CB: loss outside [0, 1]");
  }
  UpdateSummary summary;
  for (std::size_t k = 0; k < awake.size(); ++k) {
    BettorState& b = bettors_[awake[k]];
    b.w = bet_amount(b, params_);
    double coin = learner_loss - losses[k];
    if (b.w <= 0.0 && coin < 0.0) coin = 0.0;
    summary.prior_weighted_gain += prior_[awake[k]] * coin * b.w;
    b.z += coin;
    b.wealth += coin * b.w;
    b.s += 1;
  }
  summary.prior_weighted_gain /= prior_total_;
  ++rounds_;
  return summary;
}

double sleeping_cb_regret_bound(std::span<const double> u, std::span<const double> s_values,
                        std::span<const double> prior, std::int64_t horizon) {
  if (u.size() != s_values.size() || u.size() != prior.size()) {
    throw std::domain_error("sleeping_cb_regret_bound: size mismatch");
  }
  if (horizon < 1) throw std::domain_error("sleeping_cb_regret_bound: horizon must be >= 1");
  const double prior_total = std::accumulate(prior.begin(), prior.end(), 0.0);
  double weighted_s = 0.0;
  double kl = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < 0.0) throw std::domain_error("sleeping_cb_regret_bound: negative comparator weight");
    if (u[i] == 0.0) continue;
    if (!(prior[i] > 0.0)) throw std::domain_error("sleeping_cb_regret_bound: infinite KL divergence");
    weighted_s += u[i] * s_values[i];
    kl += u[i] * std::log(u[i] / (prior[i] / prior_total));
  }
  return std::sqrt(2.0 * weighted_s * (kl + 0.5 * std::log(static_cast<double>(horizon)) + 2.0));
}

}  // namespace cbce
