#include "cbce/meta.hpp"

#include <cmath>

#include "cbce/black_boxes.hpp"

namespace cbce {

double start_decay_prior_weight(Time start) {
  if (start < 1) throw std::domain_error("prior: start must be >= 1");
  const double s = static_cast<double>(start);
  return 1.0 / (s * s * (1.0 + floor_log2(start)));
}

double cbce_meta_regret_bound(const Interval& j) {
  return std::sqrt(static_cast<double>(j.length()) *
                   (7.0 * std::log(static_cast<double>(j.end)) + 5.0));
}

double cbce_sa_regret_bound(const Interval& i, double c, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("SA bound: alpha must be in (0, 1)");
  const double len = static_cast<double>(i.length());
  return 4.0 / (std::pow(2.0, alpha) - 1.0) * c * std::pow(len, alpha) +
         8.0 * cbce_meta_regret_bound(i);
}

RunId CbceAggregator::add_run(const Interval& j) {
  const double w = mode_ == PriorMode::StartDecay ? start_decay_prior_weight(j.start) : 1.0;
  return engine_.add_expert(w);
}

RunId SaolAggregator::add_run(const Interval& j) {
  const double eta = std::min(0.5, 1.0 / std::sqrt(static_cast<double>(j.length())));
  eta_.push_back(eta);
  w_.push_back(eta);
  retired_.push_back(0);
  return eta_.size() - 1;
}

void SaolAggregator::weights(std::span<const RunId> ids, std::vector<double>& out) const {
  if (ids.empty()) throw std::domain_error("SAOL: no active runs");
  out.resize(ids.size());
  double total = 0.0;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (retired_.at(ids[k])) throw std::domain_error("SAOL: run is retired");
    out[k] = w_[ids[k]];
    total += out[k];
  }
  if (total > 0.0) {
    for (double& p : out) p /= total;
  } else {
    std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(ids.size()));
  }
}

void SaolAggregator::update(std::span<const RunId> ids, std::span<const double> losses,
                            double learner_loss) {
  if (ids.size() != losses.size()) throw std::domain_error("SAOL: one loss per run required");
  if (!(learner_loss >= 0.0 && learner_loss <= 1.0)) {
    throw std::domain_error("SAOL: learner loss outside [0, 1]");
  }
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (!(losses[k] >= 0.0 && losses[k] <= 1.0)) throw std::domain_error("SAOL: loss outside [0, 1]");
    const RunId id = ids[k];
    w_[id] = std::max(0.0, w_[id] * (1.0 + eta_[id] * (learner_loss - losses[k])));
  }
}

FixedShareParams FixedShareParams::tuned(std::size_t n_experts, Time horizon, Time switches) {
  if (n_experts < 1) throw std::domain_error("fixed share: need at least one expert");
  if (horizon < 2) throw std::domain_error("fixed share: horizon must be >= 2");
  if (switches < 0 || switches >= horizon) throw std::domain_error("fixed share: need 0 <= m < T");
  const double t = static_cast<double>(horizon);
  const double m = static_cast<double>(switches);
  FixedShareParams p;
  p.alpha = m / (t - 1.0);
  const double h = (p.alpha <= 0.0 || p.alpha >= 1.0)
                       ? 0.0
                       : -p.alpha * std::log(p.alpha) - (1.0 - p.alpha) * std::log1p(-p.alpha);
  p.eta = std::sqrt(2.0 / t * ((m + 1.0) * std::log(static_cast<double>(n_experts)) +
                               (t - 1.0) * h));
  if (p.eta <= 0.0) p.eta = std::sqrt(2.0 / t);  // N = 1, m = 0: any positive rate is exact
  return p;
}

FixedShare::FixedShare(std::size_t n_experts, FixedShareParams params)
    : params_(params), w_(n_experts, n_experts ? 1.0 / static_cast<double>(n_experts) : 0.0) {
  if (n_experts < 1) throw std::domain_error("fixed share: need at least one expert");
  if (!(params_.eta > 0.0)) throw std::domain_error("fixed share: eta must be > 0");
  if (!(params_.alpha >= 0.0 && params_.alpha < 1.0)) {
    throw std::domain_error("fixed share: alpha must be in [0, 1)");
  }
}

FixedShare::Step FixedShare::step(std::span<const double> losses) {
  Step out{w_, linear_loss(losses, w_)};
  const std::size_t n = w_.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w_[i] *= std::exp(-params_.eta * losses[i]);
    total += w_[i];
  }
  if (n > 1 && params_.alpha > 0.0) {
    const double share = params_.alpha / static_cast<double>(n - 1);
    for (double& w : w_) w = (1.0 - params_.alpha) * w + share * (total - w);
    total = 0.0;
    for (double w : w_) total += w;
  }
  for (double& w : w_) w /= total;
  return out;
}

}  // namespace cbce
