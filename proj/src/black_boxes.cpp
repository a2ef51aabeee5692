#include "cbce/black_boxes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cbce {

namespace {

void check_weights(std::size_t n_decisions, std::span<const double> weights) {
  if (n_decisions == 0 || n_decisions != weights.size()) {
    throw std::domain_error("combine: need one weight per decision");
  }
}

}  // namespace

double linear_loss(std::span<const double> losses, std::span<const double> p) {
  if (losses.size() != p.size()) throw std::domain_error("linear loss: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(losses[i] >= 0.0 && losses[i] <= 1.0)) {
      throw std::domain_error("linear loss: expert loss outside [0, 1]");
    }
    acc += losses[i] * p[i];
  }
  return std::clamp(acc, 0.0, 1.0);
}

std::vector<double> warm_start_prior(std::span<const double> hint, double floor) {
  std::vector<double> out(hint.begin(), hint.end());
  double total = 0.0;
  for (double& v : out) {
    if (!std::isfinite(v)) throw std::domain_error("warm start: non-finite hint");
    v = std::max(v, floor);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

LeaLearner::LeaLearner(std::size_t n_experts, const Decision* hint, KtPotentialParams params)
    : engine_(params), all_(n_experts) {
  if (n_experts == 0) throw std::domain_error("LEA learner needs at least one expert");
  std::iota(all_.begin(), all_.end(), ExpertId{0});
  if (hint != nullptr) {
    if (hint->size() != n_experts) throw std::domain_error("warm start: hint has wrong size");
    for (double w : warm_start_prior(*hint)) engine_.add_expert(w);
  } else {
    engine_.add_experts(n_experts, 1.0);
  }
  engine_.decide_into(all_, p_);
}

LeaLearner::Step LeaLearner::step(Round losses) {
  if (losses.size() != all_.size()) throw std::domain_error("LEA step: loss vector has wrong size");
  Step out{p_, linear_loss(losses, p_)};
  engine_.update(all_, losses, out.loss);
  engine_.decide_into(all_, p_);
  return out;
}

LeaFamily::Decision LeaFamily::combine(const std::vector<const Decision*>& ds,
                                       std::span<const double> weights) const {
  check_weights(ds.size(), weights);
  Decision out(ds.front()->size(), 0.0);
  for (std::size_t k = 0; k < ds.size(); ++k) {
    const double w = weights[k];
    if (w == 0.0) continue;
    const Decision& d = *ds[k];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * d[i];
  }
  return out;
}

// ---------------------------------------------------------------------------

Eigen::Index dimension(const FeasibleSet& set) {
  return std::visit(
      [](const auto& s) -> Eigen::Index {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BoxSet>) return s.lower.size();
        else return s.center.size();
      },
      set);
}

Eigen::VectorXd project(const FeasibleSet& set, const Eigen::VectorXd& x) {
  if (x.size() != dimension(set)) throw std::domain_error("project: dimension mismatch");
  return std::visit(
      [&](const auto& s) -> Eigen::VectorXd {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BoxSet>) {
          return x.cwiseMax(s.lower).cwiseMin(s.upper);
        } else {
          const Eigen::VectorXd d = x - s.center;
          const double n = d.norm();
          if (n <= s.radius) return x;
          return s.center + d * (s.radius / n);
        }
      },
      set);
}

bool contains(const FeasibleSet& set, const Eigen::VectorXd& x, double tol) {
  if (x.size() != dimension(set)) return false;
  return std::visit(
      [&](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, BoxSet>) {
          return ((x - s.lower).array() >= -tol).all() && ((s.upper - x).array() >= -tol).all();
        } else {
          return (x - s.center).norm() <= s.radius + tol;
        }
      },
      set);
}

OgdLearner::OgdLearner(FeasibleSet set, double diameter, double lipschitz, const Decision* hint)
    : set_(std::move(set)), diameter_(diameter), lipschitz_(lipschitz) {
  if (!(diameter_ > 0.0) || !(lipschitz_ > 0.0)) {
    throw std::domain_error("OGD: diameter and Lipschitz constant must be positive");
  }
  const Eigen::Index d = dimension(set_);
  x_ = project(set_, hint != nullptr ? *hint : Eigen::VectorXd::Zero(d));
}

const OgdLearner::Decision& OgdLearner::step(const Eigen::VectorXd& gradient) {
  return step(gradient, t_ + 1);
}

const OgdLearner::Decision& OgdLearner::step(const Eigen::VectorXd& gradient,
                                             std::int64_t t_local) {
  if (gradient.size() != x_.size()) throw std::domain_error("OGD: gradient dimension mismatch");
  if (t_local < 1) throw std::domain_error("OGD: local round must be >= 1");
  double eta = diameter_ / (lipschitz_ * std::sqrt(static_cast<double>(t_local)));
  const double gnorm = gradient.norm();
  if (gnorm > lipschitz_) {
    eta *= lipschitz_ / gnorm;
    ++clipped_;
  }
  x_ = project(set_, x_ - eta * gradient);
  t_ = t_local;
  return x_;
}

double OgdFamily::loss(const Round& r, const Decision& d) const {
  const double v = r.value(d);
  if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("OCO loss outside [0, 1]");
  return v;
}

OgdFamily::Decision OgdFamily::combine(const std::vector<const Decision*>& ds,
                                       std::span<const double> weights) const {
  check_weights(ds.size(), weights);
  Decision out = Decision::Zero(ds.front()->size());
  for (std::size_t k = 0; k < ds.size(); ++k) out += weights[k] * *ds[k];
  return out;
}

// ---------------------------------------------------------------------------

double trace_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

Eigen::MatrixXd soft_threshold_psd(const Eigen::MatrixXd& m, double level) {
  if (level < 0.0) throw std::domain_error("soft threshold: level must be >= 0");
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  const Eigen::VectorXd lam = (es.eigenvalues().array() - level).cwiseMax(0.0);
  const Eigen::MatrixXd& v = es.eigenvectors();
  Eigen::MatrixXd out = v * lam.asDiagonal() * v.transpose();
  return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m) { return soft_threshold_psd(m, 0.0); }

double metric_raw_loss(const MetricModel& model, const MetricPair& pair, double rho) {
  const Eigen::Index d = model.m.rows();
  if (model.m.cols() != d || pair.z1.size() != d || pair.z2.size() != d) {
    throw std::domain_error("metric loss: dimension mismatch");
  }
  const Eigen::VectorXd diff = pair.z1 - pair.z2;
  const double dist = diff.dot(model.m * diff);
  const double hinge = std::max(0.0, 1.0 - pair.y * (model.mu - dist));
  return hinge + rho * trace_norm(model.m);
}

double scale_and_cap_loss(double raw) {
  if (!(raw >= 0.0)) throw std::domain_error("scale_and_cap_loss: negative raw loss");
  return std::min(raw / 5.0, 1.0);
}

MetricLearner::MetricLearner(Eigen::Index dim, MetricParams params, const Decision* hint)
    : params_(params) {
  if (dim < 1) throw std::domain_error("metric learner: dimension must be >= 1");
  if (!(params_.rho >= 0.0) || !(params_.step > 0.0)) {
    throw std::domain_error("metric learner: need rho >= 0 and step > 0");
  }
  if (hint != nullptr) {
    if (hint->m.rows() != dim || hint->m.cols() != dim) {
      throw std::domain_error("warm start: hint matrix has wrong shape");
    }
    model_.m = project_psd(hint->m);
    model_.mu = hint->mu;
  } else {
    model_.m = Eigen::MatrixXd::Zero(dim, dim);
  }
}

double MetricLearner::step(const MetricPair& pair) {
  const double raw = metric_raw_loss(model_, pair, params_.rho);
  ++t_;
  const double eta = params_.step / std::sqrt(static_cast<double>(t_));
  const Eigen::VectorXd diff = pair.z1 - pair.z2;
  const double margin = pair.y * (model_.mu - diff.dot(model_.m * diff));
  // At the kink (margin == 1) the zero subgradient is used.
  if (margin < 1.0) {
    model_.m.noalias() -= (eta * pair.y) * diff * diff.transpose();
    model_.mu += eta * pair.y;
  }
  model_.m = soft_threshold_psd(model_.m, eta * params_.rho);
  return raw;
}

MetricFamily::Decision MetricFamily::combine(const std::vector<const Decision*>& ds,
                                             std::span<const double> weights) const {
  check_weights(ds.size(), weights);
  Decision out{Eigen::MatrixXd::Zero(ds.front()->m.rows(), ds.front()->m.cols()), 0.0};
  for (std::size_t k = 0; k < ds.size(); ++k) {
    if (weights[k] == 0.0) continue;
    out.m += weights[k] * ds[k]->m;
    out.mu += weights[k] * ds[k]->mu;
  }
  return out;
}

}  // namespace cbce
