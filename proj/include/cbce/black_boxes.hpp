#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "cbce/sleeping_cb.hpp"

namespace cbce {

// ---------------------------------------------------------------------------
// Learning with expert advice: coin betting over N always-awake experts.

/// <losses, p>. Throws std::domain_error on size mismatch or a loss outside [0, 1].
double linear_loss(std::span<const double> losses, std::span<const double> p);

/// Turns a probability vector into a prior: entries floored at `floor`,
/// then renormalized.
std::vector<double> warm_start_prior(std::span<const double> hint, double floor = 1e-12);

class LeaLearner {
 public:
  using Decision = std::vector<double>;
  using Round = std::span<const double>;

  /// Uniform prior, or the floored and renormalized `hint` when given.
  explicit LeaLearner(std::size_t n_experts, const Decision* hint = nullptr,
                      KtPotentialParams params = {});

  struct Step {
    Decision decision;
    double loss = 0.0;
  };

  /// Plays the current decision against `losses`, then updates.
  Step step(Round losses);
  void observe(Round losses) { step(losses); }

  const Decision& decision() const { return p_; }
  std::size_t n_experts() const { return all_.size(); }
  const SleepingCb& engine() const { return engine_; }

 private:
  SleepingCb engine_;
  std::vector<ExpertId> all_;
  Decision p_;
};

struct LeaFamily {
  using Learner = LeaLearner;
  using Decision = LeaLearner::Decision;
  using Round = LeaLearner::Round;

  std::size_t n_experts = 0;
  KtPotentialParams params{};

  Learner make(const Decision* hint) const { return Learner(n_experts, hint, params); }
  double loss(Round r, const Decision& d) const { return linear_loss(r, d); }
  Decision combine(const std::vector<const Decision*>& ds, std::span<const double> weights) const;
};

// ---------------------------------------------------------------------------
// Online gradient descent over a box or a Euclidean ball.

struct BoxSet {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct BallSet {
  Eigen::VectorXd center;
  double radius = 1.0;
};

using FeasibleSet = std::variant<BoxSet, BallSet>;

Eigen::VectorXd project(const FeasibleSet& set, const Eigen::VectorXd& x);
bool contains(const FeasibleSet& set, const Eigen::VectorXd& x, double tol = 1e-12);
Eigen::Index dimension(const FeasibleSet& set);

/// A convex loss revealed to an OCO learner: value and a subgradient.
struct OcoRound {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> subgradient;
};

/// Projected gradient descent with step B / (G sqrt(t)), t counted from the
/// learner's own first round.
class OgdLearner {
 public:
  using Decision = Eigen::VectorXd;
  using Round = OcoRound;

  OgdLearner(FeasibleSet set, double diameter, double lipschitz, const Decision* hint = nullptr);

  /// x <- Proj(x - eta_t * gradient) at the learner's next local round.
  const Decision& step(const Eigen::VectorXd& gradient);
  /// Same, with an explicit local round index.
  const Decision& step(const Eigen::VectorXd& gradient, std::int64_t t_local);
  void observe(const Round& r) { step(r.subgradient(x_)); }

  const Decision& decision() const { return x_; }
  std::int64_t rounds() const { return t_; }
  /// Steps whose gradient exceeded the Lipschitz constant and was rescaled.
  std::int64_t clipped_steps() const { return clipped_; }
  const FeasibleSet& feasible_set() const { return set_; }

 private:
  FeasibleSet set_;
  double diameter_;
  double lipschitz_;
  Decision x_;
  std::int64_t t_ = 0;
  std::int64_t clipped_ = 0;
};

struct OgdFamily {
  using Learner = OgdLearner;
  using Decision = OgdLearner::Decision;
  using Round = OgdLearner::Round;

  FeasibleSet set;
  double diameter = 1.0;
  double lipschitz = 1.0;

  Learner make(const Decision* hint) const { return Learner(set, diameter, lipschitz, hint); }
  double loss(const Round& r, const Decision& d) const;
  Decision combine(const std::vector<const Decision*>& ds, std::span<const double> weights) const;
};

// ---------------------------------------------------------------------------
// Online Mahalanobis metric learning with a trace-norm penalty.

struct MetricModel {
  Eigen::MatrixXd m;
  double mu = 0.0;
};

/// A labelled pair; y = +1 when both points share a cluster, -1 otherwise.
struct MetricPair {
  Eigen::VectorXd z1;
  Eigen::VectorXd z2;
  int y = 1;
};

struct MetricParams {
  double rho = 0.01;
  double step = 0.5;
};

/// Sum of singular values of a symmetric matrix.
double trace_norm(const Eigen::MatrixXd& m);

/// Eigenvalues of the symmetric part clipped at zero.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m);

/// Trace-norm prox followed by PSD projection: each eigenvalue lambda of the
/// symmetric part becomes max(lambda - level, 0).
Eigen::MatrixXd soft_threshold_psd(const Eigen::MatrixXd& m, double level);

/// [1 - y (mu - d^T M d)]_+ + rho ||M||_*, d = z1 - z2.
double metric_raw_loss(const MetricModel& model, const MetricPair& pair, double rho);

/// min(raw / 5, 1). Throws std::domain_error for negative input.
double scale_and_cap_loss(double raw);

class MetricLearner {
 public:
  using Decision = MetricModel;
  using Round = MetricPair;

  /// Starts from M = 0, mu = 0, or from `hint` projected onto the PSD cone.
  MetricLearner(Eigen::Index dim, MetricParams params = {}, const Decision* hint = nullptr);

  /// Returns the raw loss of the current model on `pair`, then takes a
  /// hinge subgradient step with rate step / sqrt(t), soft-thresholds the
  /// spectrum at rate * rho and projects onto the PSD cone.
  double step(const MetricPair& pair);
  void observe(const Round& r) { step(r); }

  const Decision& decision() const { return model_; }
  std::int64_t rounds() const { return t_; }
  const MetricParams& params() const { return params_; }

 private:
  MetricParams params_;
  Decision model_;
  std::int64_t t_ = 0;
};

struct MetricFamily {
  using Learner = MetricLearner;
  using Decision = MetricLearner::Decision;
  using Round = MetricLearner::Round;

  Eigen::Index dim = 0;
  MetricParams params{};

  Learner make(const Decision* hint) const { return Learner(dim, params, hint); }
  double loss(const Round& r, const Decision& d) const {
    return scale_and_cap_loss(metric_raw_loss(d, r, params.rho));
  }
  Decision combine(const std::vector<const Decision*>& ds, std::span<const double> weights) const;
};

}  // namespace cbce
