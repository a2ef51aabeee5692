#include "cbce/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cbce {

void Trace::validate() const {
  if (comparator_losses.rows() != static_cast<Eigen::Index>(learner_loss.size())) {
    throw std::domain_error("trace: comparator losses and learner losses differ in length");
  }
  if (!runs.empty() && runs.size() != learner_loss.size()) {
    throw std::domain_error("trace: run records and learner losses differ in length");
  }
}

namespace {

void check_interval(const Trace& trace, const Interval& i) {
  if (i.start < 1 || i.end > trace.horizon()) throw std::domain_error("interval outside the trace");
}

void check_comparator(const Trace& trace, std::size_t k) {
  if (k >= trace.n_comparators()) throw std::domain_error("comparator index out of range");
}

}  // namespace

double static_regret(const Trace& trace, std::size_t comparator) {
  trace.validate();
  if (trace.horizon() == 0) return 0.0;
  return interval_regret(trace, Interval(1, trace.horizon()), comparator);
}

double interval_regret(const Trace& trace, const Interval& i, std::size_t comparator) {
  trace.validate();
  check_interval(trace, i);
  check_comparator(trace, comparator);
  double acc = 0.0;
  for (Time t = i.start; t <= i.end; ++t) {
    acc += trace.learner_loss[t - 1] - trace.comparator_losses(t - 1, comparator);
  }
  return acc;
}

double best_interval_regret(const Trace& trace, const Interval& i) {
  trace.validate();
  check_interval(trace, i);
  if (trace.n_comparators() == 0) throw std::domain_error("trace has no comparators");
  double learner = 0.0;
  for (Time t = i.start; t <= i.end; ++t) learner += trace.learner_loss[t - 1];
  const auto rows = trace.comparator_losses.middleRows(i.start - 1, i.length());
  return learner - rows.colwise().sum().minCoeff();
}

double sa_regret(const Trace& trace, Time tau) {
  trace.validate();
  const Time horizon = trace.horizon();
  if (tau < 1 || tau > horizon) throw std::domain_error("sa_regret: tau out of range");
  const Eigen::Index k = trace.comparator_losses.cols();
  if (k == 0) throw std::domain_error("trace has no comparators");

  // Prefix sums, row t holds the total over rounds 1..t.
  std::vector<double> learner(horizon + 1, 0.0);
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(horizon + 1, k);
  for (Time t = 1; t <= horizon; ++t) {
    learner[t] = learner[t - 1] + trace.learner_loss[t - 1];
    comp.row(t) = comp.row(t - 1) + trace.comparator_losses.row(t - 1);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (Time s = 1; s + tau - 1 <= horizon; ++s) {
    const Time e = s + tau - 1;
    const double window = learner[e] - learner[s - 1];
    const double comparator = (comp.row(e) - comp.row(s - 1)).minCoeff();
    best = std::max(best, window - comparator);
  }
  return best;
}

MShiftResult m_shift_regret(const Trace& trace, int m) {
  trace.validate();
  if (m < 0) throw std::domain_error("m_shift_regret: m must be >= 0");
  const Time horizon = trace.horizon();
  const auto n = static_cast<std::size_t>(trace.comparator_losses.cols());
  MShiftResult out;
  double learner = 0.0;
  for (double l : trace.learner_loss) learner += l;
  if (horizon == 0) {
    out.regret = learner;
    return out;
  }
  if (n == 0) throw std::domain_error("trace has no comparators");

  // More than T - 1 switches are never useful.
  const auto budget = static_cast<std::size_t>(std::min<Time>(m, horizon - 1));
  const std::size_t layers = budget + 1;
  // cost[k * n + i]: best loss of a sequence ending at comparator i having
  // used at most k switches. came_from records, per (t, k, i), whether the
  // optimum stayed on i (n) or switched in from the best j of layer k - 1.
  std::vector<double> cost(layers * n), next(layers * n);
  std::vector<std::size_t> came_from(static_cast<std::size_t>(horizon) * layers * n);
  std::vector<double> layer_min(layers);
  std::vector<std::size_t> layer_arg(layers);

  for (std::size_t k = 0; k < layers; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      cost[k * n + i] = trace.comparator_losses(0, static_cast<Eigen::Index>(i));
      came_from[k * n + i] = n;
    }
  }
  for (Time t = 2; t <= horizon; ++t) {
    for (std::size_t k = 0; k < layers; ++k) {
      layer_arg[k] = 0;
      layer_min[k] = cost[k * n];
      for (std::size_t i = 1; i < n; ++i) {
        if (cost[k * n + i] < layer_min[k]) {
          layer_min[k] = cost[k * n + i];
          layer_arg[k] = i;
        }
      }
    }
    std::size_t* from = &came_from[static_cast<std::size_t>(t - 1) * layers * n];
    for (std::size_t k = 0; k < layers; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        double prev = cost[k * n + i];
        std::size_t src = n;
        if (k > 0 && layer_min[k - 1] < prev) {
          prev = layer_min[k - 1];
          src = layer_arg[k - 1];
        }
        next[k * n + i] = prev + trace.comparator_losses(t - 1, static_cast<Eigen::Index>(i));
        from[k * n + i] = src;
      }
    }
    std::swap(cost, next);
  }

  std::size_t best = 0;
  const double* last = &cost[budget * n];
  for (std::size_t i = 1; i < n; ++i) {
    if (last[i] < last[best]) best = i;
  }
  out.comparator_loss = last[best];
  out.regret = learner - out.comparator_loss;

  out.sequence.assign(static_cast<std::size_t>(horizon), 0);
  std::size_t i = best;
  std::size_t k = budget;
  for (Time t = horizon; t >= 1; --t) {
    out.sequence[static_cast<std::size_t>(t - 1)] = i;
    const std::size_t src = came_from[static_cast<std::size_t>(t - 1) * layers * n + k * n + i];
    if (src != n) {
      i = src;
      --k;
    }
  }
  return out;
}

double sa_to_mshift_bound(double c, int m, Time horizon) {
  if (!(c > 0.0)) throw std::domain_error("sa_to_mshift_bound: c must be > 0");
  if (m < 0 || horizon < 1) throw std::domain_error("sa_to_mshift_bound: need m >= 0 and T >= 1");
  const double t = static_cast<double>(horizon);
  return c * std::sqrt((m + 1.0) * t * std::log(t));
}

std::vector<double> moving_mean(std::span<const double> series, int window) {
  if (window < 1) throw std::domain_error("moving_mean: window must be >= 1");
  const auto n = static_cast<std::ptrdiff_t>(series.size());
  const std::ptrdiff_t back = window / 2;
  const std::ptrdiff_t forward = window - 1 - back;
  std::vector<double> out(series.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - back);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + forward);
    double acc = 0.0;
    for (std::ptrdiff_t j = lo; j <= hi; ++j) acc += series[j];
    out[i] = acc / static_cast<double>(hi - lo + 1);
  }
  return out;
}

}  // namespace cbce
