#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cbce/interval.hpp"
#include "cbce/meta.hpp"

namespace cbce {

/// Per-round record of one learner's play.
///
/// comparator_losses is T x K: column k holds the loss of comparator k at
/// every round. For expert advice the comparators are the experts; for
/// other problems the caller supplies a finite comparator set, since the
/// minimum over the whole decision set is not computable in general.
/// Round t (1-based) is stored at row t - 1.
struct Trace {
  std::vector<double> learner_loss;
  Eigen::MatrixXd comparator_losses;
  /// Run-level losses, when the learner is a meta algorithm.
  std::vector<std::vector<RunRecord>> runs;

  Time horizon() const { return static_cast<Time>(learner_loss.size()); }
  std::size_t n_comparators() const { return static_cast<std::size_t>(comparator_losses.cols()); }
  /// Throws std::domain_error unless all per-round arrays share length T.
  void validate() const;
};

/// sum_t learner_loss_t - sum_t comparator_loss_t over [1..T].
double static_regret(const Trace& trace, std::size_t comparator);
/// Regret over interval i against comparator k.
double interval_regret(const Trace& trace, const Interval& i, std::size_t comparator);
/// Regret over interval i against the best comparator on i (lowest index on ties).
double best_interval_regret(const Trace& trace, const Interval& i);

/// Max over windows of length tau of the regret against the best fixed
/// comparator on that window. Throws std::domain_error unless 1 <= tau <= T.
double sa_regret(const Trace& trace, Time tau);

struct MShiftResult {
  double regret = 0.0;
  /// Loss of the best comparator sequence with at most m switches.
  double comparator_loss = 0.0;
  /// That sequence, one comparator index per round; ties resolve to the
  /// lowest index.
  std::vector<std::size_t> sequence;
};

/// Regret against the best comparator sequence with at most m switches,
/// by dynamic programming over (round, comparator, switches) in O(T K m).
MShiftResult m_shift_regret(const Trace& trace, int m);

/// c sqrt((m + 1) T ln T): the m-shift bound implied by a per-interval
/// bound c sqrt(|I| ln I_2).
double sa_to_mshift_bound(double c, int m, Time horizon);

/// Centered moving average with truncated windows at both ends. An even
/// window covers floor(w/2) rounds back and w/2 - 1 forward.
std::vector<double> moving_mean(std::span<const double> series, int window);

}  // namespace cbce
