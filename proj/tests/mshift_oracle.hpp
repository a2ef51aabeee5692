#pragma once

// Best comparator sequence with at most m switches, by enumerating all K^T
// sequences. Only for tiny instances.

#include <cstddef>
#include <limits>
#include <vector>

#include "cbce/evaluation.hpp"

namespace cbce_test {

struct MShiftOracle {
  double loss = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> sequence;
};

inline MShiftOracle mshift_exhaustive(const cbce::Trace& tr, int m) {
  const auto horizon = static_cast<std::size_t>(tr.horizon());
  const auto k = static_cast<std::size_t>(tr.comparator_losses.cols());
  MShiftOracle best;
  std::vector<std::size_t> seq(horizon, 0);
  while (true) {
    int switches = 0;
    double loss = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
      if (t > 0 && seq[t] != seq[t - 1]) ++switches;
      loss += tr.comparator_losses(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(seq[t]));
    }
    if (switches <= m && loss < best.loss) {
      best.loss = loss;
      best.sequence = seq;
    }
    std::size_t pos = horizon;
    while (pos > 0) {
      --pos;
      if (++seq[pos] < k) break;
      seq[pos] = 0;
      if (pos == 0) return best;
    }
    if (horizon == 0) return best;
  }
}

}  // namespace cbce_test
