#pragma once

// Independent checkers for the partition laws of the two interval families.

#include <cstddef>
#include <vector>

#include "cbce/interval.hpp"

namespace cbce_test {

using cbce::Interval;
using cbce::Time;

inline bool is_power_of_two(Time n) { return n > 0 && (n & (n - 1)) == 0; }

/// Member of {[i 2^k .. (i+1) 2^k - 1] : i >= 1, k >= 0}.
inline bool is_gc_member(const Interval& j) {
  const Time len = j.length();
  return is_power_of_two(len) && j.start >= len && j.start % len == 0;
}

/// Prefix of [s .. s + g 2^u(s) - 1].
inline bool is_ds_prefix(const Interval& j, int g) {
  Time full = g;
  for (Time r = j.start; r % 2 == 0; r /= 2) full *= 2;
  return j.length() <= full;
}

/// Pieces are consecutive, disjoint and cover exactly i.
inline bool exact_cover(const Interval& i, const std::vector<Interval>& pieces) {
  if (pieces.empty() || pieces.front().start != i.start || pieces.back().end != i.end) return false;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    if (pieces[k].end < pieces[k].start) return false;
    if (k > 0 && pieces[k].start != pieces[k - 1].end + 1) return false;
  }
  return true;
}

/// GC members inside i, with some split p such that lengths at least double
/// up to piece p and at least halve from piece p + 1 on.
inline bool gc_partition_ok(const Interval& i, const std::vector<Interval>& pieces) {
  if (!exact_cover(i, pieces)) return false;
  for (const auto& j : pieces) {
    if (!is_gc_member(j)) return false;
  }
  const std::size_t n = pieces.size();
  for (std::size_t p = 0; p < n; ++p) {
    bool ok = true;
    for (std::size_t k = 0; k < p && ok; ++k) ok = 2 * pieces[k].length() <= pieces[k + 1].length();
    for (std::size_t k = p + 1; k + 1 < n && ok; ++k) {
      ok = 2 * pieces[k + 1].length() <= pieces[k].length();
    }
    if (ok) return true;
  }
  return false;
}

/// DS prefixes covering i whose lengths at least double, except the last piece.
inline bool ds_partition_ok(const Interval& i, const std::vector<Interval>& pieces, int g) {
  if (!exact_cover(i, pieces)) return false;
  for (const auto& j : pieces) {
    if (!is_ds_prefix(j, g)) return false;
  }
  for (std::size_t k = 0; k + 2 < pieces.size(); ++k) {
    if (pieces[k + 1].length() < 2 * pieces[k].length()) return false;
  }
  return true;
}

}  // namespace cbce_test
