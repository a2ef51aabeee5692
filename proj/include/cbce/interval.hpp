#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cbce {

/// Time index; rounds are numbered from 1.
using Time = std::int64_t;

/// Closed integer time range [start..end].
struct Interval {
  Time start = 1;
  Time end = 1;

  Interval() = default;
  Interval(Time s, Time e);

  Time length() const { return end - start + 1; }
  bool contains(Time t) const { return start <= t && t <= end; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

std::string to_string(const Interval& i);

/// Exponent of the largest power of two dividing t (t >= 1).
int two_adic_valuation(Time t);

/// floor(log2 t) for t >= 1.
int floor_log2(Time t);

enum class ScheduleKind { GeometricCovering, DataStreaming };

/// A family of restart intervals. Data streaming carries its length
/// multiplier g >= 1; the geometric covering family ignores it.
struct Schedule {
  ScheduleKind kind = ScheduleKind::DataStreaming;
  int g = 2;

  static Schedule geometric_covering() { return {ScheduleKind::GeometricCovering, 1}; }
  static Schedule data_streaming(int g);

  /// Intervals of the family that begin exactly at t, shortest first.
  std::vector<Interval> starting_at(Time t) const;
  /// Intervals of the family containing t.
  std::vector<Interval> active(Time t) const;
  /// Partition of i into family members (GC) or family prefixes (DS).
  std::vector<Interval> partition(const Interval& i) const;

  std::string name() const;
};

// Geometric covering: the dyadic blocks [i*2^k .. (i+1)*2^k - 1], i >= 1.

/// Every GC interval containing t, sorted by length ascending.
/// Size is floor(log2 t) + 1. Throws std::domain_error for t < 1.
std::vector<Interval> gc_active(Time t);

/// GC intervals starting at t: one per k in [0..u(t)].
std::vector<Interval> gc_starting_at(Time t);

/// Greedy partition of i into GC members. Lengths first at least double,
/// then at least halve; there is no constraint at the turning point.
std::vector<Interval> gc_partition(const Interval& i);

// Data streaming: one interval [t .. t + g*2^u(t) - 1] per round t.

Interval ds_interval_starting_at(Time t, int g);

/// Every DS interval containing t, sorted by start ascending. Exactly one
/// of them starts at t.
std::vector<Interval> ds_active(Time t, int g);

/// Partition of i into prefixes of DS intervals whose lengths at least
/// double from piece to piece, except that the final piece is truncated
/// to end at i.end.
std::vector<Interval> ds_partition(const Interval& i, int g);

}  // namespace cbce
