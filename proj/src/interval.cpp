#include "cbce/interval.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace cbce {

namespace {

void require_time(Time t, const char* what) {
  if (t < 1) throw std::domain_error(std::string(what) + ": time index must be >= 1");
}

void require_g(int g) {
  if (g < 1) throw std::domain_error("data streaming multiplier g must be >= 1");
}

}  // namespace

Interval::Interval(Time s, Time e) : start(s), end(e) {
  if (s < 1) throw std::domain_error("interval start must be >= 1");
  if (e < s) throw std::domain_error("interval end must be >= start");
}

std::string to_string(const Interval& i) {
  return "[" + std::to_string(i.start) + ".." + std::to_string(i.end) + "]";
}

int two_adic_valuation(Time t) {
  require_time(t, "two_adic_valuation");
  return std::countr_zero(static_cast<std::uint64_t>(t));
}

int floor_log2(Time t) {
  require_time(t, "floor_log2");
  return std::bit_width(static_cast<std::uint64_t>(t)) - 1;
}

Schedule Schedule::data_streaming(int g) {
  require_g(g);
  return {ScheduleKind::DataStreaming, g};
}

std::vector<Interval> Schedule::starting_at(Time t) const {
  if (kind == ScheduleKind::GeometricCovering) return gc_starting_at(t);
  return {ds_interval_starting_at(t, g)};
}

std::vector<Interval> Schedule::active(Time t) const {
  if (kind == ScheduleKind::GeometricCovering) return gc_active(t);
  return ds_active(t, g);
}

std::vector<Interval> Schedule::partition(const Interval& i) const {
  if (kind == ScheduleKind::GeometricCovering) return gc_partition(i);
  return ds_partition(i, g);
}

std::string Schedule::name() const {
  if (kind == ScheduleKind::GeometricCovering) return "gc";
  return "ds" + std::to_string(g);
}

std::vector<Interval> gc_active(Time t) {
  require_time(t, "gc_active");
  const int levels = floor_log2(t) + 1;
  std::vector<Interval> out;
  out.reserve(levels);
  for (int k = 0; k < levels; ++k) {
    const Time block = t >> k;
    out.emplace_back(block << k, ((block + 1) << k) - 1);
  }
  return out;
}

std::vector<Interval> gc_starting_at(Time t) {
  require_time(t, "gc_starting_at");
  const int u = two_adic_valuation(t);
  std::vector<Interval> out;
  out.reserve(u + 1);
  for (int k = 0; k <= u; ++k) out.emplace_back(t, t + (Time{1} << k) - 1);
  return out;
}

std::vector<Interval> gc_partition(const Interval& i) {
  require_time(i.start, "gc_partition");
  std::vector<Interval> out;
  Time s = i.start;
  while (s <= i.end) {
    const Time remaining = i.end - s + 1;
    const int k = std::min(two_adic_valuation(s), floor_log2(remaining));
    const Time len = Time{1} << k;
    out.emplace_back(s, s + len - 1);
    s += len;
  }
  return out;
}

Interval ds_interval_starting_at(Time t, int g) {
  require_time(t, "ds_interval_starting_at");
  require_g(g);
  return {t, t + static_cast<Time>(g) * (Time{1} << two_adic_valuation(t)) - 1};
}

std::vector<Interval> ds_active(Time t, int g) {
  require_time(t, "ds_active");
  require_g(g);
  std::vector<Interval> out;
  // Starts with valuation exactly u are the odd multiples of 2^u; such a
  // start s covers t iff t - s < g * 2^u.
  for (int u = 0; u <= floor_log2(t); ++u) {
    const Time step = Time{1} << u;
    const Time len = static_cast<Time>(g) * step;
    const Time lo = std::max<Time>(1, t - len + 1);
    Time s = ((lo + step - 1) / step) * step;
    if ((s / step) % 2 == 0) s += step;
    for (; s <= t; s += 2 * step) out.emplace_back(s, s + len - 1);
  }
  std::sort(out.begin(), out.end(),
            [](const Interval& a, const Interval& b) { return a.start < b.start; });
  return out;
}

std::vector<Interval> ds_partition(const Interval& i, int g) {
  require_time(i.start, "ds_partition");
  require_g(g);
  // Pieces have the g = 1 lengths 2^u(s); each is then a prefix of the
  // longer g * 2^u(s) interval as well.
  std::vector<Interval> out;
  Time s = i.start;
  while (s <= i.end) {
    const Time len = Time{1} << two_adic_valuation(s);
    const Time e = std::min(i.end, s + len - 1);
    out.emplace_back(s, e);
    s = e + 1;
  }
  return out;
}

}  // namespace cbce
