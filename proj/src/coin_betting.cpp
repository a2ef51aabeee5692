#include "cbce/coin_betting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace cbce {

namespace {

void require_delta(const KtPotentialParams& p) {
  if (!(p.delta >= 0.0)) throw std::domain_error("KT potential: delta must be >= 0");
}

// Extended precision keeps differences of large log-gamma values accurate
// enough for the potential-based betting fraction.
long double log_kt_ld(std::int64_t t, long double x, long double delta) {
  if (t < 0) throw std::domain_error("KT potential: t must be >= 0");
  const long double half = (static_cast<long double>(t) + delta + 1.0L) / 2.0L;
  const long double ax = std::fabs(x) / 2.0L;
  const long double lo = half - ax;
  if (!(lo > 0.0L)) throw std::domain_error("KT potential: gamma argument is not positive");
  const long double hi = half + ax;
  return static_cast<long double>(t) * std::numbers::ln2_v<long double> +
         std::lgamma(delta + 1.0L) + (std::lgamma(hi) + std::lgamma(lo)) -
         2.0L * std::lgamma((delta + 1.0L) / 2.0L) -
         std::lgamma(static_cast<long double>(t) + delta + 1.0L);
}

}  // namespace

double log_kt_potential(std::int64_t t, double x, KtPotentialParams params) {
  require_delta(params);
  return static_cast<double>(log_kt_ld(t, x, params.delta));
}

double kt_potential(std::int64_t t, double x, KtPotentialParams params) {
  return std::exp(log_kt_potential(t, x, params));
}

double betting_fraction_from_potential(std::int64_t t, double z, KtPotentialParams params) {
  require_delta(params);
  const long double up = log_kt_ld(t, static_cast<long double>(z) + 1.0L, params.delta);
  const long double down = log_kt_ld(t, static_cast<long double>(z) - 1.0L, params.delta);
  return static_cast<double>(std::tanh((up - down) / 2.0L));
}

double kt_betting_fraction(double z, std::int64_t s, KtPotentialParams params) {
  const double denom = static_cast<double>(s) + params.delta;
  if (!(denom > 0.0)) throw std::domain_error("KT betting fraction: s + delta must be > 0");
  return z / denom;
}

WealthCheck wealth_lower_bound_holds(std::span<const double> coins, KtPotentialParams params,
                                     double tolerance) {
  require_delta(params);
  for (double c : coins) {
    if (!(c >= -1.0 && c <= 1.0)) throw std::domain_error("coin outside [-1, 1]");
  }
  WealthCheck out;
  out.min_slack = 1.0 - kt_potential(0, 0.0, params);
  BettorState b;
  for (std::size_t i = 0; i < coins.size(); ++i) {
    const double w = bet_amount(b, params);
    b.wealth += coins[i] * w;
    b.z += coins[i];
    b.s += 1;
    const auto t = static_cast<std::int64_t>(i + 1);
    const double f = kt_potential(t, b.z, params);
    const double slack = b.wealth - f;
    out.min_slack = std::min(out.min_slack, slack);
    if (slack < -tolerance && out.holds) {
      out.holds = false;
      out.first_violation = i + 1;
    }
    out.final_potential = f;
  }
  out.final_wealth = b.wealth;
  return out;
}

}  // namespace cbce
