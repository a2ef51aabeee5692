#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace cbce {

/// Parameters of the Krichevsky-Trofimov potential. delta is a time shift;
/// the algorithms here use delta = 0.
struct KtPotentialParams {
  double delta = 0.0;
};

/// Coin-betting state of a single (possibly sleeping) expert.
///
/// s counts awake rounds plus one, z is the sum of received coins, and
/// wealth is 1 plus the accumulated winnings. w holds the most recent bet.
struct BettorState {
  std::int64_t s = 1;
  double z = 0.0;
  double wealth = 1.0;
  double w = 0.0;
};

/// log F_t(x) for the KT potential, evaluated through log-gamma.
/// Even in x by construction. Throws std::domain_error if a gamma argument
/// is not positive or t < 0.
double log_kt_potential(std::int64_t t, double x, KtPotentialParams params = {});

/// F_t(x) for the KT potential.
double kt_potential(std::int64_t t, double x, KtPotentialParams params = {});

/// Betting fraction (F_t(z+1) - F_t(z-1)) / (F_t(z+1) + F_t(z-1)), computed
/// from the log-potentials as tanh of half their difference. Requires
/// |z| + 1 < t + delta + 1 so both potentials are finite.
double betting_fraction_from_potential(std::int64_t t, double z, KtPotentialParams params = {});

/// Closed form of the KT betting fraction: z / (s + delta).
double kt_betting_fraction(double z, std::int64_t s, KtPotentialParams params = {});

/// Bet amount for a bettor: fraction times current wealth.
inline double bet_amount(const BettorState& b, KtPotentialParams params = {}) {
  return kt_betting_fraction(b.z, b.s, params) * b.wealth;
}

/// Outcome of replaying a coin sequence through a KT bettor.
struct WealthCheck {
  bool holds = true;
  /// Round (1-based) of the first violation, 0 when none.
  std::size_t first_violation = 0;
  /// min over rounds of wealth - F_t(sum of coins).
  double min_slack = 0.0;
  double final_wealth = 1.0;
  double final_potential = 1.0;
};

/// Plays the KT bettor against `coins` and checks
/// F_t(sum_{tau<=t} g_tau) <= 1 + sum_{tau<=t} g_tau w_tau + tolerance at every t.
/// Throws std::domain_error for coins outside [-1, 1].
WealthCheck wealth_lower_bound_holds(std::span<const double> coins,
                                     KtPotentialParams params = {},
                                     double tolerance = 1e-9);

}  // namespace cbce
