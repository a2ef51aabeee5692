#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "cbce/black_boxes.hpp"
#include "cbce/meta.hpp"

using namespace cbce;

namespace {

std::vector<double> random_losses(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> l(n);
  for (double& v : l) v = u(rng);
  return l;
}

}  // namespace

TEST_CASE("decaying prior weights") {
  CHECK(start_decay_prior_weight(1) == doctest::Approx(1.0));
  CHECK(start_decay_prior_weight(2) == doctest::Approx(1.0 / 8.0));
  CHECK(start_decay_prior_weight(3) == doctest::Approx(1.0 / 18.0));
  CHECK(start_decay_prior_weight(4) == doctest::Approx(1.0 / 48.0));
  CHECK_THROWS_AS(start_decay_prior_weight(0), std::domain_error);
}

TEST_CASE("meta and SA bounds") {
  CHECK(cbce_meta_regret_bound(Interval(1, 1)) == doctest::Approx(std::sqrt(5.0)));
  CHECK(cbce_meta_regret_bound(Interval(5, 8)) == doctest::Approx(std::sqrt(4.0 * (7.0 * std::log(8.0) + 5.0))));
  const double c = 2.0;
  const Interval i(3, 18);
  const double expect = 4.0 / (std::sqrt(2.0) - 1.0) * c * 4.0 + 8.0 * cbce_meta_regret_bound(i);
  CHECK(cbce_sa_regret_bound(i, c, 0.5) == doctest::Approx(expect));
  CHECK_THROWS_AS(cbce_sa_regret_bound(i, c, 1.0), std::domain_error);
}

TEST_CASE("SAOL rates, weights and update") {
  SaolAggregator s;
  const RunId a = s.add_run(Interval(1, 1));
  const RunId b = s.add_run(Interval(1, 16));
  CHECK(s.rate(a) == 0.5);
  CHECK(s.rate(b) == 0.25);
  const std::vector<RunId> ids{a, b};
  std::vector<double> w;
  s.weights(ids, w);
  CHECK(w[0] == doctest::Approx(0.5 / 0.75));
  const std::vector<double> losses{0.0, 1.0};
  s.update(ids, losses, 0.4);
  CHECK(s.raw_weight(a) == doctest::Approx(0.5 * (1.0 + 0.5 * 0.4)));
  CHECK(s.raw_weight(b) == doctest::Approx(0.25 * (1.0 - 0.25 * 0.6)));
  // Weights are clipped at zero; all-zero weights give the uniform mix.
  SaolAggregator z;
  const RunId c = z.add_run(Interval(1, 1));
  const std::vector<RunId> one{c};
  const std::vector<double> lose{1.0};
  z.update(one, lose, 0.0);
  z.update(one, lose, 0.0);
  z.update(one, lose, 0.0);
  CHECK(z.raw_weight(c) >= 0.0);
  s.retire(a);
  CHECK_THROWS_AS(s.weights(ids, w), std::domain_error);
}

TEST_CASE("live runs track the schedule") {
  std::mt19937_64 rng(1);
  for (Schedule sched : {Schedule::geometric_covering(), Schedule::data_streaming(1),
                         Schedule::data_streaming(2)}) {
    auto meta = make_cbce(LeaFamily{4, {}}, sched, PriorMode::StartDecay);
    for (Time t = 1; t <= 150; ++t) {
      const auto l = random_losses(rng, 4);
      const auto step = meta.step(l);
      CHECK(meta.live_runs() == sched.active(t).size());
      std::vector<Interval> seen;
      for (const auto& r : step.runs) {
        CHECK(r.interval.contains(t));
        seen.push_back(r.interval);
      }
      std::sort(seen.begin(), seen.end(),
                [](const Interval& x, const Interval& y) { return std::tie(x.start, x.end) < std::tie(y.start, y.end); });
      auto expect = sched.active(t);
      std::sort(expect.begin(), expect.end(),
                [](const Interval& x, const Interval& y) { return std::tie(x.start, x.end) < std::tie(y.start, y.end); });
      CHECK(seen == expect);
    }
  }
}

TEST_CASE("CBCE decision is the weighted mix and its loss matches") {
  std::mt19937_64 rng(2);
  auto meta = make_cbce(LeaFamily{5, {}}, Schedule::data_streaming(2), PriorMode::Uniform);
  for (Time t = 1; t <= 100; ++t) {
    const auto l = random_losses(rng, 5);
    const auto step = meta.step(l);
    CHECK(std::accumulate(step.decision.begin(), step.decision.end(), 0.0) == doctest::Approx(1.0));
    double mix = 0.0;
    double weights = 0.0;
    for (const auto& r : step.runs) {
      mix += r.weight * r.loss;
      weights += r.weight;
    }
    CHECK(weights == doctest::Approx(1.0));
    CHECK(step.loss == doctest::Approx(mix).epsilon(1e-12));
  }
}

TEST_CASE("warm-started runs begin at the previous combined decision") {
  std::mt19937_64 rng(4);
  auto meta = make_cbce(LeaFamily{3, {}}, Schedule::geometric_covering(), PriorMode::StartDecay, true);
  std::vector<double> previous;
  for (Time t = 1; t <= 20; ++t) {
    const auto l = random_losses(rng, 3);
    const auto step = meta.step(l);
    previous = step.decision;
  }
  // A fresh learner built from the same hint reproduces the floored prior.
  LeaLearner fresh(3, &previous);
  const auto prior = warm_start_prior(previous);
  for (std::size_t i = 0; i < 3; ++i) CHECK(fresh.engine().prior(i) == doctest::Approx(prior[i]));
}

TEST_CASE("SAOL meta runs and stays a distribution") {
  std::mt19937_64 rng(8);
  auto meta = make_saol(LeaFamily{4, {}}, Schedule::geometric_covering());
  for (Time t = 1; t <= 80; ++t) {
    const auto step = meta.step(random_losses(rng, 4));
    CHECK(std::accumulate(step.decision.begin(), step.decision.end(), 0.0) == doctest::Approx(1.0));
    CHECK(step.loss >= 0.0);
    CHECK(step.loss <= 1.0);
  }
}

TEST_CASE("Fixed Share tuning and hand step") {
  const auto p = FixedShareParams::tuned(10, 101, 2);
  const double alpha = 2.0 / 100.0;
  const double h = -alpha * std::log(alpha) - (1 - alpha) * std::log(1 - alpha);
  CHECK(p.alpha == doctest::Approx(alpha));
  CHECK(p.eta == doctest::Approx(std::sqrt(2.0 / 101.0 * (3.0 * std::log(10.0) + 100.0 * h))));
  CHECK_THROWS_AS(FixedShareParams::tuned(10, 1, 0), std::domain_error);
  CHECK_THROWS_AS(FixedShareParams::tuned(10, 5, 5), std::domain_error);

  FixedShare fs(2, FixedShareParams{std::log(2.0), 0.1});
  const std::vector<double> l{0.0, 1.0};
  const auto s = fs.step(l);
  CHECK(s.loss == doctest::Approx(0.5));
  // Exponential update gives (1/2, 1/4); sharing gives (0.9/2 + 0.1/4, 0.9/4 + 0.1/2).
  const double a = 0.45 + 0.025;
  const double b = 0.225 + 0.05;
  CHECK(fs.decision()[0] == doctest::Approx(a / (a + b)));
  CHECK(fs.decision()[1] == doctest::Approx(b / (a + b)));
}
