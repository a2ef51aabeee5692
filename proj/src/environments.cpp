#include "cbce/environments.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace cbce {

std::vector<Interval> equal_segments(Time horizon, int parts) {
  if (horizon < parts || parts < 1) throw std::domain_error("need at least one round per segment");
  std::vector<Interval> out;
  Time start = 1;
  for (int k = 1; k <= parts; ++k) {
    const Time end = horizon * k / parts;
    out.emplace_back(start, end);
    start = end + 1;
  }
  return out;
}

LeaEnvironment gen_lea_environment(std::uint64_t seed, Time horizon, std::size_t n_experts) {
  if (n_experts < 3) throw std::domain_error("LEA environment needs at least 3 experts");
  LeaEnvironment env;
  env.segments = equal_segments(horizon, static_cast<int>(std::min<Time>(3, horizon)));
  env.favored.resize(env.segments.size());
  for (std::size_t k = 0; k < env.favored.size(); ++k) env.favored[k] = k;
  env.losses.resize(horizon, static_cast<Eigen::Index>(n_experts));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Eigen::Index t = 0; t < env.losses.rows(); ++t) {
    for (Eigen::Index i = 0; i < env.losses.cols(); ++i) env.losses(t, i) = unif(rng);
  }
  for (std::size_t k = 0; k < env.segments.size(); ++k) {
    const auto j = static_cast<Eigen::Index>(env.favored[k]);
    for (Time t = env.segments[k].start; t <= env.segments[k].end; ++t) {
      double& l = env.losses(t - 1, j);
      l = std::max(0.0, l - 0.5);
    }
  }
  return env;
}

MetricEnvironment gen_metric_environment(std::uint64_t seed, Time horizon, std::size_t n_points) {
  if (n_points < 2) throw std::domain_error("metric environment needs at least two points");
  using Env = MetricEnvironment;
  Env env;
  env.segments = equal_segments(horizon, Env::kClusterings);
  const auto n = static_cast<Eigen::Index>(n_points);
  env.points.resize(n, Env::kDim);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::discrete_distribution<int> component({0.5, 0.3, 0.2});
  constexpr double kSeparation = 5.0;

  for (int c = 0; c < Env::kClusterings; ++c) {
    auto& lab = env.labels[c];
    lab.resize(n_points);
    for (Eigen::Index p = 0; p < n; ++p) {
      const int k = component(rng);
      lab[p] = k;
      for (int d = 0; d < 3; ++d) {
        env.points(p, 3 * c + d) = (d == k ? kSeparation : 0.0) + normal(rng);
      }
    }
  }
  for (Eigen::Index p = 0; p < n; ++p) {
    for (int d = Env::kSignalDim; d < Env::kDim; ++d) env.points(p, d) = normal(rng);
  }

  std::uniform_int_distribution<std::size_t> first(0, n_points - 1);
  std::uniform_int_distribution<std::size_t> second(0, n_points - 2);
  env.pairs.reserve(static_cast<std::size_t>(horizon));
  env.pair_index.reserve(static_cast<std::size_t>(horizon));
  for (int s = 0; s < Env::kClusterings; ++s) {
    const auto& lab = env.labels[s];
    for (Time t = env.segments[s].start; t <= env.segments[s].end; ++t) {
      const std::size_t a = first(rng);
      std::size_t b = second(rng);
      if (b >= a) ++b;
      MetricPair pair;
      pair.z1 = env.points.row(static_cast<Eigen::Index>(a)).transpose();
      pair.z2 = env.points.row(static_cast<Eigen::Index>(b)).transpose();
      pair.y = lab[a] == lab[b] ? 1 : -1;
      env.pairs.push_back(std::move(pair));
      env.pair_index.push_back({a, b});
    }
  }
  return env;
}

}  // namespace cbce
