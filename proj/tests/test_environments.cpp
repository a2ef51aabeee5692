#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "cbce/environments.hpp"

using namespace cbce;

TEST_CASE("equal segments") {
  const auto s = equal_segments(600, 3);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == Interval(1, 200));
  CHECK(s[1] == Interval(201, 400));
  CHECK(s[2] == Interval(401, 600));
  const auto odd = equal_segments(10, 3);
  CHECK(odd[0] == Interval(1, 3));
  CHECK(odd[2].end == 10);
  CHECK_THROWS_AS(equal_segments(2, 3), std::domain_error);
}

TEST_CASE("LEA environment statistics") {
  const LeaEnvironment env = gen_lea_environment(42);
  CHECK(env.horizon() == 600);
  CHECK(env.n_experts() == 1000);
  CHECK(env.losses.minCoeff() >= 0.0);
  CHECK(env.losses.maxCoeff() <= 1.0);
  for (std::size_t k = 0; k < 3; ++k) {
    const Interval seg = env.segments[k];
    const auto block = env.losses.middleRows(seg.start - 1, seg.length());
    const double favored = block.col(static_cast<Eigen::Index>(env.favored[k])).mean();
    CHECK(std::fabs(favored - 0.125) <= 0.02);
    Eigen::Index best = 0;
    block.colwise().sum().minCoeff(&best);
    CHECK(best == static_cast<Eigen::Index>(k));
    // A non-favored expert on this segment.
    CHECK(std::fabs(block.col(500).mean() - 0.5) <= 0.05);
  }
  CHECK(std::fabs(env.losses.mean() - 0.5) <= 0.02);
}

TEST_CASE("LEA environment is seed-deterministic") {
  const auto a = gen_lea_environment(9, 50, 20);
  const auto b = gen_lea_environment(9, 50, 20);
  const auto c = gen_lea_environment(10, 50, 20);
  CHECK(a.losses == b.losses);
  CHECK(a.losses != c.losses);
  CHECK(a.round(3).size() == 20);
  CHECK(a.round(3)[4] == a.losses(2, 4));
  CHECK_THROWS_AS(gen_lea_environment(1, 10, 2), std::domain_error);
}

TEST_CASE("metric environment shape and statistics") {
  const MetricEnvironment env = gen_metric_environment(5);
  CHECK(env.points.rows() == 2000);
  CHECK(env.points.cols() == 25);
  CHECK(env.horizon() == 1500);
  for (int c = 0; c < 3; ++c) {
    double counts[3] = {0, 0, 0};
    for (int l : env.labels[c]) counts[l] += 1.0;
    CHECK(std::fabs(counts[0] / 2000.0 - 0.5) <= 0.03);
    CHECK(std::fabs(counts[1] / 2000.0 - 0.3) <= 0.03);
    CHECK(std::fabs(counts[2] / 2000.0 - 0.2) <= 0.03);
  }
  double same = 0.0;
  for (Time t = 1; t <= env.horizon(); ++t) {
    const auto& pr = env.round(t);
    const auto [a, b] = env.pair_index[t - 1];
    CHECK(a != b);
    const int seg = t <= 500 ? 0 : (t <= 1000 ? 1 : 2);
    CHECK(pr.y == (env.labels[seg][a] == env.labels[seg][b] ? 1 : -1));
    CHECK(pr.z1 == env.points.row(static_cast<Eigen::Index>(a)).transpose());
    if (pr.y == 1) same += 1.0;
  }
  const double rate = same / 1500.0;
  CHECK(rate > 0.2);
  CHECK(rate < 0.8);
  // Noise block is standard normal.
  const auto noise = env.points.rightCols(16);
  CHECK(std::fabs(noise.mean()) <= 0.02);
}

TEST_CASE("metric environment is seed-deterministic") {
  const auto a = gen_metric_environment(3, 30, 50);
  const auto b = gen_metric_environment(3, 30, 50);
  CHECK(a.points == b.points);
  CHECK(a.pair_index == b.pair_index);
  CHECK_THROWS_AS(gen_metric_environment(1, 30, 1), std::domain_error);
}
