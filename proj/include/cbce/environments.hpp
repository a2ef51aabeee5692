#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "cbce/black_boxes.hpp"
#include "cbce/interval.hpp"

namespace cbce {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Splits [1..T] into `parts` consecutive segments of near-equal length.
std::vector<Interval> equal_segments(Time horizon, int parts);

/// Expert-advice stream with a shifting best expert.
///
/// Losses are i.i.d. Uniform(0, 1); on segment k the favored expert k gets
/// [loss - 1/2]_+ instead. Random numbers come from std::mt19937_64 seeded
/// with `seed`, consumed row by row. Horizons below 3 get one segment per
/// round.
struct LeaEnvironment {
  RowMatrix losses;  // T x N, row t-1 is round t
  std::vector<Interval> segments;
  std::vector<std::size_t> favored;

  Time horizon() const { return losses.rows(); }
  std::size_t n_experts() const { return static_cast<std::size_t>(losses.cols()); }
  std::span<const double> round(Time t) const {
    return {losses.row(t - 1).data(), static_cast<std::size_t>(losses.cols())};
  }
};

LeaEnvironment gen_lea_environment(std::uint64_t seed, Time horizon = 600,
                                   std::size_t n_experts = 1000);

/// Pair stream for metric learning under a drifting notion of similarity.
///
/// Each point concatenates three independent draws from a 3-component
/// Gaussian mixture in R^3 (means 5 e_1, 5 e_2, 5 e_3, identity covariance,
/// weights .5/.3/.2) and 16 standard normal noise coordinates. Segment k
/// labels a uniformly drawn pair of distinct points by clustering k.
struct MetricEnvironment {
  static constexpr int kClusterings = 3;
  static constexpr int kSignalDim = 9;
  static constexpr int kNoiseDim = 16;
  static constexpr int kDim = kSignalDim + kNoiseDim;

  Eigen::MatrixXd points;  // n_points x 25
  std::array<std::vector<int>, kClusterings> labels;
  std::vector<MetricPair> pairs;
  std::vector<std::array<std::size_t, 2>> pair_index;
  std::vector<Interval> segments;

  Time horizon() const { return static_cast<Time>(pairs.size()); }
  const MetricPair& round(Time t) const { return pairs.at(static_cast<std::size_t>(t - 1)); }
};

MetricEnvironment gen_metric_environment(std::uint64_t seed, Time horizon = 1500,
                                         std::size_t n_points = 2000);

}  // namespace cbce
