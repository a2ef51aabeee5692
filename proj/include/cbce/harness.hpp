#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cbce/black_boxes.hpp"
#include "cbce/interval.hpp"
#include "cbce/meta.hpp"

namespace cbce {

enum class Experiment { Lea, Metric };
enum class MetaKind { Cbce, Saol, FixedShare, None };

std::string to_string(Experiment e);
std::string to_string(MetaKind m);
Experiment parse_experiment(const std::string& s);
MetaKind parse_meta(const std::string& s);

struct ExperimentConfig {
  Experiment experiment = Experiment::Lea;
  std::vector<MetaKind> metas{MetaKind::Cbce, MetaKind::Saol};
  Schedule schedule = Schedule::data_streaming(2);
  PriorMode prior = PriorMode::Uniform;
  bool warm_start = true;
  int reps = 1;
  std::uint64_t base_seed = 0;
  /// Replaces the default horizon (600 for LEA, 1500 for metric learning).
  std::optional<Time> horizon;
  std::size_t n_experts = 1000;
  /// Fixed Share tuning: switch count m and the horizon it is tuned for.
  std::optional<Time> fs_switches;
  std::optional<Time> fs_horizon;
  MetricParams metric{};
  /// Per-round CSV path; empty for no file. The summary JSON goes next to
  /// it with the extension replaced by ".summary.json".
  std::string out;
  /// Worker threads for repetitions; 0 picks the hardware concurrency.
  int threads = 0;

  Time effective_horizon() const;
  /// Throws std::invalid_argument for inconsistent settings.
  void validate() const;
};

/// Per-algorithm aggregates over all repetitions.
struct AlgoSummary {
  std::string algo;
  double mean_cumulative_loss = 0.0;
  /// Mean loss over the last 50 rounds of each segment, averaged over reps.
  std::vector<double> segment_tail_means;
  std::map<Time, double> sa_regret;
  double m_shift_regret = 0.0;
};

struct ExperimentSummary {
  Experiment experiment = Experiment::Lea;
  Time horizon = 0;
  int reps = 0;
  std::vector<Interval> segments;
  std::vector<AlgoSummary> algos;
  /// Tail means of the per-segment best comparator (the favored expert for LEA).
  std::vector<double> reference_tail_means;
  /// Loss range seen across every recorded round.
  double min_loss = 0.0;
  double max_loss = 0.0;

  const AlgoSummary& algo(const std::string& name) const;
};

/// Runs every configured algorithm on `reps` environments seeded
/// base_seed + rep, writes the CSV and summary when `out` is set, and
/// returns the summary. Output is deterministic in the config.
ExperimentSummary run_experiment(const ExperimentConfig& config);

/// Same run, writing the CSV rows to `csv` instead of a file.
ExperimentSummary run_experiment(const ExperimentConfig& config, std::ostream& csv);

std::string summary_json(const ExperimentSummary& summary);

inline constexpr const char* kCsvHeader = "rep,t,algo,loss,movmean_loss,best_expert_loss,n_active_runs";

struct BoundCheck {
  std::string kind;  // "interval", "window" or "blackbox"
  std::uint64_t seed = 0;
  Interval interval;
  double realized = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct BoundReport {
  std::vector<BoundCheck> checks;
  /// Black-box constant c (regret <= c sqrt(T)) used for the SA checks.
  double blackbox_c = 0.0;

  std::size_t violations() const;
  std::size_t count(const std::string& kind) const;
  bool all_pass() const { return violations() == 0; }
};

/// Replays CBCE with coin betting on the expert-advice stream and checks,
/// for every seed: the meta regret of every schedule interval against its
/// bound sqrt(|J| (7 ln J_2 + 5)) (intervals cut at T are checked as cut);
/// the regret of every run against the coin-betting bound; and the regret
/// on every window of lengths 1, 2, 4, ..., T against the SA bound with
/// alpha = 1/2. Requires the decaying prior and the LEA experiment; throws
/// std::invalid_argument otherwise.
BoundReport verify_bounds(const ExperimentConfig& config);

}  // namespace cbce
