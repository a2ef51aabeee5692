// cbce_bench: run the benchmark experiments, check regret bounds, and print
// interval partitions.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cbce/harness.hpp"
#include "cbce/interval.hpp"

namespace {

struct Flags {
  std::string experiment = "lea";
  std::vector<std::string> metas;
  std::string schedule = "ds";
  int g = 2;
  std::string prior = "uniform";
  int reps = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::optional<std::int64_t> fs_m;
  std::optional<std::int64_t> fs_horizon;
  std::optional<std::int64_t> horizon;
  std::size_t n_experts = 1000;
  bool no_warm_start = false;
  int threads = 0;
  double metric_step = cbce::MetricParams{}.step;
  double metric_rho = cbce::MetricParams{}.rho;
};

void add_config_flags(CLI::App* app, Flags& f, bool with_meta) {
  app->add_option("--experiment", f.experiment, "Environment")
      ->check(CLI::IsMember({"lea", "metric"}))
      ->capture_default_str();
  if (with_meta) {
    app->add_option("--meta", f.metas, "Algorithm(s) to run; repeat or comma-separate")
        ->delimiter(',')
        ->check(CLI::IsMember({"cbce", "saol", "fixedshare", "none"}));
  }
  app->add_option("--schedule", f.schedule, "Interval schedule")
      ->check(CLI::IsMember({"gc", "ds"}))
      ->capture_default_str();
  app->add_option("--g", f.g, "Data-streaming length multiplier")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--prior", f.prior, "Prior over runs")
      ->check(CLI::IsMember({"paper", "uniform"}))
      ->capture_default_str();
  app->add_option("--reps", f.reps, "Repetitions")->check(CLI::PositiveNumber)->capture_default_str();
  app->add_option("--seed", f.seed, "Base seed; repetition r uses seed + r")->capture_default_str();
  app->add_option("--horizon", f.horizon, "Override the number of rounds");
  app->add_option("--n-experts", f.n_experts, "Experts in the expert-advice stream")
      ->capture_default_str();
  app->add_flag("--no-warm-start", f.no_warm_start, "Start every run from scratch");
  app->add_option("--threads", f.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app->add_option("--metric-step", f.metric_step, "Metric learner base step size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_option("--metric-rho", f.metric_rho, "Metric learner trace-norm weight")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

cbce::ExperimentConfig to_config(const Flags& f) {
  cbce::ExperimentConfig cfg;
  cfg.experiment = cbce::parse_experiment(f.experiment);
  if (!f.metas.empty()) {
    cfg.metas.clear();
    for (const auto& m : f.metas) cfg.metas.push_back(cbce::parse_meta(m));
  }
  cfg.schedule = f.schedule == "gc" ? cbce::Schedule::geometric_covering()
                                    : cbce::Schedule::data_streaming(f.g);
  cfg.prior = f.prior == "paper" ? cbce::PriorMode::StartDecay : cbce::PriorMode::Uniform;
  cfg.reps = f.reps;
  cfg.base_seed = f.seed;
  cfg.horizon = f.horizon;
  cfg.n_experts = f.n_experts;
  cfg.warm_start = !f.no_warm_start;
  cfg.fs_switches = f.fs_m;
  cfg.fs_horizon = f.fs_horizon;
  cfg.out = f.out;
  cfg.threads = f.threads;
  cfg.metric = {f.metric_rho, f.metric_step};
  return cfg;
}

int cmd_run(const Flags& f) {
  const cbce::ExperimentConfig cfg = to_config(f);
  const cbce::ExperimentSummary summary = cbce::run_experiment(cfg);
  std::cout << cbce::summary_json(summary) << '\n';
  return 0;
}

int cmd_verify(const Flags& f) {
  cbce::ExperimentConfig cfg = to_config(f);
  cfg.metas = {cbce::MetaKind::Cbce};
  const cbce::BoundReport report = cbce::verify_bounds(cfg);
  std::map<std::string, std::pair<std::size_t, std::size_t>> tally;
  for (const auto& c : report.checks) {
    auto& [total, bad] = tally[c.kind];
    ++total;
    if (!c.pass) {
      ++bad;
      std::printf("FAIL %s seed=%llu interval=%s realized=%.6g bound=%.6g\n", c.kind.c_str(),
                  static_cast<unsigned long long>(c.seed), cbce::to_string(c.interval).c_str(),
                  c.realized, c.bound);
    }
  }
  for (const auto& [kind, counts] : tally) {
    std::printf("%s %s: %zu checks, %zu violations\n", counts.second == 0 ? "PASS" : "FAIL",
                kind.c_str(), counts.first, counts.second);
  }
  std::printf("black-box constant c = %.6g\n", report.blackbox_c);
  return report.all_pass() ? 0 : 1;
}

int cmd_partition(const std::string& schedule, int g, std::int64_t start, std::int64_t end) {
  const cbce::Interval i(start, end);
  const cbce::Schedule s = schedule == "gc" ? cbce::Schedule::geometric_covering()
                                            : cbce::Schedule::data_streaming(g);
  std::cout << s.name() << ' ' << cbce::to_string(i) << " ->";
  for (const auto& piece : s.partition(i)) {
    std::cout << ' ' << cbce::to_string(piece) << "(len " << piece.length() << ')';
  }
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Strongly adaptive online learning benchmarks"};
  app.require_subcommand(1);

  Flags run_flags;
  auto* run = app.add_subcommand("run", "Run an experiment and write CSV and summary JSON");
  add_config_flags(run, run_flags, true);
  run->add_option("--out", run_flags.out, "Per-round CSV path");
  run->add_option("--fs-m", run_flags.fs_m, "Fixed Share: number of switches it is tuned for");
  run->add_option("--fs-horizon", run_flags.fs_horizon, "Fixed Share: horizon it is tuned for");

  Flags verify_flags;
  verify_flags.prior = "paper";
  auto* verify = app.add_subcommand("verify-bounds", "Check regret bounds on replayed runs");
  add_config_flags(verify, verify_flags, false);

  std::string part_schedule = "gc";
  int part_g = 1;
  std::int64_t part_start = 1;
  std::int64_t part_end = 1;
  auto* part = app.add_subcommand("partition", "Print the schedule partition of an interval");
  part->add_option("--schedule", part_schedule, "Interval schedule")
      ->check(CLI::IsMember({"gc", "ds"}))
      ->capture_default_str();
  part->add_option("--g", part_g, "Data-streaming length multiplier")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  part->add_option("--start", part_start, "First round")->required();
  part->add_option("--end", part_end, "Last round")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_flags);
    if (*verify) return cmd_verify(verify_flags);
    if (*part) return cmd_partition(part_schedule, part_g, part_start, part_end);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
