#include "cbce/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <type_traits>

#include <json.hpp>

#include "cbce/environments.hpp"
#include "cbce/evaluation.hpp"

namespace cbce {

std::string to_string(Experiment e) { return e == Experiment::Lea ? "lea" : "metric"; }

std::string to_string(MetaKind m) {
  switch (m) {
    case MetaKind::Cbce: return "cbce";
    case MetaKind::Saol: return "saol";
    case MetaKind::FixedShare: return "fixedshare";
    case MetaKind::None: return "none";
  }
  return "unknown";
}

Experiment parse_experiment(const std::string& s) {
  if (s == "lea") return Experiment::Lea;
  if (s == "metric") return Experiment::Metric;
  throw std::invalid_argument("unknown experiment: " + s);
}

MetaKind parse_meta(const std::string& s) {
  if (s == "cbce") return MetaKind::Cbce;
  if (s == "saol") return MetaKind::Saol;
  if (s == "fixedshare") return MetaKind::FixedShare;
  if (s == "none") return MetaKind::None;
  throw std::invalid_argument("unknown meta algorithm: " + s);
}

Time ExperimentConfig::effective_horizon() const {
  if (horizon) return *horizon;
  return experiment == Experiment::Lea ? 600 : 1500;
}

void ExperimentConfig::validate() const {
  if (reps < 1) throw std::invalid_argument("reps must be >= 1");
  if (metas.empty()) throw std::invalid_argument("at least one meta algorithm is required");
  if (effective_horizon() < 1) throw std::invalid_argument("horizon must be >= 1");
  if (schedule.g < 1) throw std::invalid_argument("schedule multiplier g must be >= 1");
  if (threads < 0) throw std::invalid_argument("threads must be >= 0");
  if (experiment == Experiment::Lea && n_experts < 3) {
    throw std::invalid_argument("the expert stream needs at least 3 experts");
  }
  for (MetaKind m : metas) {
    if (std::count(metas.begin(), metas.end(), m) > 1) {
      throw std::invalid_argument("meta algorithm listed twice: " + to_string(m));
    }
    if (m != MetaKind::FixedShare) continue;
    if (experiment != Experiment::Lea) {
      throw std::invalid_argument("fixedshare applies to the expert-advice experiment only");
    }
    if (!fs_switches || !fs_horizon) {
      throw std::invalid_argument("fixedshare needs its tuning horizon and switch count (--fs-horizon, --fs-m)");
    }
    if (*fs_switches < 0 || *fs_horizon < 2) {
      throw std::invalid_argument("fixedshare tuning needs m >= 0 and T >= 2");
    }
  }
}

const AlgoSummary& ExperimentSummary::algo(const std::string& name) const {
  for (const auto& a : algos) {
    if (a.algo == name) return a;
  }
  throw std::out_of_range("no algorithm named " + name);
}

namespace {

constexpr Time kTailLength = 50;
constexpr int kMShiftBudget = 2;
constexpr Time kSaWindows[] = {50, 100, 200};

struct AlgoRun {
  std::string name;
  std::vector<double> loss;
  std::vector<int> active;
  std::vector<MetricModel> snapshots;
};

struct AlgoStats {
  double cumulative = 0.0;
  std::vector<double> tails;
  std::map<Time, double> sa;
  double mshift = 0.0;
};

struct RepOutput {
  std::vector<AlgoRun> runs;
  std::vector<AlgoStats> stats;
  std::vector<double> best;
  std::vector<double> reference_tails;
};

double tail_mean(std::span<const double> series, const Interval& seg) {
  const Time len = std::min(kTailLength, seg.length());
  double acc = 0.0;
  for (Time t = seg.end - len + 1; t <= seg.end; ++t) acc += series[t - 1];
  return acc / static_cast<double>(len);
}

template <class Meta, class Env>
AlgoRun play_meta(Meta meta, const Env& env, const std::string& name,
                  const std::vector<Interval>& segments, bool snapshot) {
  AlgoRun run;
  run.name = name;
  const Time horizon = env.horizon();
  run.loss.reserve(horizon);
  run.active.reserve(horizon);
  std::size_t seg = 0;
  for (Time t = 1; t <= horizon; ++t) {
    auto s = meta.step(env.round(t));
    run.loss.push_back(s.loss);
    run.active.push_back(static_cast<int>(s.runs.size()));
    if constexpr (std::is_same_v<decltype(s.decision), MetricModel>) {
      if (snapshot && t == segments[seg].end) {
        run.snapshots.push_back(s.decision);
        ++seg;
      }
    }
  }
  return run;
}

AlgoRun play_lea(const ExperimentConfig& cfg, MetaKind kind, const LeaEnvironment& env) {
  const LeaFamily family{env.n_experts(), {}};
  switch (kind) {
    case MetaKind::Cbce:
      return play_meta(make_cbce(family, cfg.schedule, cfg.prior, cfg.warm_start), env, "cbce",
                       env.segments, false);
    case MetaKind::Saol:
      return play_meta(make_saol(family, cfg.schedule, cfg.warm_start), env, "saol", env.segments,
                       false);
    case MetaKind::FixedShare: {
      const Time tuned_for = *cfg.fs_horizon;
      FixedShare fs(env.n_experts(),
                    FixedShareParams::tuned(env.n_experts(), tuned_for, *cfg.fs_switches));
      AlgoRun run{"fixedshare", {}, {}, {}};
      for (Time t = 1; t <= env.horizon(); ++t) {
        run.loss.push_back(fs.step(env.round(t)).loss);
        run.active.push_back(0);
      }
      return run;
    }
    case MetaKind::None: {
      LeaLearner cb(env.n_experts());
      AlgoRun run{"cb", {}, {}, {}};
      for (Time t = 1; t <= env.horizon(); ++t) {
        run.loss.push_back(cb.step(env.round(t)).loss);
        run.active.push_back(1);
      }
      return run;
    }
  }
  throw std::logic_error("unhandled meta kind");
}

AlgoRun play_metric(const ExperimentConfig& cfg, MetaKind kind, const MetricEnvironment& env) {
  const MetricFamily family{MetricEnvironment::kDim, cfg.metric};
  switch (kind) {
    case MetaKind::Cbce:
      return play_meta(make_cbce(family, cfg.schedule, cfg.prior, cfg.warm_start), env, "cbce",
                       env.segments, true);
    case MetaKind::Saol:
      return play_meta(make_saol(family, cfg.schedule, cfg.warm_start), env, "saol", env.segments,
                       true);
    case MetaKind::None: {
      MetricLearner learner(MetricEnvironment::kDim, cfg.metric);
      AlgoRun run{"metric", {}, {}, {}};
      std::size_t seg = 0;
      for (Time t = 1; t <= env.horizon(); ++t) {
        run.loss.push_back(family.loss(env.round(t), learner.decision()));
        run.active.push_back(1);
        learner.observe(env.round(t));
        if (t == env.segments[seg].end) {
          run.snapshots.push_back(learner.decision());
          ++seg;
        }
      }
      return run;
    }
    case MetaKind::FixedShare:
      break;
  }
  throw std::invalid_argument("meta algorithm not available for metric learning");
}

/// Per-segment best comparator in hindsight (lowest index on ties), as a
/// per-round loss series.
std::vector<double> best_comparator_series(const Eigen::MatrixXd& comp,
                                           const std::vector<Interval>& segments) {
  std::vector<double> out(static_cast<std::size_t>(comp.rows()));
  for (const Interval& seg : segments) {
    Eigen::Index best = 0;
    comp.middleRows(seg.start - 1, seg.length()).colwise().sum().minCoeff(&best);
    for (Time t = seg.start; t <= seg.end; ++t) out[t - 1] = comp(t - 1, best);
  }
  return out;
}

AlgoStats stats_for(const AlgoRun& run, const Eigen::MatrixXd& comp,
                    const std::vector<Interval>& segments) {
  Trace trace;
  trace.learner_loss = run.loss;
  trace.comparator_losses = comp;
  AlgoStats s;
  for (double l : run.loss) s.cumulative += l;
  for (const Interval& seg : segments) s.tails.push_back(tail_mean(run.loss, seg));
  for (Time tau : kSaWindows) {
    if (tau <= trace.horizon()) s.sa[tau] = sa_regret(trace, tau);
  }
  s.mshift = m_shift_regret(trace, kMShiftBudget).regret;
  return s;
}

RepOutput run_rep(const ExperimentConfig& cfg, int rep) {
  const std::uint64_t seed = cfg.base_seed + static_cast<std::uint64_t>(rep);
  const Time horizon = cfg.effective_horizon();
  RepOutput out;
  Eigen::MatrixXd comp;
  std::vector<Interval> segments;
  if (cfg.experiment == Experiment::Lea) {
    const LeaEnvironment env = gen_lea_environment(seed, horizon, cfg.n_experts);
    for (MetaKind m : cfg.metas) out.runs.push_back(play_lea(cfg, m, env));
    comp = env.losses;
    segments = env.segments;
  } else {
    const MetricEnvironment env = gen_metric_environment(seed, horizon);
    for (MetaKind m : cfg.metas) out.runs.push_back(play_metric(cfg, m, env));
    // Comparators: every algorithm's model at the end of every segment.
    const MetricFamily family{MetricEnvironment::kDim, cfg.metric};
    std::vector<const MetricModel*> models;
    for (const auto& r : out.runs) {
      for (const auto& m : r.snapshots) models.push_back(&m);
    }
    comp.resize(horizon, static_cast<Eigen::Index>(models.size()));
    for (Time t = 1; t <= horizon; ++t) {
      for (std::size_t k = 0; k < models.size(); ++k) {
        comp(t - 1, static_cast<Eigen::Index>(k)) = family.loss(env.round(t), *models[k]);
      }
    }
    segments = env.segments;
  }
  out.best = best_comparator_series(comp, segments);
  for (const Interval& seg : segments) out.reference_tails.push_back(tail_mean(out.best, seg));
  for (const auto& r : out.runs) out.stats.push_back(stats_for(r, comp, segments));
  for (auto& r : out.runs) r.snapshots.clear();
  return out;
}

template <class Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(1, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void append_number(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  line += buf;
}

void write_rows(std::ostream& os, int rep, const AlgoRun& run, const std::vector<double>& best,
                int window) {
  const std::vector<double> smooth = moving_mean(run.loss, window);
  std::string line;
  for (std::size_t k = 0; k < run.loss.size(); ++k) {
    line.clear();
    line += std::to_string(rep);
    line += ',';
    line += std::to_string(k + 1);
    line += ',';
    line += run.name;
    line += ',';
    append_number(line, run.loss[k]);
    line += ',';
    append_number(line, smooth[k]);
    line += ',';
    append_number(line, best[k]);
    line += ',';
    line += std::to_string(run.active[k]);
    line += '\n';
    os << line;
  }
}

std::string summary_path(const std::string& csv_path) {
  const std::string ext = ".csv";
  if (csv_path.size() > ext.size() &&
      csv_path.compare(csv_path.size() - ext.size(), ext.size(), ext) == 0) {
    return csv_path.substr(0, csv_path.size() - ext.size()) + ".summary.json";
  }
  return csv_path + ".summary.json";
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config, std::ostream& csv) {
  config.validate();
  if (config.effective_horizon() < 3) {
    throw std::invalid_argument("experiments need a horizon of at least 3 (one round per segment)");
  }
  std::vector<RepOutput> reps(static_cast<std::size_t>(config.reps));
  parallel_for(config.reps, config.threads, [&](int r) { reps[r] = run_rep(config, r); });

  ExperimentSummary summary;
  summary.experiment = config.experiment;
  summary.horizon = config.effective_horizon();
  summary.reps = config.reps;
  summary.segments = equal_segments(summary.horizon, 3);
  summary.min_loss = std::numeric_limits<double>::infinity();
  summary.max_loss = -std::numeric_limits<double>::infinity();

  const int window = config.experiment == Experiment::Lea ? 10 : 20;
  csv << kCsvHeader << '\n';
  for (int r = 0; r < config.reps; ++r) {
    for (const auto& run : reps[r].runs) write_rows(csv, r, run, reps[r].best, window);
  }
  if (!csv) throw std::runtime_error("failed to write CSV output");

  const double n = static_cast<double>(config.reps);
  const std::size_t n_segments = summary.segments.size();
  summary.reference_tail_means.assign(n_segments, 0.0);
  for (std::size_t a = 0; a < config.metas.size(); ++a) {
    AlgoSummary s;
    s.algo = reps.front().runs[a].name;
    s.segment_tail_means.assign(n_segments, 0.0);
    for (const auto& rep : reps) {
      const AlgoStats& st = rep.stats[a];
      s.mean_cumulative_loss += st.cumulative / n;
      for (std::size_t k = 0; k < n_segments; ++k) s.segment_tail_means[k] += st.tails[k] / n;
      for (const auto& [tau, v] : st.sa) s.sa_regret[tau] += v / n;
      s.m_shift_regret += st.mshift / n;
      for (double l : rep.runs[a].loss) {
        summary.min_loss = std::min(summary.min_loss, l);
        summary.max_loss = std::max(summary.max_loss, l);
      }
    }
    summary.algos.push_back(std::move(s));
  }
  for (const auto& rep : reps) {
    for (std::size_t k = 0; k < n_segments; ++k) {
      summary.reference_tail_means[k] += rep.reference_tails[k] / n;
    }
  }
  return summary;
}

ExperimentSummary run_experiment(const ExperimentConfig& config) {
  if (config.out.empty()) {
    std::ostringstream sink;
    return run_experiment(config, sink);
  }
  config.validate();
  if (config.effective_horizon() < 3) {
    throw std::invalid_argument("experiments need a horizon of at least 3 (one round per segment)");
  }
  std::ofstream csv(config.out, std::ios::binary);
  if (!csv) throw std::runtime_error("cannot open output file: " + config.out);
  ExperimentSummary summary = run_experiment(config, csv);
  csv.close();
  if (!csv) throw std::runtime_error("failed writing output file: " + config.out);

  const std::string json_path = summary_path(config.out);
  std::ofstream js(json_path, std::ios::binary);
  if (!js) throw std::runtime_error("cannot open output file: " + json_path);
  js << summary_json(summary) << '\n';
  if (!js) throw std::runtime_error("failed writing output file: " + json_path);
  return summary;
}

std::string summary_json(const ExperimentSummary& summary) {
  nlohmann::ordered_json j;
  j["experiment"] = to_string(summary.experiment);
  j["horizon"] = summary.horizon;
  j["reps"] = summary.reps;
  auto& segs = j["segments"] = nlohmann::ordered_json::array();
  for (const auto& s : summary.segments) segs.push_back({s.start, s.end});
  j["reference_segment_tail_means"] = summary.reference_tail_means;
  j["loss_range"] = {summary.min_loss, summary.max_loss};
  auto& algos = j["algorithms"] = nlohmann::ordered_json::object();
  for (const auto& a : summary.algos) {
    nlohmann::ordered_json e;
    e["mean_cumulative_loss"] = a.mean_cumulative_loss;
    e["segment_tail_means"] = a.segment_tail_means;
    auto& sa = e["sa_regret"] = nlohmann::ordered_json::object();
    for (const auto& [tau, v] : a.sa_regret) sa[std::to_string(tau)] = v;
    e["m_shift_regret"] = {{"m", kMShiftBudget}, {"value", a.m_shift_regret}};
    algos[a.algo] = std::move(e);
  }
  return j.dump(2);
}

// ---------------------------------------------------------------------------

std::size_t BoundReport::violations() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const BoundCheck& c) { return !c.pass; }));
}

std::size_t BoundReport::count(const std::string& kind) const {
  return static_cast<std::size_t>(std::count_if(
      checks.begin(), checks.end(), [&](const BoundCheck& c) { return c.kind == kind; }));
}

namespace {

constexpr double kWarmStartFloor = 1e-12;

struct RunTally {
  Interval interval;
  double meta_regret = 0.0;
  double run_loss = 0.0;
  Time last = 0;
};

std::vector<BoundCheck> verify_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                                    double kl_max, double c) {
  const Time horizon = cfg.effective_horizon();
  const LeaEnvironment env = gen_lea_environment(seed, horizon, cfg.n_experts);
  const std::size_t n = env.n_experts();
  auto meta = make_cbce(LeaFamily{n, {}}, cfg.schedule, PriorMode::StartDecay, cfg.warm_start);

  std::vector<double> learner(horizon);
  std::map<RunId, RunTally> tallies;
  for (Time t = 1; t <= horizon; ++t) {
    const auto s = meta.step(env.round(t));
    learner[t - 1] = s.loss;
    for (const RunRecord& r : s.runs) {
      auto [it, fresh] = tallies.try_emplace(r.run_id, RunTally{r.interval});
      it->second.meta_regret += s.loss - r.loss;
      it->second.run_loss += r.loss;
      it->second.last = t;
    }
  }

  // Column prefix sums of expert losses: row t holds rounds 1..t.
  Eigen::MatrixXd prefix = Eigen::MatrixXd::Zero(horizon + 1, static_cast<Eigen::Index>(n));
  for (Time t = 1; t <= horizon; ++t) prefix.row(t) = prefix.row(t - 1) + env.losses.row(t - 1);
  std::vector<double> learner_prefix(horizon + 1, 0.0);
  for (Time t = 1; t <= horizon; ++t) learner_prefix[t] = learner_prefix[t - 1] + learner[t - 1];
  auto best_expert_loss = [&](Time a, Time b) { return (prefix.row(b) - prefix.row(a - 1)).minCoeff(); };

  std::vector<BoundCheck> out;
  for (const auto& [id, tally] : tallies) {
    const Interval seen(tally.interval.start, tally.last);
    const double meta_bound = cbce_meta_regret_bound(seen);
    out.push_back({"interval", seed, seen, tally.meta_regret, meta_bound,
                   tally.meta_regret <= meta_bound});

    const double len = static_cast<double>(seen.length());
    const double bb_regret = tally.run_loss - best_expert_loss(seen.start, seen.end);
    const double bb_bound = std::sqrt(2.0 * len * (kl_max + 0.5 * std::log(len) + 2.0));
    out.push_back({"blackbox", seed, seen, bb_regret, bb_bound, bb_regret <= bb_bound});
  }

  std::vector<Time> taus;
  for (Time tau = 1; tau <= horizon; tau *= 2) taus.push_back(tau);
  if (taus.back() != horizon) taus.push_back(horizon);
  for (Time tau : taus) {
    BoundCheck worst{"window", seed, Interval(1, tau), 0.0, 0.0, true};
    double worst_slack = std::numeric_limits<double>::infinity();
    for (Time s = 1; s + tau - 1 <= horizon; ++s) {
      const Interval window(s, s + tau - 1);
      const double realized =
          learner_prefix[window.end] - learner_prefix[s - 1] - best_expert_loss(s, window.end);
      const double bound = cbce_sa_regret_bound(window, c, 0.5);
      if (bound - realized < worst_slack) {
        worst_slack = bound - realized;
        worst = {"window", seed, window, realized, bound, realized <= bound};
      }
    }
    out.push_back(worst);
  }
  return out;
}

}  // namespace

BoundReport verify_bounds(const ExperimentConfig& config) {
  config.validate();
  if (config.prior != PriorMode::StartDecay) {
    throw std::invalid_argument("verify-bounds requires --prior paper");
  }
  if (config.experiment != Experiment::Lea) {
    throw std::invalid_argument("verify-bounds runs on the expert-advice experiment only");
  }
  const double n = static_cast<double>(config.n_experts);
  const double kl_max = config.warm_start
                            ? std::log((1.0 + n * kWarmStartFloor) / kWarmStartFloor)
                            : std::log(n);
  const Time horizon = config.effective_horizon();
  BoundReport report;
  report.blackbox_c = std::sqrt(2.0 * (kl_max + 0.5 * std::log(static_cast<double>(horizon)) + 2.0));

  std::vector<std::vector<BoundCheck>> per_seed(static_cast<std::size_t>(config.reps));
  parallel_for(config.reps, config.threads, [&](int r) {
    per_seed[r] = verify_seed(config, config.base_seed + static_cast<std::uint64_t>(r), kl_max,
                              report.blackbox_c);
  });
  for (auto& v : per_seed) {
    for (auto& c : v) report.checks.push_back(std::move(c));
  }
  return report;
}

}  // namespace cbce
