#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbce/black_boxes.hpp"
#include "cbce/coin_betting.hpp"
#include "cbce/evaluation.hpp"
#include "cbce/harness.hpp"
#include "cbce/interval.hpp"
#include "cbce/meta.hpp"
#include "cbce/sleeping_cb.hpp"

namespace py = pybind11;
using namespace cbce;

namespace {

Schedule make_schedule(const std::string& name, int g) {
  if (name == "gc") return Schedule::geometric_covering();
  if (name == "ds") return Schedule::data_streaming(g);
  throw std::invalid_argument("unknown schedule: " + name + " (expected gc or ds)");
}

PriorMode parse_prior(const std::string& s) {
  if (s == "paper") return PriorMode::StartDecay;
  if (s == "uniform") return PriorMode::Uniform;
  throw std::invalid_argument("unknown prior: " + s + " (expected paper or uniform)");
}

using Pairs = std::vector<std::pair<Time, Time>>;

Pairs to_pairs(const std::vector<Interval>& v) {
  Pairs out;
  out.reserve(v.size());
  for (const Interval& i : v) out.emplace_back(i.start, i.end);
  return out;
}

Trace make_trace(std::vector<double> learner, const std::vector<std::vector<double>>& comparators) {
  Trace tr;
  tr.learner_loss = std::move(learner);
  const auto rows = static_cast<Eigen::Index>(comparators.size());
  const Eigen::Index cols = rows == 0 ? 0 : static_cast<Eigen::Index>(comparators[0].size());
  tr.comparator_losses.resize(rows, cols);
  for (Eigen::Index t = 0; t < rows; ++t) {
    const auto& row = comparators[static_cast<std::size_t>(t)];
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::invalid_argument("comparator_losses must be a rectangular T x K list");
    }
    for (Eigen::Index k = 0; k < cols; ++k) tr.comparator_losses(t, k) = row[static_cast<std::size_t>(k)];
  }
  tr.validate();
  return tr;
}

// CBCE or SAOL over coin-betting expert learners, stepped one loss vector at a time.
class LeaMeta {
 public:
  LeaMeta(const std::string& kind, std::size_t n, const std::string& schedule, int g,
          const std::string& prior, bool warm_start) {
    const Schedule s = make_schedule(schedule, g);
    if (kind == "cbce") {
      cbce_.emplace(make_cbce(LeaFamily{n, {}}, s, parse_prior(prior), warm_start));
    } else if (kind == "saol") {
      saol_.emplace(make_saol(LeaFamily{n, {}}, s, warm_start));
    } else {
      throw std::invalid_argument("unknown meta: " + kind + " (expected cbce or saol)");
    }
    n_ = n;
  }

  py::dict step(const std::vector<double>& losses) {
    if (losses.size() != n_) throw std::invalid_argument("expected one loss per expert");
    const std::span<const double> r(losses);
    const auto st = cbce_ ? cbce_->step(r) : saol_->step(r);
    py::dict d;
    d["decision"] = st.decision;
    d["loss"] = st.loss;
    d["n_active_runs"] = st.runs.size();
    return d;
  }

  Time time() const { return cbce_ ? cbce_->time() : saol_->time(); }

 private:
  std::size_t n_ = 0;
  std::optional<Cbce<LeaFamily>> cbce_;
  std::optional<Saol<LeaFamily>> saol_;
};

ExperimentConfig make_config(const std::string& experiment, const std::vector<std::string>& metas,
                             const std::string& schedule, int g, const std::string& prior, int reps,
                             std::uint64_t seed, std::optional<Time> horizon, std::size_t n_experts,
                             std::optional<Time> fs_m, std::optional<Time> fs_horizon, bool warm_start,
                             int threads, const std::string& out) {
  ExperimentConfig cfg;
  cfg.experiment = parse_experiment(experiment);
  cfg.metas.clear();
  for (const auto& m : metas) cfg.metas.push_back(parse_meta(m));
  cfg.schedule = make_schedule(schedule, g);
  cfg.prior = parse_prior(prior);
  cfg.reps = reps;
  cfg.base_seed = seed;
  cfg.horizon = horizon;
  cfg.n_experts = n_experts;
  cfg.fs_switches = fs_m;
  cfg.fs_horizon = fs_horizon;
  cfg.warm_start = warm_start;
  cfg.threads = threads;
  cfg.out = out;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Parameter-free online learning: sleeping coin betting and CBCE.";

  // Intervals and schedules.
  m.def("gc_active", [](Time t) { return to_pairs(gc_active(t)); }, py::arg("t"));
  m.def("ds_active", [](Time t, int g) { return to_pairs(ds_active(t, g)); }, py::arg("t"), py::arg("g") = 2);
  m.def(
      "starting_at",
      [](const std::string& schedule, Time t, int g) { return to_pairs(make_schedule(schedule, g).starting_at(t)); },
      py::arg("schedule"), py::arg("t"), py::arg("g") = 2);
  m.def(
      "partition",
      [](const std::string& schedule, Time start, Time end, int g) {
        return to_pairs(make_schedule(schedule, g).partition(Interval(start, end)));
      },
      py::arg("schedule"), py::arg("start"), py::arg("end"), py::arg("g") = 2);

  // KT potential.
  m.def("kt_potential", [](std::int64_t t, double x) { return kt_potential(t, x); }, py::arg("t"), py::arg("x"));
  m.def("log_kt_potential", [](std::int64_t t, double x) { return log_kt_potential(t, x); }, py::arg("t"),
        py::arg("x"));
  m.def("betting_fraction_from_potential", [](std::int64_t t, double z) { return betting_fraction_from_potential(t, z); },
        py::arg("t"), py::arg("z"));
  m.def("kt_betting_fraction", [](double z, std::int64_t s) { return kt_betting_fraction(z, s); }, py::arg("z"),
        py::arg("s"));
  m.def(
      "wealth_lower_bound_holds",
      [](const std::vector<double>& coins, double tolerance) {
        const WealthCheck w = wealth_lower_bound_holds(coins, {}, tolerance);
        py::dict d;
        d["holds"] = w.holds;
        d["first_violation"] = w.first_violation;
        d["min_slack"] = w.min_slack;
        d["final_wealth"] = w.final_wealth;
        d["final_potential"] = w.final_potential;
        return d;
      },
      py::arg("coins"), py::arg("tolerance") = 1e-9);

  // Sleeping coin betting.
  py::class_<SleepingCb>(m, "SleepingCb")
      .def(py::init<>())
      .def("add_experts", &SleepingCb::add_experts, py::arg("count"), py::arg("prior_weight") = 1.0)
      .def("retire", &SleepingCb::retire, py::arg("id"))
      .def("decide", [](const SleepingCb& s, const std::vector<ExpertId>& awake) { return s.decide(awake); },
           py::arg("awake"))
      .def(
          "update",
          [](SleepingCb& s, const std::vector<ExpertId>& awake, const std::vector<double>& losses, double learner_loss) {
            return s.update(awake, losses, learner_loss).prior_weighted_gain;
          },
          py::arg("awake"), py::arg("losses"), py::arg("learner_loss"))
      .def("wealth", [](const SleepingCb& s, ExpertId id) { return s.bettor(id).wealth; }, py::arg("id"))
      .def("__len__", &SleepingCb::size)
      .def_property_readonly("rounds", &SleepingCb::rounds);

  py::class_<LeaMeta>(m, "LeaMeta")
      .def(py::init<const std::string&, std::size_t, const std::string&, int, const std::string&, bool>(),
           py::arg("kind"), py::arg("n_experts"), py::arg("schedule") = "ds", py::arg("g") = 2,
           py::arg("prior") = "uniform", py::arg("warm_start") = true)
      .def("step", &LeaMeta::step, py::arg("losses"))
      .def_property_readonly("time", &LeaMeta::time);

  // Evaluation.
  m.def("sa_regret",
        [](std::vector<double> learner, const std::vector<std::vector<double>>& comp, Time tau) {
          return sa_regret(make_trace(std::move(learner), comp), tau);
        },
        py::arg("learner_loss"), py::arg("comparator_losses"), py::arg("tau"));
  m.def(
      "m_shift_regret",
      [](std::vector<double> learner, const std::vector<std::vector<double>>& comp, int shifts) {
        const MShiftResult r = m_shift_regret(make_trace(std::move(learner), comp), shifts);
        py::dict d;
        d["regret"] = r.regret;
        d["comparator_loss"] = r.comparator_loss;
        d["sequence"] = r.sequence;
        return d;
      },
      py::arg("learner_loss"), py::arg("comparator_losses"), py::arg("m"));
  m.def("moving_mean", [](const std::vector<double>& x, int w) { return moving_mean(x, w); }, py::arg("series"),
        py::arg("window"));

  // Harness.
  m.def(
      "run_experiment",
      [](const std::string& experiment, const std::vector<std::string>& metas, const std::string& schedule, int g,
         const std::string& prior, int reps, std::uint64_t seed, std::optional<Time> horizon, std::size_t n_experts,
         std::optional<Time> fs_m, std::optional<Time> fs_horizon, bool warm_start, int threads,
         const std::string& out) {
        const ExperimentConfig cfg = make_config(experiment, metas, schedule, g, prior, reps, seed, horizon, n_experts,
                                                 fs_m, fs_horizon, warm_start, threads, out);
        std::string summary;
        std::string csv;
        {
          py::gil_scoped_release release;
          if (out.empty()) {
            std::ostringstream os;
            summary = summary_json(run_experiment(cfg, os));
            csv = os.str();
          } else {
            summary = summary_json(run_experiment(cfg));
          }
        }
        return py::make_tuple(csv, summary);
      },
      py::arg("experiment") = "lea", py::arg("metas") = std::vector<std::string>{"cbce", "saol"},
      py::arg("schedule") = "ds", py::arg("g") = 2, py::arg("prior") = "uniform", py::arg("reps") = 1,
      py::arg("seed") = 0, py::arg("horizon") = py::none(), py::arg("n_experts") = 1000,
      py::arg("fs_m") = py::none(), py::arg("fs_horizon") = py::none(), py::arg("warm_start") = true,
      py::arg("threads") = 0, py::arg("out") = "");

  m.def(
      "verify_bounds",
      [](const std::string& schedule, int g, int reps, std::uint64_t seed, std::optional<Time> horizon,
         std::size_t n_experts, bool warm_start) {
        const ExperimentConfig cfg = make_config("lea", {"cbce"}, schedule, g, "paper", reps, seed, horizon,
                                                 n_experts, std::nullopt, std::nullopt, warm_start, 0, "");
        BoundReport r;
        {
          py::gil_scoped_release release;
          r = verify_bounds(cfg);
        }
        py::list checks;
        for (const BoundCheck& c : r.checks) {
          py::dict d;
          d["kind"] = c.kind;
          d["seed"] = c.seed;
          d["interval"] = py::make_tuple(c.interval.start, c.interval.end);
          d["realized"] = c.realized;
          d["bound"] = c.bound;
          d["pass"] = c.pass;
          checks.append(d);
        }
        py::dict out;
        out["checks"] = checks;
        out["violations"] = r.violations();
        out["blackbox_c"] = r.blackbox_c;
        return out;
      },
      py::arg("schedule") = "ds", py::arg("g") = 2, py::arg("reps") = 1, py::arg("seed") = 0,
      py::arg("horizon") = py::none(), py::arg("n_experts") = 1000, py::arg("warm_start") = true);

  m.attr("CSV_HEADER") = kCsvHeader;
}
