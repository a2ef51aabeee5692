"""Parameter-free online learning: sleeping coin betting, CBCE and baselines."""

import json

from . import _core
from ._core import (
    CSV_HEADER,
    LeaMeta,
    SleepingCb,
    betting_fraction_from_potential,
    ds_active,
    gc_active,
    kt_betting_fraction,
    kt_potential,
    log_kt_potential,
    m_shift_regret,
    moving_mean,
    partition,
    sa_regret,
    starting_at,
    wealth_lower_bound_holds,
)

__all__ = [
    "CSV_HEADER",
    "LeaMeta",
    "SleepingCb",
    "betting_fraction_from_potential",
    "ds_active",
    "gc_active",
    "kt_betting_fraction",
    "kt_potential",
    "log_kt_potential",
    "m_shift_regret",
    "moving_mean",
    "partition",
    "run_experiment",
    "sa_regret",
    "starting_at",
    "verify_bounds",
    "wealth_lower_bound_holds",
]


def run_experiment(**kwargs):
    """Runs the benchmark harness. Returns (csv_text, summary_dict).

    csv_text is empty when ``out`` is given; the CSV and summary JSON are
    then written to disk.
    """
    csv, summary = _core.run_experiment(**kwargs)
    return csv, json.loads(summary)


def verify_bounds(**kwargs):
    """Replays CBCE on expert-advice streams and checks its regret bounds."""
    return _core.verify_bounds(**kwargs)
