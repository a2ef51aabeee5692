import csv
import io
import math

import pytest

import cbce


def test_gc_active_count_and_partition():
    for t in range(1, 300):
        assert len(cbce.gc_active(t)) == int(math.floor(math.log2(t))) + 1
        assert all(s <= t <= e for s, e in cbce.gc_active(t))
    pieces = cbce.partition("gc", 5, 20)
    assert pieces[0][0] == 5 and pieces[-1][1] == 20
    assert all(b[0] == a[1] + 1 for a, b in zip(pieces, pieces[1:]))
    assert cbce.starting_at("ds", 4, g=2) == [(4, 11)]


def test_kt_values():
    assert cbce.kt_potential(0, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert cbce.kt_potential(1, 1.0) == pytest.approx(1.0, abs=1e-9)
    assert cbce.kt_potential(2, 2.0) == pytest.approx(1.5, abs=1e-9)
    assert cbce.betting_fraction_from_potential(5, 2.0) == pytest.approx(cbce.kt_betting_fraction(2.0, 5), abs=1e-9)
    assert cbce.wealth_lower_bound_holds([1.0, -0.5, 0.25, 1.0])["holds"]
    with pytest.raises(ValueError):
        cbce.wealth_lower_bound_holds([2.0])


def test_sleeping_cb_decides_over_awake_experts():
    s = cbce.SleepingCb()
    first = s.add_experts(3)
    assert first == 0 and len(s) == 3
    p = s.decide([0, 2])
    assert len(p) == 2 and sum(p) == pytest.approx(1.0)
    s.update([0, 2], [0.0, 1.0], 0.5)
    p = s.decide([0, 2])
    assert p[0] > p[1]
    assert s.rounds == 1


def test_lea_meta_steps():
    m = cbce.LeaMeta("cbce", 3, schedule="gc", prior="paper")
    for _ in range(20):
        st = m.step([0.0, 1.0, 1.0])
        assert sum(st["decision"]) == pytest.approx(1.0)
        assert 0.0 <= st["loss"] <= 1.0
    assert st["decision"][0] > 0.5
    assert m.time == 20
    with pytest.raises(ValueError):
        cbce.LeaMeta("hedge", 3)


def test_regret_measures():
    learner = [0.5, 0.5, 0.5]
    comp = [[0.0, 1.0], [1.0, 0.0], [0.0, 1.0]]
    assert cbce.sa_regret(learner, comp, 1) == pytest.approx(0.5)
    r = cbce.m_shift_regret(learner, comp, 2)
    assert r["comparator_loss"] == pytest.approx(0.0)
    assert r["sequence"] == [0, 1, 0]
    assert cbce.moving_mean([1, 2, 3, 4, 5], 3) == pytest.approx([1.5, 2.0, 3.0, 4.0, 4.5])


def test_run_experiment_csv_and_summary():
    text, summary = cbce.run_experiment(
        experiment="lea", metas=["cbce", "saol"], reps=2, seed=3, horizon=60, n_experts=10
    )
    rows = list(csv.reader(io.StringIO(text)))
    assert ",".join(rows[0]) == cbce.CSV_HEADER
    assert len(rows) == 1 + 2 * 2 * 60
    assert set(summary["algorithms"]) == {"cbce", "saol"}
    assert "50" in summary["algorithms"]["cbce"]["sa_regret"]
    assert summary["algorithms"]["cbce"]["m_shift_regret"]["m"] == 2
    again, _ = cbce.run_experiment(
        experiment="lea", metas=["cbce", "saol"], reps=2, seed=3, horizon=60, n_experts=10, threads=1
    )
    assert again == text


def test_run_experiment_writes_files(tmp_path):
    out = tmp_path / "r.csv"
    text, summary = cbce.run_experiment(reps=1, horizon=30, n_experts=5, out=str(out))
    assert text == ""
    assert out.read_text().splitlines()[0] == cbce.CSV_HEADER
    assert (tmp_path / "r.summary.json").exists()
    with pytest.raises(ValueError):
        cbce.run_experiment(metas=["fixedshare"], horizon=30, n_experts=5)


def test_verify_bounds_small():
    r = cbce.verify_bounds(reps=1, horizon=64, n_experts=8)
    assert r["violations"] == 0
    kinds = {c["kind"] for c in r["checks"]}
    assert kinds == {"interval", "window", "blackbox"}
