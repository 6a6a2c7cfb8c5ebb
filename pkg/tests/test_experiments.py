"""Tests for the Monte Carlo sweeps, the AMP experiment and the suites."""

import json
import math

import numpy as np
import pytest

from hybrid_shrinkage.exceptions import ParameterError, UnknownPresetError
from hybrid_shrinkage.experiments import (
    AMP_HEADER,
    KNOWN_ETA,
    SURE_GRID,
    SWEEP_HEADER,
    AmpConfig,
    Check,
    SuiteConfig,
    SuiteReport,
    SweepConfig,
    amp_experiment,
    concentration_suite,
    hybrid_regret_suite,
    point_parameters,
    run_suites,
    sweep_eta,
    sweep_n,
    trial_reports,
    unbiasedness_suite,
    write_amp,
    write_report,
    write_sweep,
)
from hybrid_shrinkage.presets import (
    AMP_PRESETS,
    SWEEP_PRESETS,
    amp_preset,
    is_dimension_sweep,
    sweep_preset,
)
from hybrid_shrinkage.risk import soft_threshold_risk
from hybrid_shrinkage.selection import default_grids, minimax_lambda
from hybrid_shrinkage.signal import SignalFamily


def _small_sweep(**overrides):
    settings = {"n": 100, "etas": [0.1, 0.3], "trials": 6, "seed": 4}
    settings.update(overrides)
    return SweepConfig(**settings)


def test_point_parameters():
    """Known-eta points use the minimax threshold and a floored weight."""
    lam, epsilon = point_parameters(0.3, KNOWN_ETA)
    assert lam == minimax_lambda(0.3)
    assert epsilon == 0.3
    assert point_parameters(0.0, KNOWN_ETA)[1] == 0.02
    assert all(math.isnan(v) for v in point_parameters(0.3, SURE_GRID))


def test_trial_reports_tunes_missing_parameters(half_signal, half_observation):
    """A nan parameter is tuned on the grid."""
    grids = default_grids(half_signal.n)
    reports = trial_reports(
        half_signal, half_observation, ["st", "eb"], math.nan, math.nan, grids=grids
    )
    assert reports["st"].parameter in grids[0].values
    assert reports["eb"].parameter in grids[1].values


def test_sweep_row_order():
    """Rows come in grid order, then estimator order."""
    rows = sweep_eta(_small_sweep())
    assert [(row.eta, row.estimator) for row in rows] == [
        (0.1, "st"),
        (0.1, "eb"),
        (0.1, "hybrid"),
        (0.3, "st"),
        (0.3, "eb"),
        (0.3, "hybrid"),
    ]
    assert all(row.trials == 6 and row.std_loss >= 0.0 for row in rows)


def test_sweep_is_deterministic_across_threads(tmp_path):
    """Threaded and sequential sweeps write identical files."""
    sequential = sweep_eta(_small_sweep(tuning=SURE_GRID))
    threaded = sweep_eta(_small_sweep(tuning=SURE_GRID, threads=4))
    assert sequential == threaded

    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    write_sweep(first, sequential)
    write_sweep(second, threaded)
    assert first.read_bytes() == second.read_bytes()
    assert first.read_text().splitlines()[0] == ",".join(SWEEP_HEADER)


def test_redraw_signal_changes_results():
    """Redrawing the signal per trial gives a different average."""
    fixed = sweep_eta(_small_sweep(estimators=["st"]))
    redrawn = sweep_eta(_small_sweep(estimators=["st"], redraw_signal=True))
    assert fixed[0].mean_loss != redrawn[0].mean_loss


def test_zero_signal_matches_closed_form_risk():
    """On the zero signal the ST loss averages to the closed form risk."""
    config = SweepConfig(n=200, etas=[0.0], trials=300, estimators=["st"], seed=1)
    (row,) = sweep_eta(config)
    expected = soft_threshold_risk(np.zeros(200), minimax_lambda(0.02))
    assert abs(row.mean_loss - expected) <= 3.0 * row.std_loss / math.sqrt(300)


def test_sweep_n_rows(tmp_path):
    """A dimension sweep repeats the sweep for every size."""
    config = _small_sweep(sizes=[20, 40], estimators=["st", "eb"])
    rows = sweep_n(config)
    assert len(rows) == 2 * 2 * 2
    assert [row.n for row in rows] == [20] * 4 + [40] * 4

    path = tmp_path / "sweep_n.csv"
    write_sweep(path, rows, with_n=True)
    assert path.read_text().splitlines()[0].startswith("n,eta,")


@pytest.mark.parametrize(
    "settings",
    [
        {"n": 1},
        {"etas": []},
        {"etas": [1.5]},
        {"estimators": ["median"]},
        {"trials": 0},
        {"seed": -1},
    ],
)
def test_sweep_config_validation(settings):
    """Invalid sweep settings raise a parameter error."""
    with pytest.raises(ParameterError):
        SweepConfig(**settings)


@pytest.mark.slow
def test_hybrid_tracks_the_better_estimator():
    """With known sparsity the hybrid is never much worse than ST and EB."""
    config = sweep_preset("fig3")
    config.n, config.trials, config.seed = 1000, 50, 9
    rows = sweep_eta(config)
    for i in range(0, len(rows), 3):
        st, eb, hyb = rows[i : i + 3]
        assert hyb.estimator == "hybrid"
        assert hyb.mean_loss <= min(st.mean_loss, eb.mean_loss) + 0.02


def test_amp_experiment_rows(tmp_path):
    """Every family reports iterations + 1 rows starting from theta = 0."""
    config = AmpConfig(scenario="small", n=200, iterations=3, seed=2)
    rows = amp_experiment(config)
    assert len(rows) == 3 * 4
    assert [row.family for row in rows[::4]] == ["st", "eb", "hybrid"]
    for row in rows[::4]:
        assert row.t == 0
        assert row.mse == pytest.approx(0.1)
        assert row.chosen_denoiser == ""

    path = tmp_path / "amp.csv"
    write_amp(path, rows)
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(AMP_HEADER)
    assert len(lines) == 13


def test_amp_experiment_threads():
    """Running families on threads does not change the result."""
    config = AmpConfig(n=200, iterations=2, seed=5)
    threaded = AmpConfig(n=200, iterations=2, seed=5, threads=3)
    assert amp_experiment(config) == amp_experiment(threaded)


@pytest.mark.parametrize(
    "settings", [{"delta": 1.0}, {"sigma": -0.1}, {"families": ["lasso"]}]
)
def test_amp_config_validation(settings):
    """Invalid AMP settings raise a parameter error."""
    with pytest.raises(ParameterError):
        AmpConfig(**settings)


def test_presets():
    """Named scenarios carry their parameters."""
    config = amp_preset("fig9")
    assert config.scenario == "fig9"
    assert (config.delta, config.eta, config.sigma) == (0.65, 0.13, 1.0)
    assert config.family.label == SignalFamily.gaussian(5.0).label

    fig1 = sweep_preset("fig1")
    assert fig1.estimators == ["st", "eb"]
    assert len(fig1.etas) == 10
    assert sweep_preset("fig7").tuning == SURE_GRID
    assert is_dimension_sweep("fig_n")


def test_unknown_preset():
    """Unknown names list the valid ones."""
    with pytest.raises(UnknownPresetError) as info:
        sweep_preset("fig99")
    assert info.value.exit_code == 2
    assert info.value.valid == sorted(SWEEP_PRESETS)
    with pytest.raises(UnknownPresetError) as info:
        amp_preset("fig1")
    assert info.value.valid == sorted(AMP_PRESETS)
    assert "fig12" in str(info.value)


def test_suite_config():
    """Per-suite default trial counts and suite selection."""
    config = SuiteConfig()
    assert config.trials_for("unbiasedness") == 2000
    assert config.trials_for("concentration") == 500
    assert config.selected() == ["unbiasedness", "concentration", "hybrid_regret"]
    config.trials = 10
    assert config.trials_for("hybrid_regret") == 10
    with pytest.raises(ParameterError):
        SuiteConfig(sizes=[1000, 250])
    with pytest.raises(ParameterError):
        SuiteConfig(trials=1)


def test_suite_report_is_deterministic(tmp_path):
    """The same seed writes the same report."""
    config = SuiteConfig(suite="unbiasedness", seed=3, trials=20, n=100)
    first, second = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    write_report(first, run_suites(config))
    write_report(second, run_suites(config))
    assert first.read_bytes() == second.read_bytes()

    records = [json.loads(line) for line in first.read_text().splitlines()]
    assert [r["name"] for r in records] == ["st", "eb_zero_location", "eb_general"]
    assert all(r["suite"] == "unbiasedness" for r in records)
    assert {"statistic", "threshold", "passed", "trials"} <= set(records[0])


@pytest.mark.slow
def test_unbiasedness_suite():
    """The mean SURE matches the mean loss within three standard errors."""
    report = unbiasedness_suite(SuiteConfig(seed=2024))
    assert len(report.checks) == 3
    assert report.passed


@pytest.mark.slow
def test_concentration_suite():
    """Quadrupling n halves the spread of the loss and of the SURE."""
    report = concentration_suite(SuiteConfig(seed=2024))
    assert len(report.checks) == 3 * 2
    for check in report.checks:
        assert check.detail["expected"] == pytest.approx(2.0)
    assert report.passed


@pytest.mark.slow
def test_hybrid_regret_suite():
    """The mean excess of the hybrid loss stays within 5 / sqrt(n)."""
    report = hybrid_regret_suite(SuiteConfig(seed=2024))
    assert len(report.checks) == 2 * 3 * 3
    assert report.passed
    by_kind = {}
    for check in report.checks:
        by_kind.setdefault(check.name.rsplit("/", 1)[1], []).append(check)
    assert all(c.passed and c.gating for c in by_kind["mean_excess"])
    assert all(c.statistic == 0.0 for c in by_kind["chosen_identity"])
    rates = by_kind["exceed_rate"]
    assert not any(c.gating for c in rates)
    assert all(c.detail["margin"] == 0.02 for c in rates)
    assert all(0.0 <= c.statistic < 0.25 for c in rates)


def test_regret_identity_at_full_density():
    """At eta = 1 (lambda = 0, epsilon = 1) the hybrid loss is the chosen loss."""
    config = SuiteConfig(seed=5, trials=10, n=200, etas=[1.0])
    report = hybrid_regret_suite(config)
    assert [c.name for c in report.checks] == [
        f"{family}/eta=1/{kind}"
        for family in ("half:3", "const:3")
        for kind in ("exceed_rate", "mean_excess", "chosen_identity")
    ]
    identity = [c for c in report.checks if c.name.endswith("chosen_identity")]
    assert all(c.passed and c.statistic == 0.0 for c in identity)


def test_non_gating_checks_do_not_decide_the_verdict():
    """A failed informational check is recorded but the suite still passes."""
    ok = Check("s", "ok", 0.1, 1.0, passed=True)
    note = Check("s", "note", 0.2, 0.01, passed=False, gating=False)
    assert SuiteReport("s", (ok, note)).passed
    assert not SuiteReport("s", (ok, Check("s", "bad", 2.0, 1.0, False))).passed
    assert note.as_record()["gating"] is False
    assert ok.as_record()["gating"] is True
