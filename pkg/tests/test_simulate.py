import io
import json

import numpy as np
import pytest
from scipy import stats

from footrule_bounds.core import PairedSample
from footrule_bounds.errors import AllMissingCoordinate, BadAlpha, BadRange
from footrule_bounds.simulate import (
    ALL_METHODS,
    CSV_COLUMNS,
    SimConfig,
    apply_missingness,
    evaluate_methods,
    gen_bivariate_normal,
    impute_baseline,
    parse_config_text,
    resolve_workers,
    run_experiment,
    run_sweep,
    select_missing_mcar,
    select_missing_mnar_product,
    select_missing_mnar_rankdiff,
    summary_rows,
    trial_rng,
    write_rows_csv,
    write_rows_json,
)


def test_bivariate_normal_correlation():
    s = gen_bivariate_normal(100_000, 0.5, np.random.default_rng(0))
    assert abs(np.corrcoef(s.x, s.y)[0, 1] - 0.5) < 0.02
    assert s.pattern.case == "complete"


def test_bivariate_normal_deterministic():
    a = gen_bivariate_normal(50, 0.3, np.random.default_rng(7))
    b = gen_bivariate_normal(50, 0.3, np.random.default_rng(7))
    assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)
    with pytest.raises(BadRange):
        gen_bivariate_normal(5, 1.0, np.random.default_rng(0))


@pytest.mark.parametrize("s, size", [(0, 0), (1, 200), (0.1, 20), (0.02, 4), (0.25, 50)])
def test_selection_sizes(s, size, rng):
    sample = gen_bivariate_normal(200, 0.0, rng)
    assert select_missing_mcar(200, s, rng).size == size
    assert select_missing_mnar_product(sample, s, rng).size == size
    assert select_missing_mnar_rankdiff(sample, s, rng).size == size


def test_mnar_product_prefers_positive_products(rng):
    sample = gen_bivariate_normal(200, 0.0, rng)
    q = int((sample.x * sample.y > 0).sum())
    t = select_missing_mnar_product(sample, 0.1, rng)
    assert 20 < q
    assert np.all(sample.x[t] * sample.y[t] > 0)
    # beyond q every positive-product index is taken
    t = select_missing_mnar_product(sample, (q + 10) / 200, rng)
    assert np.all(np.isin(np.flatnonzero(sample.x * sample.y > 0), t))


def test_mnar_rankdiff_prefers_close_ranks(rng):
    sample = gen_bivariate_normal(200, 0.0, rng)
    t = select_missing_mnar_rankdiff(sample, 0.1, rng)
    assert np.all(np.abs(sample.x_ranks[t] - sample.y_ranks[t]) < 100)


def test_apply_missingness_states(rng):
    full = gen_bivariate_normal(300, 0.0, rng)
    assert apply_missingness(full, [], rng).pattern.case == "complete"
    counts = np.zeros(3)
    for _ in range(100):
        t = select_missing_mcar(300, 0.3, rng)
        part = apply_missingness(full, t, rng)
        inside = np.zeros(300, bool)
        inside[t] = True
        incomplete = ~(part.x_observed & part.y_observed)
        assert np.array_equal(incomplete, inside)
        counts += [s.size for s in (part.pattern.u, part.pattern.v, part.pattern.w)]
    # chi-square against equal thirds
    assert stats.chisquare(counts).pvalue > 1e-3


def test_impute_mean_median():
    s = PairedSample.from_values([1.0, 3.0, None], [2.0, None, 7.0])
    mean = impute_baseline(s, "mean", np.random.default_rng(0))
    assert mean.x.tolist() == [1.0, 3.0, 2.0]
    assert mean.y.tolist() == [2.0, 4.5, 7.0]
    med = impute_baseline(s, "median", np.random.default_rng(0))
    assert med.x[2] == 2.0


def test_impute_ties_ranked_by_index():
    s = PairedSample.from_values([None, 5.0, None, 1.0], [1.0, 2.0, 3.0, 4.0])
    mean = impute_baseline(s, "mean", np.random.default_rng(0))
    assert mean.x_ranks.tolist() == [2, 4, 3, 1]


def test_hotdeck_reproducible():
    s = PairedSample.from_values([1.0, 3.0, None, None], [1.0, 2.0, 3.0, 4.0])
    a = impute_baseline(s, "hotdeck", np.random.default_rng(11))
    b = impute_baseline(s, "hotdeck", np.random.default_rng(11))
    assert a.x.tolist() == b.x.tolist()
    assert set(a.x[2:].tolist()) <= {1.0, 3.0}


def test_impute_identity_and_errors():
    s = PairedSample.complete([1.0, 2.0], [3.0, 4.0])
    assert impute_baseline(s, "mean", np.random.default_rng(0)).x.tolist() == [1.0, 2.0]
    s = PairedSample.from_values([None, None], [1.0, 2.0])
    with pytest.raises(AllMissingCoordinate):
        impute_baseline(s, "hotdeck", np.random.default_rng(0))
    with pytest.raises(BadRange):
        impute_baseline(PairedSample.complete([1.0], [1.0]), "mode", np.random.default_rng(0))


def test_config_validation():
    with pytest.raises(BadAlpha):
        SimConfig(alpha=1.0)
    with pytest.raises(BadRange):
        SimConfig(s=1.5)
    with pytest.raises(BadRange):
        SimConfig(mechanism="mar")
    with pytest.raises(BadRange):
        SimConfig(methods=("nope",))
    with pytest.raises(BadRange):
        SimConfig(trials=0)


def test_proposed_ignores_hidden_values(rng):
    """Changing the values behind the mask never changes the proposed decision."""
    cfg = SimConfig(n=60, methods=("proposed",))
    for _ in range(20):
        full = gen_bivariate_normal(60, 0.4, rng)
        t = select_missing_mcar(60, 0.2, rng)
        part = apply_missingness(full, t, rng)
        other = PairedSample(
            np.where(part.x_observed, part.x, rng.normal(size=60) + 10),
            np.where(part.y_observed, part.y, rng.normal(size=60) - 10),
            part.x_observed,
            part.y_observed,
        )
        a = evaluate_methods(full, part, cfg, rng)["proposed"]
        b = evaluate_methods(full, other, cfg, rng)["proposed"]
        assert a == b


def test_experiment_deterministic_and_worker_independent():
    cfg = SimConfig(n=60, s=0.1, mechanism="mnar-product", trials=12, seed=3)
    a = run_experiment(cfg, workers=1)
    b = run_experiment(cfg, workers=1)
    c = run_experiment(cfg, workers=2)
    assert a.rejections == b.rejections == c.rejections
    assert a.mean_stats == pytest.approx(c.mean_stats)


def test_trial_streams_are_independent_of_order():
    x1 = trial_rng(5, 2).standard_normal(3)
    trial_rng(5, 1).standard_normal(3)
    assert np.array_equal(x1, trial_rng(5, 2).standard_normal(3))


def test_summary_rows_and_output():
    cfg = SimConfig(n=40, s=0.0, trials=5, seed=1, methods=("proposed", "tau-complete"))
    summaries = run_sweep(cfg, s_values=[0.0, 0.1], gamma_values=[0.0])
    rows = summary_rows(summaries)
    assert len(rows) == 4
    assert tuple(rows[0]) == CSV_COLUMNS
    for r in rows:
        assert 0 <= r["reject_rate"] <= 1
        p = r["reject_rate"]
        assert r["se"] == pytest.approx(np.sqrt(p * (1 - p) / 5))
    buf = io.StringIO()
    write_rows_csv(rows, buf)
    assert buf.getvalue().splitlines()[0] == ",".join(CSV_COLUMNS)
    buf = io.StringIO()
    write_rows_json(rows, buf)
    assert json.loads(buf.getvalue()) == rows


def test_bounds_statistics_recorded():
    cfg = SimConfig(n=50, s=0.2, trials=4, seed=2, methods=("proposed",))
    summary = run_experiment(cfg)
    lo, hi = summary.mean_stats["proposed:footrule_lower"], summary.mean_stats["proposed:footrule_upper"]
    assert -1.5 <= lo <= hi <= 1


def test_full_data_methods_agree_when_nothing_missing():
    cfg = SimConfig(n=80, s=0.0, gamma=0.2, trials=30, seed=9)
    rates = run_experiment(cfg).rejection_rates
    for stat in ("footrule", "tau", "rho"):
        values = {rates[f"{stat}-{v}"] for v in ("ignore", "complete", "mean", "median", "hotdeck")}
        assert len(values) == 1
    assert rates["proposed"] == rates["footrule-complete"]


def test_parse_config_text():
    text = "n = 200\n# comment\ns=0.1,0.2  # sweep\nmechanism=mnar-product\n"
    assert parse_config_text(text) == {"n": "200", "s": "0.1,0.2", "mechanism": "mnar-product"}
    with pytest.raises(ValueError):
        parse_config_text("oops")


def test_resolve_workers(monkeypatch):
    monkeypatch.setenv("FOOTRULE_THREADS", "3")
    assert resolve_workers() == 3
    monkeypatch.setenv("FOOTRULE_THREADS", "0")
    assert resolve_workers() >= 1
    monkeypatch.setenv("FOOTRULE_THREADS", "x")
    with pytest.raises(BadRange):
        resolve_workers()
    assert resolve_workers(2) == 2


def test_all_methods_listed():
    assert len(ALL_METHODS) == 16
