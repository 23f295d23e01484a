"""Monte Carlo harness: data generation, missingness mechanisms, baseline tests.

Each trial draws a bivariate normal sample, deletes values under a chosen
mechanism and records, per method, whether independence is rejected at
``alpha``. Trial ``t`` uses its own generator seeded by ``(seed, t)``, so a
run is reproducible regardless of worker count or trial order.
"""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from .coefficients import (
    footrule,
    kendall_tau_raw,
    scale_footrule,
    scale_rho,
    scale_tau,
    spearman_rho_raw,
)
from .core import PairedSample, stable_ranks
from .errors import AllMissingCoordinate, BadAlpha, BadRange
from .inference import decide, footrule_pvalue, pvalue_bounds
from .upper import bounds

MECHANISMS = ("mcar", "mnar-product", "mnar-rankdiff")
STATISTICS = ("footrule", "tau", "rho")
IMPUTERS = ("mean", "median", "hotdeck")
PROPOSED = "proposed"
ALL_METHODS = (
    PROPOSED,
    *(f"{s}-{v}" for s in STATISTICS for v in ("ignore", "complete", *IMPUTERS)),
)
THREADS_ENV = "FOOTRULE_THREADS"
CSV_COLUMNS = ("method", "n", "s", "gamma", "alpha", "mechanism", "trials", "reject_rate", "se")


@dataclass(frozen=True)
class SimConfig:
    n: int = 200
    gamma: float = 0.0
    s: float = 0.1
    mechanism: str = "mcar"
    alpha: float = 0.05
    trials: int = 1000
    seed: int = 0
    methods: tuple[str, ...] = ALL_METHODS
    reject_on_equal: bool = False

    def __post_init__(self):
        if self.n < 2:
            raise BadRange(f"n must be at least 2, got {self.n}")
        if not -1.0 < self.gamma < 1.0:
            raise BadRange(f"gamma must lie in (-1, 1), got {self.gamma}")
        if not 0.0 <= self.s <= 1.0:
            raise BadRange(f"s must lie in [0, 1], got {self.s}")
        if self.mechanism not in MECHANISMS:
            raise BadRange(f"unknown mechanism {self.mechanism!r}; choose from {MECHANISMS}")
        if not 0.0 < self.alpha < 1.0:
            raise BadAlpha(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.trials < 1:
            raise BadRange("trials must be at least 1")
        if self.seed < 0:
            raise BadRange("seed must be non-negative")
        methods = tuple(self.methods)
        unknown = [m for m in methods if m not in ALL_METHODS]
        if unknown or not methods:
            raise BadRange(f"unknown methods {unknown}; choose from {ALL_METHODS}")
        object.__setattr__(self, "methods", methods)


@dataclass
class ExperimentSummary:
    config: SimConfig
    rejections: dict[str, int]
    mean_stats: dict[str, float] = field(default_factory=dict)

    def rejection_rate(self, method: str) -> float:
        return self.rejections[method] / self.config.trials

    def se(self, method: str) -> float:
        p = self.rejection_rate(method)
        return math.sqrt(p * (1.0 - p) / self.config.trials)

    @property
    def rejection_rates(self) -> dict[str, float]:
        return {m: self.rejection_rate(m) for m in self.rejections}

    def rows(self) -> list[dict]:
        c = self.config
        return [
            {
                "method": m,
                "n": c.n,
                "s": c.s,
                "gamma": c.gamma,
                "alpha": c.alpha,
                "mechanism": c.mechanism,
                "trials": c.trials,
                "reject_rate": self.rejection_rate(m),
                "se": self.se(m),
            }
            for m in c.methods
        ]


# data and missingness


def gen_bivariate_normal(n: int, gamma: float, rng: np.random.Generator) -> PairedSample:
    """n pairs from a standard bivariate normal with correlation ``gamma``."""
    if not -1.0 < gamma < 1.0:
        raise BadRange(f"gamma must lie in (-1, 1), got {gamma}")
    z = rng.standard_normal((2, n))
    x = z[0]
    y = gamma * z[0] + math.sqrt(1.0 - gamma * gamma) * z[1]
    return PairedSample.complete(x, y)


def _target_size(n: int, s: float) -> int:
    if not 0.0 <= s <= 1.0:
        raise BadRange(f"s must lie in [0, 1], got {s}")
    # guard against 0.1 * 200 = 19.999...
    return min(n, int(math.floor(s * n + 1e-9)))


def select_missing_mcar(n: int, s: float, rng: np.random.Generator) -> np.ndarray:
    """Uniform subset of size floor(s n), sorted 0-based indices."""
    k = _target_size(n, s)
    return np.sort(rng.choice(n, size=k, replace=False))


def _select_preferring(preferred: np.ndarray, s: float, rng) -> np.ndarray:
    n = preferred.size
    k = _target_size(n, s)
    good = np.flatnonzero(preferred)
    if k <= good.size:
        return np.sort(rng.choice(good, size=k, replace=False))
    rest = np.flatnonzero(~preferred)
    extra = rng.choice(rest, size=k - good.size, replace=False)
    return np.sort(np.concatenate([good, extra]))


def select_missing_mnar_product(sample: PairedSample, s: float, rng) -> np.ndarray:
    """Delete pairs with positive product x*y first, then uniformly among the rest."""
    return _select_preferring(sample.x * sample.y > 0, s, rng)


def select_missing_mnar_rankdiff(sample: PairedSample, s: float, rng) -> np.ndarray:
    """Same construction, preferring pairs whose ranks differ by less than n/2."""
    n = sample.n
    close = np.abs(sample.x_ranks - sample.y_ranks) < n / 2
    return _select_preferring(close, s, rng)


def select_missing(sample: PairedSample, s: float, mechanism: str, rng) -> np.ndarray:
    if mechanism == "mcar":
        return select_missing_mcar(sample.n, s, rng)
    if mechanism == "mnar-product":
        return select_missing_mnar_product(sample, s, rng)
    if mechanism == "mnar-rankdiff":
        return select_missing_mnar_rankdiff(sample, s, rng)
    raise BadRange(f"unknown mechanism {mechanism!r}")


def apply_missingness(sample: PairedSample, indices, rng) -> PairedSample:
    """Hide x, y or both at each index, each with probability 1/3."""
    idx = np.asarray(indices, dtype=np.int64)
    state = rng.integers(0, 3, size=idx.size)
    xo = sample.x_observed.copy()
    yo = sample.y_observed.copy()
    xo[idx[state != 1]] = False
    yo[idx[state != 0]] = False
    return PairedSample(sample.x, sample.y, xo, yo)


# baselines


@dataclass(frozen=True)
class ImputedData:
    """Fully filled coordinates that may contain ties.

    Ranks break ties by position, so imputed copies of one value are ordered
    by their original index.
    """

    x: np.ndarray
    y: np.ndarray

    @property
    def x_ranks(self) -> np.ndarray:
        return stable_ranks(self.x)

    @property
    def y_ranks(self) -> np.ndarray:
        return stable_ranks(self.y)


def _impute_coordinate(values, observed, method, rng, name):
    obs_vals = values[observed]
    if obs_vals.size == 0:
        raise AllMissingCoordinate(f"no observed {name} values to impute from")
    out = values.copy()
    miss = np.flatnonzero(~observed)
    if miss.size == 0:
        return out
    if method == "mean":
        out[miss] = obs_vals.mean()
    elif method == "median":
        out[miss] = np.median(obs_vals)
    else:
        out[miss] = rng.choice(obs_vals, size=miss.size, replace=True)
    return out


def impute_baseline(sample: PairedSample, method: str, rng) -> ImputedData:
    if method not in IMPUTERS:
        raise BadRange(f"unknown imputation method {method!r}; choose from {IMPUTERS}")
    x = _impute_coordinate(sample.x, sample.x_observed, method, rng, "x")
    y = _impute_coordinate(sample.y, sample.y_observed, method, rng, "y")
    return ImputedData(x, y)


def rank_test(statistic: str, rx, ry) -> tuple[float, float]:
    """Two-sided p-value and scaled coefficient for complete rank vectors."""
    n = len(rx)
    if n < 3:
        return 1.0, float("nan")
    if statistic == "footrule":
        d = footrule(rx, ry)
        return footrule_pvalue(d, n, warn=False), scale_footrule(d, n)
    if statistic == "tau":
        p = stats.kendalltau(rx, ry).pvalue
        return float(p), scale_tau(kendall_tau_raw(rx, ry), n)
    if statistic == "rho":
        p = stats.spearmanr(rx, ry).pvalue
        return float(p), scale_rho(spearman_rho_raw(rx, ry), n)
    raise BadRange(f"unknown statistic {statistic!r}")


def _rejects(p: float, alpha: float, on_equal: bool) -> bool:
    return p <= alpha if on_equal else p < alpha


# experiment


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def evaluate_methods(full: PairedSample, partial: PairedSample, config: SimConfig, rng):
    """Per-method (reject, statistic) for one trial.

    ``partial`` carries the missing pattern; ``full`` is used only by the
    ``-complete`` baselines.
    """
    out: dict[str, tuple[bool, dict[str, float]]] = {}
    alpha, eq = config.alpha, config.reject_on_equal
    methods = set(config.methods)
    n = full.n

    if PROPOSED in methods:
        fb = bounds(partial)
        outcome = decide(pvalue_bounds(fb, n, warn=False), alpha, reject_on_equal=eq)
        out[PROPOSED] = (
            outcome.reject,
            {
                "footrule_lower": scale_footrule(fb.d_max, n),
                "footrule_upper": scale_footrule(fb.d_min, n),
            },
        )

    def record(method, rx, ry, statistic):
        p, value = rank_test(statistic, rx, ry)
        out[method] = (_rejects(p, alpha, eq), {"value": value})

    need = {m.split("-", 1)[1] for m in methods if m != PROPOSED}
    both = partial.x_observed & partial.y_observed
    imputed = {}
    for variant in IMPUTERS:
        if variant in need:
            imputed[variant] = impute_baseline(partial, variant, rng)
    for statistic in STATISTICS:
        if f"{statistic}-complete" in methods:
            record(f"{statistic}-complete", full.x_ranks, full.y_ranks, statistic)
        if f"{statistic}-ignore" in methods:
            idx = np.flatnonzero(both)
            rx = stable_ranks(partial.x[idx])
            ry = stable_ranks(partial.y[idx])
            record(f"{statistic}-ignore", rx, ry, statistic)
        for variant, data in imputed.items():
            if f"{statistic}-{variant}" in methods:
                record(f"{statistic}-{variant}", data.x_ranks, data.y_ranks, statistic)
    return out


def run_trial(config: SimConfig, trial: int):
    rng = trial_rng(config.seed, trial)
    full = gen_bivariate_normal(config.n, config.gamma, rng)
    hidden = select_missing(full, config.s, config.mechanism, rng)
    partial = apply_missingness(full, hidden, rng)
    return evaluate_methods(full, partial, config, rng)


def _run_range(config: SimConfig, start: int, stop: int):
    return [run_trial(config, t) for t in range(start, stop)]


def resolve_workers(workers: int | None = None) -> int:
    if workers is None:
        raw = os.environ.get(THREADS_ENV, "1").strip() or "1"
        try:
            workers = int(raw)
        except ValueError:
            raise BadRange(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if workers < 0:
        raise BadRange("worker count must be >= 0")
    if workers == 0:
        workers = os.cpu_count() or 1
    return workers


def run_experiment(config: SimConfig, workers: int | None = None) -> ExperimentSummary:
    """Run ``config.trials`` trials and aggregate rejection counts.

    ``workers`` defaults to the ``FOOTRULE_THREADS`` environment variable
    (0 means one per CPU, unset means sequential). Results do not depend on it.
    """
    workers = min(resolve_workers(workers), config.trials)
    if workers <= 1:
        results = _run_range(config, 0, config.trials)
    else:
        edges = np.linspace(0, config.trials, workers + 1).astype(int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_range, config, int(a), int(b))
                for a, b in zip(edges[:-1], edges[1:])
                if b > a
            ]
            results = [r for f in futures for r in f.result()]

    rejections = {m: 0 for m in config.methods}
    sums: dict[str, float] = {}
    counts: dict[str, int] = {}
    for trial in results:
        for method, (rejected, values) in trial.items():
            rejections[method] += int(rejected)
            for key, v in values.items():
                name = f"{method}:{key}"
                if not math.isnan(v):
                    sums[name] = sums.get(name, 0.0) + v
                    counts[name] = counts.get(name, 0) + 1
    mean_stats = {k: sums[k] / counts[k] for k in sums}
    return ExperimentSummary(config, rejections, mean_stats)


def run_sweep(
    base: SimConfig,
    s_values: Sequence[float] | None = None,
    gamma_values: Sequence[float] | None = None,
    workers: int | None = None,
) -> list[ExperimentSummary]:
    s_values = list(s_values) if s_values else [base.s]
    gamma_values = list(gamma_values) if gamma_values else [base.gamma]
    out = []
    for g in gamma_values:
        for s in s_values:
            cfg = SimConfig(**{**asdict(base), "s": float(s), "gamma": float(g)})
            out.append(run_experiment(cfg, workers))
    return out


# output


def summary_rows(summaries: Iterable[ExperimentSummary]) -> list[dict]:
    return [row for s in summaries for row in s.rows()]


def write_rows_csv(rows: list[dict], fh) -> None:
    writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


def write_rows_json(rows: list[dict], fh) -> None:
    json.dump(rows, fh, indent=2)
    fh.write("\n")


def parse_config_text(text: str) -> dict[str, str]:
    """Plain ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ValueError(f"config line {lineno}: expected key=value, got {line!r}")
        out[key.strip().replace("-", "_")] = value.strip()
    return out
