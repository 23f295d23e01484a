"""Brute-force enumeration of every rank-vector pair consistent with a sample.

Used as ground truth for the bound algorithms. A coordinate with ``m``
missing entries out of ``n`` has ``n!/(n-m)!`` completions: each missing
index receives a distinct rank and the observed entries fill the remaining
ranks in their observed order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .core import PairedSample
from .errors import BudgetExceeded
from .upper import FootruleBounds

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class EnumerationBudget:
    max_candidates: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.max_candidates < 1:
            raise ValueError("max_candidates must be positive")


def enumeration_count(sample: PairedSample) -> int:
    n = sample.n
    mx = int((~sample.x_observed).sum())
    my = int((~sample.y_observed).sum())
    return math.perm(n, mx) * math.perm(n, my)


def coordinate_completions(values: np.ndarray, observed: np.ndarray) -> np.ndarray:
    """All full rank vectors for one coordinate, one per row."""
    n = values.size
    missing = np.flatnonzero(~observed)
    obs = np.flatnonzero(observed)
    obs_sorted = obs[np.argsort(values[obs], kind="stable")]
    rows = []
    for chosen in itertools.permutations(range(1, n + 1), missing.size):
        r = np.empty(n, dtype=np.int64)
        r[missing] = chosen
        taken = np.zeros(n + 1, bool)
        taken[list(chosen)] = True
        r[obs_sorted] = np.flatnonzero(~taken[1:]) + 1
        rows.append(r)
    return np.array(rows, dtype=np.int64).reshape(-1, n)


def _check_budget(sample, budget):
    if budget is None:
        budget = EnumerationBudget()
    elif isinstance(budget, int):
        budget = EnumerationBudget(budget)
    count = enumeration_count(sample)
    if count > budget.max_candidates:
        raise BudgetExceeded(count, budget.max_candidates)
    return count


def enumerate_rank_pairs(
    sample: PairedSample, budget=None
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    _check_budget(sample, budget)
    xs = coordinate_completions(sample.x, sample.x_observed)
    ys = coordinate_completions(sample.y, sample.y_observed)
    for rx in xs:
        for ry in ys:
            yield rx, ry


def _pair_signs(ranks: np.ndarray) -> np.ndarray:
    i, j = np.triu_indices(ranks.shape[1], k=1)
    return np.sign(ranks[:, j] - ranks[:, i]).astype(np.int64)


@dataclass(frozen=True)
class OracleSummary:
    d_min: int
    d_max: int
    tau_min: int
    tau_max: int
    count: int


def brute_force_summary(sample: PairedSample, budget=None, chunk: int = 1 << 22):
    """Exact extremes of footrule and discordant-pair count over all completions."""
    count = _check_budget(sample, budget)
    xs = coordinate_completions(sample.x, sample.x_observed)
    ys = coordinate_completions(sample.y, sample.y_observed)
    n = sample.n
    npairs = n * (n - 1) // 2
    sx, sy = _pair_signs(xs), _pair_signs(ys)
    rows = max(1, chunk // max(1, ys.shape[0] * n))
    d_lo = t_lo = math.inf
    d_hi = t_hi = -math.inf
    for s in range(0, xs.shape[0], rows):
        block = xs[s : s + rows]
        d = np.abs(block[:, None, :] - ys[None, :, :]).sum(axis=2)
        tau = (npairs - sx[s : s + rows] @ sy.T) // 2
        d_lo, d_hi = min(d_lo, int(d.min())), max(d_hi, int(d.max()))
        t_lo, t_hi = min(t_lo, int(tau.min())), max(t_hi, int(tau.max()))
    return OracleSummary(d_lo, d_hi, t_lo, t_hi, count)


def brute_force_bounds(sample: PairedSample, budget=None) -> FootruleBounds:
    s = brute_force_summary(sample, budget)
    return FootruleBounds(s.d_min, s.d_max)


# randomized equivalence check

CASES = ("I", "II", "III", "general")


def random_sample(rng, n: int, m1: int, m2: int, m3: int) -> PairedSample:
    """Random distinct values with |U|=m1, |V|=m2, |W|=m3 at random positions."""
    if m1 + m2 + m3 > n:
        raise ValueError("more missing pairs than pairs")
    idx = rng.permutation(n)
    x = rng.permutation(n).astype(float)
    y = rng.permutation(n).astype(float)
    xo = np.ones(n, bool)
    yo = np.ones(n, bool)
    xo[idx[: m1]] = False
    yo[idx[m1 : m1 + m2]] = False
    both = idx[m1 + m2 : m1 + m2 + m3]
    xo[both] = False
    yo[both] = False
    return PairedSample(x, y, xo, yo)


def _draw_sizes(rng, n: int, case: str) -> tuple[int, int, int]:
    k = int(rng.integers(1, n + 1))
    if case == "I":
        return (k, 0, 0) if rng.random() < 0.5 else (0, k, 0)
    if case == "II":
        k = max(k, 2)
        m1 = int(rng.integers(1, k))
        return m1, k - m1, 0
    if case == "III":
        return 0, 0, k
    if case == "general":
        k = max(k, 3)
        cuts = np.sort(rng.choice(np.arange(1, k), size=2, replace=False))
        return int(cuts[0]), int(cuts[1] - cuts[0]), int(k - cuts[1])
    raise ValueError(f"unknown case {case!r}; choose from {CASES}")


def random_case_sample(rng, n: int, case: str, max_count: int = 10**6) -> PairedSample:
    """Random sample of the given missing case whose enumeration fits ``max_count``."""
    if n < {"I": 1, "II": 2, "III": 1, "general": 3}.get(case, 1):
        raise ValueError(f"case {case} needs a larger n than {n}")
    while True:
        m1, m2, m3 = _draw_sizes(rng, n, case)
        if math.perm(n, m1 + m3) * math.perm(n, m2 + m3) <= max_count:
            return random_sample(rng, n, m1, m2, m3)


@dataclass
class OracleCheckReport:
    trials: int
    per_case: dict
    counterexample: PairedSample | None = None
    expected: FootruleBounds | None = None
    got: FootruleBounds | None = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None


def run_oracle_check(
    trials: int,
    n_min: int = 4,
    n_max: int = 8,
    cases: Sequence[str] = CASES,
    seed: int = 0,
    max_count: int = 10**6,
) -> OracleCheckReport:
    """Compare the fast bounds with brute force, cycling through ``cases``.

    Stops at the first mismatch.
    """
    from .upper import bounds

    rng = np.random.default_rng(seed)
    per_case = {c: 0 for c in cases}
    for t in range(trials):
        case = cases[t % len(cases)]
        lo = max(n_min, {"II": 2, "general": 3}.get(case, 1))
        n = int(rng.integers(lo, max(lo, n_max) + 1))
        sample = random_case_sample(rng, n, case, max_count)
        expected = brute_force_bounds(sample, budget=max_count)
        got = bounds(sample)
        per_case[case] += 1
        if got != expected:
            return OracleCheckReport(t + 1, per_case, sample, expected, got)
    return OracleCheckReport(trials, per_case)
