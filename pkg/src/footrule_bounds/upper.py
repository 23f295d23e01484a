"""Exact maximum of Spearman's footrule over all imputations.

The maximum is attained on a small family of extremal imputations:

* x-missing entries (U) sit either below or above every other x value of
  the non-W block, ordered inversely to their observed y partners; ``r1``
  of them sit below.
* y-missing entries (V) likewise, with ``r2`` below.
* pairs missing in both coordinates (W) take opposite extreme ranks,
  rank(x) + rank(y) = n + 1, with ``r3`` of the x values at the bottom.

That leaves ``(m1+1)(m2+1)(m3+1)`` candidates. The scans below walk the
candidate grid with O(1) increments built from cumulative count tables,
vectorised along each grid axis with ``cumsum``.

Notation inside this module, after relabelling:

* ``b[j]``: rank of the y partner of the j-th U entry among observed y,
  sorted ascending (j is 1-based in comments, 0-based in arrays).
* ``a[j]``: rank of the x partner of the j-th V entry among observed x,
  sorted ascending.
* ``d``: rank(y) - rank(x) among observed values for doubly observed pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import PairedSample
from .errors import BadRange, WrongCase


def max_footrule(n: int) -> int:
    """Footrule between the identity and the reversal, sum |i - (n - i + 1)|."""
    return n * n // 2


@dataclass(frozen=True)
class FootruleBounds:
    d_min: int
    d_max: int

    def __post_init__(self):
        if self.d_min > self.d_max:
            raise ValueError(f"d_min={self.d_min} exceeds d_max={self.d_max}")


class CountTable:
    """S[r] = #{i : z[i] <= r} for r in [lo, hi], stored densely.

    Lookups outside [lo, hi] raise IndexError: they would mean a recurrence
    reached past the range it was derived for.
    """

    __slots__ = ("lo", "hi", "counts")

    def __init__(self, lo: int, counts: np.ndarray):
        self.lo = lo
        self.hi = lo + counts.size - 1
        self.counts = counts

    def __getitem__(self, r: int) -> int:
        if not self.lo <= r <= self.hi:
            raise IndexError(f"r={r} outside [{self.lo}, {self.hi}]")
        return int(self.counts[r - self.lo])

    def at(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=np.int64)
        if r.size and (r.min() < self.lo or r.max() > self.hi):
            raise IndexError(
                f"lookup range [{r.min()}, {r.max()}] outside [{self.lo}, {self.hi}]"
            )
        return self.counts[r - self.lo]

    def as_dict(self) -> dict[int, int]:
        return {self.lo + k: int(c) for k, c in enumerate(self.counts)}

    def __repr__(self):
        return f"CountTable({self.as_dict()})"


def cumulative_counts(z, lo: int, hi: int) -> CountTable:
    """Counts of ``z <= r`` for every integer r in [lo, hi] in O(len(z) + hi - lo)."""
    if lo > hi:
        raise BadRange(f"lo={lo} > hi={hi}")
    z = np.asarray(z, dtype=np.int64)
    base = int((z <= lo).sum())
    inside = z[(z > lo) & (z <= hi)] - lo
    tally = np.bincount(inside, minlength=hi - lo + 1)
    tally[0] = base
    return CountTable(lo, np.cumsum(tally))


@dataclass
class UpperBoundScan:
    """Everything a candidate-grid scan produced.

    ``candidate_values`` has shape ``(m3+1, m2+1, m1+1)`` (axes of size one
    for the absent sets) after any coordinate swap, recorded in ``swapped``.
    """

    d_offsets: np.ndarray
    cum_counts: CountTable | None
    candidate_values: np.ndarray
    m1: int
    m2: int
    m3: int
    correction_terms: dict = field(default_factory=dict)
    swapped: bool = False

    @property
    def d_max(self) -> int:
        return int(self.candidate_values.max())

    @property
    def cells(self) -> int:
        return int(self.candidate_values.size)


@dataclass(frozen=True)
class _Layout:
    n: int
    m1: int
    m2: int
    m3: int
    b: np.ndarray  # y ranks of U partners, ascending
    a: np.ndarray  # x ranks of V partners, ascending
    d: np.ndarray  # y rank - x rank over doubly observed pairs
    u_order: np.ndarray
    v_order: np.ndarray
    o: np.ndarray
    w: np.ndarray

    @property
    def n_obs(self) -> int:
        return self.d.size


def _layout(sample: PairedSample) -> _Layout:
    pat = sample.pattern
    xr, yr = sample.x_ranks, sample.y_ranks
    u_order = pat.u[np.argsort(yr[pat.u], kind="stable")]
    v_order = pat.v[np.argsort(xr[pat.v], kind="stable")]
    return _Layout(
        n=sample.n,
        m1=pat.u.size,
        m2=pat.v.size,
        m3=pat.w.size,
        b=yr[u_order],
        a=xr[v_order],
        d=yr[pat.o] - xr[pat.o],
        u_order=u_order,
        v_order=v_order,
        o=pat.o,
        w=pat.w,
    )


def _check_r(name, r, m):
    if not 0 <= r <= m:
        raise BadRange(f"{name}={r} outside [0, {m}]")


def candidate_imputation(sample: PairedSample, r1: int = 0, r2: int = 0, r3: int = 0):
    """Rank vectors (x, y) of one extremal imputation, without any relabelling.

    ``r1``/``r2``/``r3`` count the U, V and W entries placed at the bottom of
    x, y and x respectively.
    """
    pat = sample.pattern
    lay = _layout(sample)
    m1, m2, m3, n = lay.m1, lay.m2, lay.m3, lay.n
    _check_r("r1", r1, m1)
    _check_r("r2", r2, m2)
    _check_r("r3", r3, m3)
    xr, yr = sample.x_ranks, sample.y_ranks
    rx = np.zeros(n, dtype=np.int64)
    ry = np.zeros(n, dtype=np.int64)
    j = np.arange(1, m1 + 1)
    rx[lay.u_order] = np.where(j <= m1 - r1, n - m3 + r3 - j + 1, r3 + m1 - j + 1)
    j = np.arange(1, m2 + 1)
    ry[lay.v_order] = np.where(j <= m2 - r2, n - r3 - j + 1, m3 - r3 + m2 - j + 1)
    xo = np.flatnonzero(sample.x_observed)
    yo = np.flatnonzero(sample.y_observed)
    rx[xo] = xr[xo] + r3 + r1
    ry[yo] = yr[yo] + m3 - r3 + r2
    k = np.arange(1, m3 + 1)
    w_x = np.where(k <= r3, k, n - m3 + k)
    rx[pat.w] = w_x
    ry[pat.w] = n + 1 - w_x
    return rx, ry


def _closed_form(lay: _Layout, r1: int, r2: int, r3: int) -> int:
    n, m1, m2, m3 = lay.n, lay.m1, lay.m2, lay.m3
    j = np.arange(1, m1 + 1)
    ux = np.where(j <= m1 - r1, n - m3 + r3 - j + 1, r3 + m1 - j + 1)
    total = int(np.abs(ux - (lay.b + m3 - r3 + r2)).sum())
    j = np.arange(1, m2 + 1)
    vy = np.where(j <= m2 - r2, n - r3 - j + 1, m3 - r3 + m2 - j + 1)
    total += int(np.abs(lay.a + r3 + r1 - vy).sum())
    total += int(np.abs(r1 - r2 + 2 * r3 - m3 - lay.d).sum())
    k = np.concatenate([np.arange(1, r3 + 1), np.arange(n - m3 + r3 + 1, n + 1)])
    total += int(np.abs(2 * k - n - 1).sum())
    return total


def candidate_value(sample: PairedSample, r1: int = 0, r2: int = 0, r3: int = 0) -> int:
    """Footrule of the (r1, r2, r3) extremal imputation by direct summation."""
    lay = _layout(sample)
    _check_r("r1", r1, lay.m1)
    _check_r("r2", r2, lay.m2)
    _check_r("r3", r3, lay.m3)
    return _closed_form(lay, r1, r2, r3)


def candidate_value_case1(sample: PairedSample, r: int) -> int:
    """Footrule of the r-th Missing Case I candidate (r missing values at the bottom).

    When the missing values are in y the roles of the coordinates are swapped.
    """
    pat = sample.pattern
    if not pat.is_case1():
        raise WrongCase(f"candidate_value_case1 needs Missing Case I, got {pat.case}")
    if pat.v.size:
        sample = sample.swapped()
    m1 = sample.pattern.u.size
    if not 0 <= r <= m1:
        raise BadRange(f"r={r} outside [0, {m1}]")
    return candidate_value(sample, r, 0, 0)


# --- Missing Case I -------------------------------------------------------


def scan_case1(sample: PairedSample) -> UpperBoundScan:
    pat = sample.pattern
    if not pat.is_case1():
        raise WrongCase(f"upper_bound_case1 needs Missing Case I, got {pat.case}")
    swapped = pat.v.size > 0
    if swapped:
        sample = sample.swapped()
    lay = _layout(sample)
    n, m1 = lay.n, lay.m1
    b, d = lay.b, lay.d
    j = np.arange(1, m1 + 1)
    d0 = int(np.abs(n - j + 1 - b).sum() + np.abs(d).sum())
    if m1 == 0:
        return UpperBoundScan(d, None, np.array([[[d0]]]), 0, 0, 0, swapped=swapped)
    S = cumulative_counts(d, 0, m1 - 1)
    r = np.arange(m1)
    yk = b[m1 - r - 1]  # partner of the U entry that moves from top to bottom
    C = np.abs(r + 1 - yk) - np.abs(n - m1 + r + 1 - yk)
    inc = 2 * S.at(r) - n + m1 + C
    D = np.concatenate([[d0], d0 + np.cumsum(inc)])
    return UpperBoundScan(
        d, S, D.reshape(1, 1, -1), m1, 0, 0, correction_terms={"C": C}, swapped=swapped
    )


def upper_bound_case1(sample: PairedSample) -> int:
    return scan_case1(sample).d_max


# --- Missing Case II ------------------------------------------------------


def scan_case2(sample: PairedSample) -> UpperBoundScan:
    pat = sample.pattern
    if not pat.is_case2():
        raise WrongCase("upper_bound_case2 needs no pair with both values missing")
    if pat.is_case1():
        return scan_case1(sample)
    swapped = pat.v.size > pat.u.size
    if swapped:
        sample = sample.swapped()
    lay = _layout(sample)
    n, m1, m2, n_o = lay.n, lay.m1, lay.m2, lay.n_obs
    if m1 + m2 == n:
        return UpperBoundScan(
            lay.d, None, np.array([[[max_footrule(n)]]]), m1, m2, 0, swapped=swapped
        )
    a, b = lay.a, lay.b
    S = cumulative_counts(lay.d, -m2, m1 - 1)

    # r2 steps along r1 = 0; every U entry is on top of x
    j1 = np.arange(1, m1 + 1)
    p0 = n - j1 + 1
    R0 = cumulative_counts(1 - p0 + b, -m2, 0)
    r2 = np.arange(m2)
    ak = a[m2 - r2 - 1]
    C2 = np.abs(r2 + 1 - ak) - np.abs(n - m2 + r2 + 1 - ak)
    col_inc = -2 * S.at(-r2 - 1) + n_o - 2 * R0.at(-r2) + m1 + C2
    d00 = _closed_form(lay, 0, 0, 0)
    col = np.concatenate([[d00], d00 + np.cumsum(col_inc)])

    # r1 steps for every r2 at once
    j2 = np.arange(1, m2 + 1)
    rr2 = np.arange(m2 + 1)[:, None]
    q = np.where(j2[None, :] <= m2 - rr2, n - j2 + 1, m2 - j2 + 1)
    Sv = np.stack([cumulative_counts(q[k] - a, 0, m1 - 1).counts for k in range(m2 + 1)])
    r1 = np.arange(m1)[None, :]
    bk = b[m1 - r1 - 1]
    C1 = np.abs(r1 + 1 - bk - rr2) - np.abs(n - m1 + r1 + 1 - bk - rr2)
    row_inc = 2 * S.at(r1 - rr2) - n_o + 2 * Sv - m2 + C1
    grid = np.concatenate([col[:, None], col[:, None] + np.cumsum(row_inc, axis=1)], axis=1)
    return UpperBoundScan(
        lay.d,
        S,
        grid[None, :, :],
        m1,
        m2,
        0,
        correction_terms={"C1": C1, "C2": C2},
        swapped=swapped,
    )


def upper_bound_case2(sample: PairedSample) -> int:
    return scan_case2(sample).d_max


# --- Missing Case III -----------------------------------------------------


def scan_case3(sample: PairedSample) -> UpperBoundScan:
    pat = sample.pattern
    if not pat.is_case3():
        raise WrongCase("upper_bound_case3 needs every pair fully observed or fully missing")
    lay = _layout(sample)
    n, m3, d = lay.n, lay.m3, lay.d
    if m3 == n:
        return UpperBoundScan(d, None, np.array([[[max_footrule(n)]]]), 0, 0, m3)
    i = np.arange(1, m3 + 1)
    d0 = int(np.abs(n + 1 - 2 * i).sum() + np.abs(d + m3).sum())
    if m3 == 0:
        return UpperBoundScan(d, None, np.array([[[d0]]]), 0, 0, 0)
    S = cumulative_counts(d, -m3, m3 - 1)
    r = np.arange(m3)
    g = np.abs(2 * r + 1 - n) - np.abs(n + 1 - 2 * (m3 - r))
    inc = 2 * (S.at(2 * r + 1 - m3) + S.at(2 * r - m3) - n + m3) + g
    D = np.concatenate([[d0], d0 + np.cumsum(inc)])
    return UpperBoundScan(d, S, D.reshape(-1, 1, 1), 0, 0, m3, correction_terms={"g": g})


def upper_bound_case3(sample: PairedSample) -> int:
    return scan_case3(sample).d_max


# --- general pattern ------------------------------------------------------


def scan_general(sample: PairedSample) -> UpperBoundScan:
    """Triple-grid scan valid for every pattern (no dispatch, no shortcuts)."""
    pat = sample.pattern
    swapped = pat.v.size > pat.u.size
    if swapped:
        sample = sample.swapped()
    lay = _layout(sample)
    n, m1, m2, m3, n_o = lay.n, lay.m1, lay.m2, lay.m3, lay.n_obs
    a, b = lay.a, lay.b
    j1 = np.arange(1, m1 + 1)
    j2 = np.arange(1, m2 + 1)
    h = n - m3 - j1 + 1 - b  # top-of-x U entry minus its partner, before shifts
    S = cumulative_counts(lay.d, -m2 - m3 - 1, m1 + m3 + 1)
    H = cumulative_counts(-h, -m2 - m3 - 2, m3 + 2)
    rr2 = np.arange(m2 + 1)[:, None]
    g = np.where(j2[None, :] <= m2 - rr2, a + j2 - 1 - n, a + j2 - 1 - m2 - m3)
    e_hi = m1 + 2 * m3 + 1
    G = np.stack([cumulative_counts(-g[k], 0, e_hi).counts for k in range(m2 + 1)])

    # r3 steps with r1 = r2 = 0
    r3 = np.arange(m3)
    t = 2 * r3 - m3
    w_inc = np.abs(2 * r3 + 1 - n) - np.abs(n + 1 - 2 * (m3 - r3))
    r3_inc = (
        2 * S.at(t) + 2 * S.at(t + 1) - 2 * n_o
        + 2 * H.at(t) + 2 * H.at(t + 1) - 2 * m1
        + 2 * G[0][2 * r3] + 2 * G[0][2 * r3 + 1] - 2 * m2
        + w_inc
    )
    d000 = _closed_form(lay, 0, 0, 0)
    base = np.concatenate([[d000], d000 + np.cumsum(r3_inc)])  # (m3+1,)

    # r2 steps with r1 = 0, for every r3
    R3 = np.arange(m3 + 1)[:, None]
    r2 = np.arange(m2)[None, :]
    delta = 2 * R3 - m3 - r2
    ak = a[m2 - r2 - 1] + R3
    C2 = np.abs(ak - (m3 - R3 + r2 + 1)) - np.abs(ak - (n - R3 - m2 + r2 + 1))
    r2_inc = n_o - 2 * S.at(delta - 1) + m1 - 2 * H.at(delta - 1) + C2
    col = np.concatenate(
        [base[:, None], base[:, None] + np.cumsum(r2_inc, axis=1)], axis=1
    )  # (m3+1, m2+1)

    # r1 steps for every (r3, r2)
    R3 = np.arange(m3 + 1)[:, None, None]
    R2 = np.arange(m2 + 1)[None, :, None]
    r1 = np.arange(m1)[None, None, :]
    tt = r1 - R2 + 2 * R3 - m3
    eps = 2 * R3 + r1
    yk = b[m1 - r1 - 1] + m3 - R3 + R2
    C1 = np.abs(R3 + r1 + 1 - yk) - np.abs(n - m3 + R3 - m1 + r1 + 1 - yk)
    gv = np.take_along_axis(
        np.broadcast_to(G[None, :, :], (m3 + 1, m2 + 1, G.shape[1])),
        np.broadcast_to(eps, (m3 + 1, m2 + 1, m1)),
        axis=2,
    )
    r1_inc = 2 * S.at(tt) - n_o + 2 * gv - m2 + C1
    grid = np.concatenate(
        [col[:, :, None], col[:, :, None] + np.cumsum(r1_inc, axis=2)], axis=2
    )
    return UpperBoundScan(
        lay.d,
        S,
        grid,
        m1,
        m2,
        m3,
        correction_terms={"C1": C1, "C2": C2, "W": w_inc},
        swapped=swapped,
    )


def upper_bound_general(sample: PairedSample) -> int:
    pat = sample.pattern
    m1, m2, m3 = pat.sizes
    if m1 + m2 + m3 == sample.n:
        return max_footrule(sample.n)
    if m1 + m2 == 0:
        return upper_bound_case3(sample)
    if m3 == 0:
        return upper_bound_case2(sample)
    return scan_general(sample).d_max


def upper_bound(sample: PairedSample) -> int:
    return upper_bound_general(sample)


def bounds(sample: PairedSample) -> FootruleBounds:
    from .lower import lower_bound

    return FootruleBounds(lower_bound(sample), upper_bound_general(sample))
