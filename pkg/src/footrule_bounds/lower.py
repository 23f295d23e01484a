"""Exact minimum of Spearman's footrule over all imputations of the missing values.

Everything works on ranks of the observed entries. A missing entry is
imputed by inserting a new rank equal to its partner's current rank and
shifting the observed ranks at or above it, which is all that matters for
the footrule.
"""

from __future__ import annotations

import numpy as np

from .core import PairedSample
from .errors import WrongCase


def _insert(ranks: np.ndarray, i: int, k: int) -> None:
    # ranks of known entries are >= 1, unknown ones are 0 and stay untouched
    ranks[ranks >= k] += 1
    ranks[i] = k


def _fill_from_partner(xr: np.ndarray, yr: np.ndarray, u: list[int]) -> None:
    """Match each index in ``u`` (x unknown, y complete) to its partner's rank.

    Partners are processed in increasing rank order, as the insertions never
    move y ranks.
    """
    for i in sorted(u, key=lambda j: yr[j]):
        _insert(xr, i, int(yr[i]))


def _min_footrule(xr: np.ndarray, yr: np.ndarray, u: list[int], v: list[int]) -> int:
    """Interleaved matching for x missing at ``u`` and y missing at ``v``.

    ``xr``/``yr`` hold the ranks of the observed entries (0 where missing)
    and are modified in place.
    """
    u = list(u)
    v = list(v)
    while u and v:
        # smallest x rank among y-missing indices vs smallest y rank among x-missing
        j1 = min(range(len(v)), key=lambda j: xr[v[j]])
        j2 = min(range(len(u)), key=lambda j: yr[u[j]])
        u1, u2 = v[j1], u[j2]
        if xr[u1] <= yr[u2]:
            _insert(yr, u1, int(xr[u1]))
            v.pop(j1)
        else:
            _insert(xr, u2, int(yr[u2]))
            u.pop(j2)
    if u:
        _fill_from_partner(xr, yr, u)
    if v:
        _fill_from_partner(yr, xr, v)
    return int(np.abs(xr - yr).sum())


def lower_bound_case1(sample: PairedSample) -> int:
    """Minimum footrule when only one coordinate has missing values."""
    pat = sample.pattern
    if not pat.is_case1():
        raise WrongCase(f"lower_bound_case1 needs Missing Case I, got {pat.case}")
    xr = sample.x_ranks.copy()
    yr = sample.y_ranks.copy()
    if pat.u.size:
        _fill_from_partner(xr, yr, pat.u.tolist())
    elif pat.v.size:
        _fill_from_partner(yr, xr, pat.v.tolist())
    return int(np.abs(xr - yr).sum())


def lower_bound_case2(sample: PairedSample) -> int:
    pat = sample.pattern
    if not pat.is_case2():
        raise WrongCase("lower_bound_case2 needs no pair with both values missing")
    return _min_footrule(
        sample.x_ranks.copy(), sample.y_ranks.copy(), pat.u.tolist(), pat.v.tolist()
    )


def lower_bound(sample: PairedSample, return_index_map: bool = False):
    """Minimum footrule for any missing pattern.

    Pairs missing in both coordinates are dropped and the reduced sample is
    solved as Missing Case II. With ``return_index_map`` the original
    0-based indices of the kept pairs are returned too.
    """
    pat = sample.pattern
    keep = np.sort(np.concatenate([pat.u, pat.v, pat.o]))
    if keep.size == 0:
        value = 0
    elif pat.w.size:
        value = lower_bound_case2(sample.take(keep))
    else:
        value = lower_bound_case2(sample)
    if return_index_map:
        return value, keep
    return value
