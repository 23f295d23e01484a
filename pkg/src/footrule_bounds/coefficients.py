"""Footrule, Spearman's rho and Kendall's tau on rank vectors, plus scaling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadDimension, LengthMismatch


@dataclass(frozen=True)
class CoefficientSet:
    footrule: int
    rho_raw: int
    tau_raw: int
    footrule_scaled: float
    rho_scaled: float
    tau_scaled: float


@dataclass(frozen=True)
class TauBounds:
    """Bounds on the raw discordant-pair count."""

    tau_min: float
    tau_max: float


def _pair(rx, ry):
    rx = np.asarray(rx, dtype=np.int64)
    ry = np.asarray(ry, dtype=np.int64)
    if rx.shape != ry.shape:
        raise LengthMismatch(f"rank vectors differ in length: {rx.size} vs {ry.size}")
    return rx, ry


def footrule(rx, ry) -> int:
    rx, ry = _pair(rx, ry)
    return int(np.abs(rx - ry).sum())


def spearman_rho_raw(rx, ry) -> int:
    rx, ry = _pair(rx, ry)
    diff = rx - ry
    return int((diff * diff).sum())


def _count_inversions(seq: np.ndarray) -> int:
    """Inversions of a sequence of integers in [0, n], by bottom-up merge sort.

    Each level merges all block pairs at once: values are offset by the
    pair id so a single global searchsorted/sort handles every pair.
    """
    a = np.array(seq, dtype=np.int64)
    n = a.size
    span = int(a.max()) + 1 if n else 1
    idx = np.arange(n)
    inv = 0
    width = 1
    while width < n:
        pair = idx // (2 * width)
        is_right = (idx // width) % 2 == 1
        keys = pair * span + a
        left_keys = keys[~is_right]
        right_keys = keys[is_right]
        right_pair = pair[is_right]
        # left elements of the same pair that are <= each right element
        le = np.searchsorted(left_keys, right_keys, side="right")
        start = np.searchsorted(left_keys, right_pair * span, side="left")
        end = np.searchsorted(left_keys, (right_pair + 1) * span, side="left")
        inv += int(((end - start) - (le - start)).sum())
        a = np.sort(keys) - pair * span
        width *= 2
    return inv


def kendall_tau_raw(rx, ry) -> int:
    """Number of discordant index pairs, O(n log n)."""
    rx, ry = _pair(rx, ry)
    if rx.size < 2:
        return 0
    order = np.argsort(rx, kind="stable")
    return _count_inversions(ry[order])


def kendall_tau_raw_naive(rx, ry) -> int:
    """Quadratic double loop; kept as a cross-check for :func:`kendall_tau_raw`."""
    rx, ry = _pair(rx, ry)
    count = 0
    for i in range(rx.size):
        for j in range(i):
            if (rx[i] - rx[j]) * (ry[i] - ry[j]) < 0:
                count += 1
    return count


def _check_n(n: int) -> None:
    if n < 2:
        raise BadDimension(f"scaling needs n >= 2, got {n}")


def scale_footrule(d, n: int) -> float:
    _check_n(n)
    return 1.0 - 3.0 * d / (n * n - 1)


def scale_rho(rho_raw, n: int) -> float:
    _check_n(n)
    return 1.0 - 6.0 * rho_raw / (n * (n * n - 1))


def scale_tau(tau_raw, n: int) -> float:
    _check_n(n)
    return 1.0 - 4.0 * tau_raw / (n * (n - 1))


def coefficient_set(rx, ry) -> CoefficientSet:
    rx, ry = _pair(rx, ry)
    n = rx.size
    d = footrule(rx, ry)
    rho = spearman_rho_raw(rx, ry)
    tau = kendall_tau_raw(rx, ry)
    return CoefficientSet(
        footrule=d,
        rho_raw=rho,
        tau_raw=tau,
        footrule_scaled=scale_footrule(d, n),
        rho_scaled=scale_rho(rho, n),
        tau_scaled=scale_tau(tau, n),
    )


def tau_bounds(fb, n: int) -> TauBounds:
    """Discordance bounds implied by footrule bounds: D/2 <= tau <= D."""
    return TauBounds(fb.d_min / 2, float(min(fb.d_max, n * (n - 1) // 2)))
