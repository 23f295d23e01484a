"""Normal-approximation p-values for the footrule and the bounded test decision."""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from .errors import BadAlpha, BadDimension
from .upper import FootruleBounds

MIN_RELIABLE_N = 40


@dataclass(frozen=True)
class NullApprox:
    """Footrule null distribution under independence: N(n^2/3, 2n^3/45)."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise BadDimension(f"footrule null needs n >= 2, got {self.n}")

    @property
    def mean(self) -> float:
        return self.n * self.n / 3.0

    @property
    def variance(self) -> float:
        return 2.0 * self.n**3 / 45.0

    @property
    def sd(self) -> float:
        return math.sqrt(self.variance)

    def z(self, d: float) -> float:
        return (d - self.mean) / self.sd


def footrule_pvalue(d: float, n: int, warn: bool = True) -> float:
    """Two-sided p-value 2 min(F(d), 1 - F(d)) under the normal null."""
    null = NullApprox(n)
    if warn and n < MIN_RELIABLE_N:
        warnings.warn(
            f"normal approximation for the footrule is unreliable below n={MIN_RELIABLE_N} (n={n})",
            stacklevel=2,
        )
    # 2 min(F, 1 - F) = erfc(|z| / sqrt 2), accurate far into the tails
    p = math.erfc(abs(null.z(d)) / math.sqrt(2.0))
    return min(1.0, max(0.0, p))


@dataclass(frozen=True)
class PValueBounds:
    p_min: float
    p_max: float
    p_at_dmin: float
    p_at_dmax: float


def pvalue_bounds(fb: FootruleBounds, n: int, warn: bool = True) -> PValueBounds:
    p1 = footrule_pvalue(fb.d_min, n, warn=warn)
    p2 = footrule_pvalue(fb.d_max, n, warn=False)
    # integer test of the sign product, no float trouble at d == n^2/3
    straddles = (3 * fb.d_min - n * n) * (3 * fb.d_max - n * n) < 0
    p_max = 1.0 if straddles else max(p1, p2)
    return PValueBounds(min(p1, p2), p_max, p1, p2)


class Outcome(enum.Enum):
    REJECT = "reject"
    FAIL_ALL_INSIGNIFICANT = "fail-all-insignificant"
    FAIL_AMBIGUOUS = "fail-ambiguous"


@dataclass(frozen=True)
class TestOutcome:
    outcome: Outcome
    alpha: float
    bounds: PValueBounds

    __test__ = False  # keep pytest from collecting this class

    @property
    def reject(self) -> bool:
        return self.outcome is Outcome.REJECT


def decide(pb: PValueBounds, alpha: float, reject_on_equal: bool = False) -> TestOutcome:
    """Reject only when every attainable p-value is below ``alpha``.

    ``reject_on_equal`` also rejects at p_max == alpha.
    """
    if not 0.0 < alpha < 1.0:
        raise BadAlpha(f"alpha must lie in (0, 1), got {alpha}")
    below = pb.p_max <= alpha if reject_on_equal else pb.p_max < alpha
    if below:
        outcome = Outcome.REJECT
    elif pb.p_min > alpha:
        outcome = Outcome.FAIL_ALL_INSIGNIFICANT
    else:
        outcome = Outcome.FAIL_AMBIGUOUS
    return TestOutcome(outcome, alpha, pb)
