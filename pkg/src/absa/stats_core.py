"""Effect-size statistics shared by all analyses.

The centrepiece is the Vargha-Delaney A-measure point estimate.  It is
computed from exact integer counts of pairwise wins and ties, so the float
returned is the correctly rounded value of the rational ``(2*wins + ties) /
(2*m*n)``; a rank/sort based path gives the same bits as exhaustive pair
counting.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from absa.errors import (
    DegenerateVariance,
    EmptyDistribution,
    LengthMismatch,
    NonFiniteSample,
    NonPositiveSigma,
    OutOfRange,
)


class SignificanceClass(str, enum.Enum):
    SMALL = "Small"
    MEDIUM = "Medium"
    LARGE = "Large"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Thresholds:
    """Upper edges of the small/medium/large buckets for the scaled A-measure.

    Defaults are Cohen's values.  ``large`` only bounds the documented table;
    anything above ``medium`` classifies as large.
    """

    small: float = 0.56
    medium: float = 0.64
    large: float = 0.71

    def __post_init__(self):
        if not (0.5 < self.small < self.medium < self.large <= 1.0):
            raise OutOfRange(
                "thresholds must be strictly increasing within (0.5, 1], got "
                f"{self.small}, {self.medium}, {self.large}"
            )

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.small, self.medium, self.large)


COHEN = Thresholds()


@dataclass(frozen=True)
class Distribution:
    samples: tuple[float, ...]
    label: str = "X"

    def __post_init__(self):
        samples = tuple(float(s) for s in self.samples)
        if not samples:
            raise EmptyDistribution(f"distribution {self.label!r} has no samples")
        for i, s in enumerate(samples):
            if not math.isfinite(s):
                raise NonFiniteSample(
                    f"distribution {self.label!r}: sample {i} is {s!r}"
                )
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self):
        return iter(self.samples)

    def to_array(self) -> np.ndarray:
        return np.asarray(self.samples, dtype=float)


DistributionLike = Union[Distribution, Sequence[float], np.ndarray]


def as_distribution(d: DistributionLike, label: str = "X") -> Distribution:
    if isinstance(d, Distribution):
        return d
    return Distribution(tuple(np.asarray(d, dtype=float).ravel().tolist()), label)


@dataclass(frozen=True)
class AMeasureResult:
    a_hat: float
    a_scaled: float
    significance: SignificanceClass
    m: int
    n: int
    # exact pair counts behind a_hat
    greater: int = field(default=0)
    ties: int = field(default=0)

    def to_dict(self) -> dict:
        return {
            "a_hat": self.a_hat,
            "a_scaled": self.a_scaled,
            "significance": self.significance.value,
            "m": self.m,
            "n": self.n,
            "greater": self.greater,
            "ties": self.ties,
        }


def pair_counts(b: DistributionLike, c: DistributionLike) -> tuple[int, int]:
    """Return ``(#(b_i > c_j), #(b_i == c_j))`` over all ``m*n`` pairs.

    Runs in O((m + n) log n) by binary search into the sorted ``c``.
    """
    xb = as_distribution(b, "B").to_array()
    xc = np.sort(as_distribution(c, "C").to_array(), kind="mergesort")
    below = np.searchsorted(xc, xb, side="left")
    at_or_below = np.searchsorted(xc, xb, side="right")
    greater = int(below.sum(dtype=np.int64))
    ties = int((at_or_below - below).sum(dtype=np.int64))
    return greater, ties


def scale_a(a_hat: float) -> float:
    """Fold an A-measure onto [0.5, 1], discarding the direction of the effect."""
    if not (0.0 <= a_hat <= 1.0):
        raise OutOfRange(f"A-measure must lie in [0, 1], got {a_hat!r}")
    return a_hat if a_hat >= 0.5 else 1.0 - a_hat


def classify_significance(
    a_scaled: float, thresholds: Thresholds = COHEN
) -> SignificanceClass:
    if not (0.5 <= a_scaled <= 1.0):
        raise OutOfRange(f"scaled A-measure must lie in [0.5, 1], got {a_scaled!r}")
    if a_scaled <= thresholds.small:
        return SignificanceClass.SMALL
    if a_scaled <= thresholds.medium:
        return SignificanceClass.MEDIUM
    return SignificanceClass.LARGE


def a_measure(
    b: DistributionLike, c: DistributionLike, thresholds: Thresholds = COHEN
) -> AMeasureResult:
    """Vargha-Delaney point estimate of P(X_B > X_C) + 0.5 P(X_B = X_C).

    Ties are exact float equality; no tolerance is applied.
    """
    db = as_distribution(b, "B")
    dc = as_distribution(c, "C")
    m, n = len(db), len(dc)
    greater, ties = pair_counts(db, dc)
    # int / int is correctly rounded, so this equals the exact rational's nearest float
    a_hat = (2 * greater + ties) / (2 * m * n)
    a_scaled = scale_a(a_hat)
    return AMeasureResult(
        a_hat=a_hat,
        a_scaled=a_scaled,
        significance=classify_significance(a_scaled, thresholds),
        m=m,
        n=n,
        greater=greater,
        ties=ties,
    )


def cohen_d(mean_b: float, mean_c: float, sigma: float) -> float:
    if not sigma > 0:
        raise NonPositiveSigma(f"sigma must be positive, got {sigma!r}")
    return abs(mean_b - mean_c) / sigma


def pearson_r(x: Iterable[float], y: Iterable[float]) -> float:
    """Product-moment correlation of paired samples, clipped to [-1, 1]."""
    xa = np.asarray(list(x) if not isinstance(x, np.ndarray) else x, dtype=float)
    ya = np.asarray(list(y) if not isinstance(y, np.ndarray) else y, dtype=float)
    if xa.shape != ya.shape or xa.ndim != 1:
        raise LengthMismatch(f"paired samples differ in shape: {xa.shape} vs {ya.shape}")
    if xa.size < 2:
        raise LengthMismatch("at least two paired samples are required")
    if not (np.isfinite(xa).all() and np.isfinite(ya).all()):
        raise NonFiniteSample("correlation inputs must be finite")
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateVariance("correlation undefined for a zero-variance input")
    r = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


@dataclass(frozen=True)
class BoxplotSummary:
    median: float
    q1: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "median": self.median,
            "q1": self.q1,
            "q3": self.q3,
            "whisker_low": self.whisker_low,
            "whisker_high": self.whisker_high,
            "outliers": list(self.outliers),
        }


def _quantile(sorted_x: np.ndarray, p: float) -> float:
    # h = (k - 1) p, linear between neighbouring order statistics
    h = (sorted_x.size - 1) * p
    lo = math.floor(h)
    hi = math.ceil(h)
    frac = h - lo
    if lo == hi or frac == 0.0:
        return float(sorted_x[lo])
    return float(sorted_x[lo] + frac * (sorted_x[hi] - sorted_x[lo]))


def median(d: DistributionLike) -> float:
    x = np.sort(as_distribution(d).to_array())
    k = x.size
    mid = k // 2
    if k % 2:
        return float(x[mid])
    return float((x[mid - 1] + x[mid]) / 2.0)


def boxplot_summary(d: DistributionLike) -> BoxplotSummary:
    x = np.sort(as_distribution(d).to_array())
    q1 = _quantile(x, 0.25)
    q3 = _quantile(x, 0.75)
    med = median(x)
    iqr = q3 - q1
    lo_fence = q1 - 1.5 * iqr
    hi_fence = q3 + 1.5 * iqr
    inside = x[(x >= lo_fence) & (x <= hi_fence)]
    whisker_low = min(float(inside.min()), q1) if inside.size else q1
    whisker_high = max(float(inside.max()), q3) if inside.size else q3
    outliers = tuple(float(v) for v in x if v < lo_fence or v > hi_fence)
    return BoxplotSummary(med, q1, q3, whisker_low, whisker_high, outliers)
