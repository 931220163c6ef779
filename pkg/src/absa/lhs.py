"""Latin hypercube sampling and analysis.

Every parameter range is cut into ``N`` equal intervals and each interval is
sampled exactly once across the ``N`` points.  With the ``maximin`` criterion
several candidate designs are drawn and the one whose closest pair of
unit-cube points is furthest apart is kept.

Choosing ``N`` is left to the modeller.  ``N = 2q`` for many parameters and
``N = 4q/3`` are common rules of thumb; larger ``N`` buys more points for the
analysis stage at a proportional simulation cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.spatial.distance import pdist

from absa.errors import (
    DegenerateVariance,
    DimensionMismatch,
    IndexOutOfRange,
    InvalidDimensions,
    InvalidSpec,
    OutOfRange,
    SimulationFailure,
)
from absa.parameters import ParameterSpec, names
from absa.sim_harness import (
    CampaignStore,
    RunRecord,
    RunRequest,
    SimulatorSpec,
    derive_seed,
    execute_batch,
)
from absa.robustness import default_base_point
from absa.stats_core import median, pearson_r

CAMPAIGN = "lhs"
CRITERIA = ("none", "maximin")
SCHEMES = ("mukaka", "schober", "krehbiel")

DESCRIPTORS = ("negligible", "weak", "moderate", "strong", "very strong")
# lower edges of the weak, moderate, strong and very strong buckets
_EDGES = {
    "mukaka": (0.3, 0.5, 0.7, 0.9),
    "schober": (0.1, 0.4, 0.7, 0.9),
}


@dataclass(frozen=True, eq=False)
class LhsDesign:
    n: int
    q: int
    unit_matrix: np.ndarray
    interval_matrix: np.ndarray
    seed: int
    criterion: str
    candidates: int
    min_distance: float

    def __eq__(self, other):
        if not isinstance(other, LhsDesign):
            return NotImplemented
        return (
            (self.n, self.q, self.seed, self.criterion, self.candidates)
            == (other.n, other.q, other.seed, other.criterion, other.candidates)
            and np.array_equal(self.unit_matrix, other.unit_matrix)
            and np.array_equal(self.interval_matrix, other.interval_matrix)
        )


def min_pairwise_distance(points: np.ndarray) -> float:
    if points.shape[0] < 2:
        return math.inf
    return float(pdist(points).min())


def _one_candidate(q: int, n: int, seed: int, index: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
    unit = np.empty((n, q))
    intervals = np.empty((n, q), dtype=np.int64)
    for i in range(q):
        perm = rng.permutation(n)
        jitter = rng.random(n)
        col = (perm + jitter) / n
        upper = (perm + 1) / n
        # (k + u) / n may round up onto the interval's open upper edge
        col = np.where(col >= upper, np.nextafter(upper, 0.0), col)
        unit[:, i] = col
        intervals[:, i] = perm + 1
    return unit, intervals


def candidate_designs(q: int, n: int, seed: int, candidates: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Every candidate a maximin design would consider, in generation order."""
    return [_one_candidate(q, n, seed, c) for c in range(candidates)]


def design(
    q: int, n: int, seed: int, criterion: str = "maximin", candidates: int = 5
) -> LhsDesign:
    if q < 1 or n < 1 or candidates < 1:
        raise InvalidDimensions(f"need q, N, candidates >= 1 (got {q}, {n}, {candidates})")
    if criterion not in CRITERIA:
        raise InvalidDimensions(f"unknown criterion {criterion!r}")
    pool = candidate_designs(q, n, seed, 1 if criterion == "none" else candidates)
    best_unit, best_int, best_d = None, None, -math.inf
    for unit, intervals in pool:
        d = min_pairwise_distance(unit)
        # strict > keeps the earliest candidate on ties
        if best_unit is None or d > best_d:
            best_unit, best_int, best_d = unit, intervals, d
    return LhsDesign(n, q, best_unit, best_int, seed, criterion, candidates, best_d)


def interval_bounds(param: ParameterSpec, r: int, n: int) -> tuple[float, float]:
    """Closed range of the ``r``-th (1-based) of ``n`` equal intervals."""
    if n < 1 or not (1 <= r <= n):
        raise IndexOutOfRange(f"interval {r} outside 1..{n}")
    w = (param.max - param.min) / n
    return param.min + w * (r - 1), param.min + w * r


def scale_design(lhs: LhsDesign, params: Sequence[ParameterSpec]) -> list[dict[str, float]]:
    """Map unit-cube points into parameter ranges, interval by interval."""
    if len(params) != lhs.q:
        raise DimensionMismatch(f"design has {lhs.q} columns but {len(params)} parameters given")
    names(params)
    points = [dict() for _ in range(lhs.n)]
    for i, p in enumerate(params):
        for j in range(lhs.n):
            r = int(lhs.interval_matrix[j, i])
            low, high = interval_bounds(p, r, lhs.n)
            frac = lhs.unit_matrix[j, i] * lhs.n - (r - 1)
            frac = min(max(frac, 0.0), 1.0)
            value = low + frac * (high - low)
            points[j][p.name] = min(max(value, low), high)
    return points


def classify_correlation(r: float, scheme: str = "mukaka", sample_count: Optional[int] = None) -> str:
    if not (-1.0 <= r <= 1.0):
        raise OutOfRange(f"correlation must lie in [-1, 1], got {r!r}")
    mag = abs(r)
    if scheme == "krehbiel":
        if not sample_count or sample_count < 1:
            raise InvalidSpec("the krehbiel rule needs a positive sample count")
        if mag >= 2.0 / math.sqrt(sample_count):
            return "linear relationship exists"
        return "no linear relationship"
    if scheme not in _EDGES:
        raise InvalidSpec(f"unknown correlation scheme {scheme!r}")
    level = sum(mag >= edge for edge in _EDGES[scheme])
    return DESCRIPTORS[level]


@dataclass
class LhsResult:
    design: LhsDesign
    parameters: list[ParameterSpec]
    outputs: tuple[str, ...]
    points: list[dict[str, float]]
    medians: list[dict[str, float]]
    n_star: int
    scheme: str = "mukaka"
    # (parameter, output) -> r, or None when a variance is zero
    correlations: dict[tuple[str, str], Optional[float]] = field(default_factory=dict)
    descriptors: dict[tuple[str, str], Optional[str]] = field(default_factory=dict)

    @property
    def degenerate_pairs(self) -> list[tuple[str, str]]:
        return [k for k, v in self.correlations.items() if v is None]

    def scatter(self, parameter: str, output: str) -> tuple[list[float], list[float]]:
        return [p[parameter] for p in self.points], [m[output] for m in self.medians]

    def to_dict(self) -> dict:
        table = []
        for p in self.parameters:
            for o in self.outputs:
                table.append(
                    {
                        "parameter": p.name,
                        "output": o,
                        "r": self.correlations[(p.name, o)],
                        "descriptor": self.descriptors[(p.name, o)],
                    }
                )
        return {
            "N": self.design.n,
            "q": self.design.q,
            "n_star": self.n_star,
            "criterion": self.design.criterion,
            "candidates": self.design.candidates,
            "design_seed": self.design.seed,
            "min_distance": None if math.isinf(self.design.min_distance) else self.design.min_distance,
            "scheme": self.scheme,
            "parameters": [
                {"name": p.name, "min": p.min, "max": p.max} for p in self.parameters
            ],
            "outputs": list(self.outputs),
            "points": [
                {"point": j, "parameters": self.points[j], "medians": self.medians[j]}
                for j in range(self.design.n)
            ],
            "correlations": table,
            "degenerate_pairs": [list(k) for k in self.degenerate_pairs],
        }


def plan_lhs(
    points: Sequence[dict[str, float]],
    n_star: int,
    master_seed: int,
    base_point: Optional[dict[str, float]] = None,
) -> list[RunRequest]:
    if n_star < 1:
        raise InvalidSpec(f"n_star must be >= 1, got {n_star}")
    requests = []
    for j, point in enumerate(points):
        for rep in range(n_star):
            seed = derive_seed(master_seed, CAMPAIGN, [f"point:{j}"], rep)
            requests.append(RunRequest(j * n_star + rep, {**(base_point or {}), **point}, seed))
    return requests


def design_seed(master_seed: int) -> int:
    return derive_seed(master_seed, CAMPAIGN, ["design"], 0)


def analyze_records(
    records: Sequence[RunRecord],
    lhs: LhsDesign,
    params: Sequence[ParameterSpec],
    points: Sequence[dict[str, float]],
    outputs: Sequence[str],
    n_star: int,
    scheme: str = "mukaka",
) -> LhsResult:
    bad = [r for r in records if not r.ok]
    if bad:
        raise SimulationFailure(
            f"{len(bad)} run(s) failed, first run {bad[0].run_id}: {bad[0].reason}",
            [r.run_id for r in bad],
        )
    ordered = sorted(records, key=lambda r: r.run_id)
    if len(ordered) != lhs.n * n_star:
        raise InvalidSpec(f"expected {lhs.n * n_star} runs, got {len(ordered)}")
    medians = []
    for j in range(lhs.n):
        chunk = ordered[j * n_star : (j + 1) * n_star]
        medians.append({o: median([r.outputs[o] for r in chunk]) for o in outputs})
    result = LhsResult(lhs, list(params), tuple(outputs), list(points), medians, n_star, scheme)
    for p in params:
        xs = [pt[p.name] for pt in points]
        for o in outputs:
            ys = [m[o] for m in medians]
            try:
                r = pearson_r(xs, ys)
            except (DegenerateVariance, ValueError):
                # also covers N = 1, where no correlation exists
                result.correlations[(p.name, o)] = None
                result.descriptors[(p.name, o)] = None
                continue
            result.correlations[(p.name, o)] = r
            result.descriptors[(p.name, o)] = classify_correlation(r, scheme, lhs.n)
    return result


def run_lhs(
    sim: SimulatorSpec,
    params: Sequence[ParameterSpec],
    n: int,
    n_star: int,
    outputs: Sequence[str],
    master_seed: int,
    criterion: str = "maximin",
    candidates: int = 5,
    parallelism: int = 1,
    store: Optional[CampaignStore] = None,
    scheme: str = "mukaka",
    base_point: Optional[dict[str, float]] = None,
) -> LhsResult:
    unknown = [p.name for p in params if p.name not in sim.parameters]
    if unknown:
        raise InvalidSpec(f"simulator does not take parameters {unknown}")
    missing = [o for o in outputs if o not in sim.outputs]
    if missing:
        raise InvalidSpec(f"simulator does not produce outputs {missing}")
    lhs = design(len(params), n, design_seed(master_seed), criterion, candidates)
    points = scale_design(lhs, params)
    if base_point is None:
        base_point = default_base_point(sim)
    requests = plan_lhs(points, n_star, master_seed, base_point)
    if store is not None:
        records, _ = store.run(sim, requests, parallelism)
    else:
        records = execute_batch(sim, requests, parallelism)
    return analyze_records(records, lhs, params, points, outputs, n_star, scheme)
