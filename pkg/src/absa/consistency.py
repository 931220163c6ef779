"""Consistency (aleatory) analysis.

Replicates at calibrated parameters are partitioned into groups of ``K``
equally sized distributions for each size on a ladder.  Within a group the
first distribution is compared to each of the other ``K - 1`` with the
A-measure; ``n*`` is the smallest size whose worst scaled A-measure is at or
below the small-effect threshold for every output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from absa.errors import InsufficientRuns, InvalidSpec, SimulationFailure
from absa.sim_harness import (
    CALIBRATED,
    CampaignStore,
    RunRecord,
    RunRequest,
    SimulatorSpec,
    derive_seed,
    execute_batch,
)
from absa.stats_core import COHEN, AMeasureResult, Distribution, Thresholds, a_measure

CAMPAIGN = "consistency"


@dataclass(frozen=True)
class ConsistencyConfig:
    sizes: tuple[int, ...] = (1, 5, 50, 100, 300)
    group_count: int = 20
    outputs: tuple[str, ...] = ("X1", "X2")
    threshold: float = 0.56
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise InvalidSpec(f"distribution sizes must be >= 1, got {self.sizes}")
        if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise InvalidSpec(f"distribution sizes must be strictly ascending, got {self.sizes}")
        if self.group_count < 2:
            raise InvalidSpec("need at least two distributions per group")
        if not (0.5 < self.threshold <= 1.0):
            raise InvalidSpec(f"threshold must lie in (0.5, 1], got {self.threshold}")
        if not self.outputs:
            raise InvalidSpec("no outputs configured")


@dataclass(frozen=True)
class DistributionGroup:
    size: int
    distributions: tuple[Distribution, ...]

    def __post_init__(self):
        if any(len(d) != self.size for d in self.distributions):
            raise InvalidSpec(f"every distribution in the group must hold {self.size} samples")


@dataclass(frozen=True)
class GroupAnalysis:
    size: int
    output: str
    comparisons: tuple[AMeasureResult, ...]
    max_scaled_a: float


@dataclass
class ConsistencyResult:
    """``n_star`` values are ``None`` when no configured size reaches the threshold."""

    sizes: tuple[int, ...]
    outputs: tuple[str, ...]
    groups: dict[tuple[int, str], GroupAnalysis]
    threshold: float
    n_star: dict[str, Optional[int]] = field(default_factory=dict)
    n_star_overall: Optional[int] = None
    total_runs: int = 0

    def maxima(self, output: str) -> list[float]:
        return [self.groups[(s, output)].max_scaled_a for s in self.sizes]

    def to_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "outputs": list(self.outputs),
            "group_count": len(next(iter(self.groups.values())).comparisons) + 1,
            "threshold": self.threshold,
            "total_runs": self.total_runs,
            "n_star": {o: self.n_star.get(o) for o in self.outputs},
            "n_star_overall": self.n_star_overall,
            "n_star_reached": self.n_star_overall is not None,
            "max_scaled_a": {o: self.maxima(o) for o in self.outputs},
            "groups": [
                {
                    "size": g.size,
                    "output": g.output,
                    "max_scaled_a": g.max_scaled_a,
                    "comparisons": [c.to_dict() for c in g.comparisons],
                }
                for (_, _), g in sorted(
                    self.groups.items(),
                    key=lambda kv: (kv[0][0], self.outputs.index(kv[0][1])),
                )
            ],
        }


def plan_runs(config: ConsistencyConfig) -> int:
    return config.group_count * sum(config.sizes)


def plan_requests(
    config: ConsistencyConfig, calibrated: Mapping[str, float]
) -> list[RunRequest]:
    return [
        RunRequest(i, dict(calibrated), derive_seed(config.master_seed, CAMPAIGN, ["calibrated"], i))
        for i in range(plan_runs(config))
    ]


def _require_ok(records: Sequence[RunRecord]) -> None:
    bad = [r for r in records if not r.ok]
    if bad:
        raise SimulationFailure(
            f"{len(bad)} run(s) failed, first run {bad[0].run_id}: {bad[0].reason}",
            [r.run_id for r in bad],
        )


def build_groups(
    records: Sequence[RunRecord], config: ConsistencyConfig
) -> dict[str, list[DistributionGroup]]:
    """Partition records, in ascending run id, into one group per ladder size.

    Surplus records beyond the plan are ignored.
    """
    needed = plan_runs(config)
    if len(records) < needed:
        raise InsufficientRuns(f"consistency plan needs {needed} runs, got {len(records)}")
    ordered = sorted(records, key=lambda r: r.run_id)[:needed]
    _require_ok(ordered)
    out: dict[str, list[DistributionGroup]] = {o: [] for o in config.outputs}
    for output in config.outputs:
        pos = 0
        for size in config.sizes:
            dists = []
            for _ in range(config.group_count):
                chunk = ordered[pos : pos + size]
                pos += size
                dists.append(Distribution(tuple(r.outputs[output] for r in chunk), output))
            out[output].append(DistributionGroup(size, tuple(dists)))
    return out


def analyze_group(
    group: DistributionGroup, thresholds: Thresholds = COHEN
) -> tuple[list[AMeasureResult], float]:
    """Compare the first distribution against each of the others, in order."""
    first = group.distributions[0]
    comparisons = [a_measure(first, other, thresholds) for other in group.distributions[1:]]
    return comparisons, max(c.a_scaled for c in comparisons)


def n_star_from_maxima(
    sizes: Sequence[int],
    maxima: Mapping[str, Sequence[float]],
    threshold: float = 0.56,
) -> tuple[Optional[int], dict[str, Optional[int]]]:
    """Return ``(overall, per_output)`` n* for a ladder of per-size maxima.

    The overall value is the smallest size at which every output is at or
    below ``threshold`` simultaneously.
    """
    per_output = {}
    for output, values in maxima.items():
        per_output[output] = next(
            (s for s, v in zip(sizes, values) if v <= threshold), None
        )
    overall = next(
        (
            s
            for i, s in enumerate(sizes)
            if all(values[i] <= threshold for values in maxima.values())
        ),
        None,
    )
    return overall, per_output


def find_n_star(result: ConsistencyResult, threshold: Optional[float] = None) -> Optional[int]:
    threshold = result.threshold if threshold is None else threshold
    overall, _ = n_star_from_maxima(
        result.sizes, {o: result.maxima(o) for o in result.outputs}, threshold
    )
    return overall


def analyze_records(
    records: Sequence[RunRecord],
    config: ConsistencyConfig,
    thresholds: Thresholds = COHEN,
) -> ConsistencyResult:
    groups = build_groups(records, config)
    analyses = {}
    for output, per_size in groups.items():
        for group in per_size:
            comps, worst = analyze_group(group, thresholds)
            analyses[(group.size, output)] = GroupAnalysis(group.size, output, tuple(comps), worst)
    result = ConsistencyResult(
        sizes=config.sizes,
        outputs=config.outputs,
        groups=analyses,
        threshold=config.threshold,
        total_runs=plan_runs(config),
    )
    overall, per_output = n_star_from_maxima(
        config.sizes, {o: result.maxima(o) for o in config.outputs}, config.threshold
    )
    result.n_star = per_output
    result.n_star_overall = overall
    return result


def run_consistency(
    sim: SimulatorSpec,
    config: ConsistencyConfig,
    calibrated: Optional[Mapping[str, float]] = None,
    parallelism: int = 1,
    store: Optional[CampaignStore] = None,
    thresholds: Thresholds = COHEN,
) -> ConsistencyResult:
    """Plan, execute and analyse a full consistency campaign."""
    missing = set(config.outputs) - set(sim.outputs)
    if missing:
        raise InvalidSpec(f"simulator does not produce outputs {sorted(missing)}")
    if calibrated is None:
        if sim.kind != "toy":
            raise InvalidSpec("external simulators need explicit calibrated values")
        calibrated = {k: CALIBRATED[k] for k in sim.parameters}
    requests = plan_requests(config, calibrated)
    if store is not None:
        records, _ = store.run(sim, requests, parallelism)
    else:
        records = execute_batch(sim, requests, parallelism)
    return analyze_records(records, config, thresholds)
