"""One-at-a-time robustness analysis.

Each parameter is swept over its perturbation levels while every other
parameter stays calibrated.  ``n*`` replicates are produced per level and the
calibrated distribution of the sweep is compared against each level's
distribution with the A-measure; boxplot summaries describe every level.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from absa.errors import InvalidSpec, SimulationFailure, UnknownOutput, UnknownParameter
from absa.parameters import ParameterSpec, names
from absa.sim_harness import (
    CampaignStore,
    RunRecord,
    RunRequest,
    SimulatorSpec,
    derive_seed,
    execute_batch,
    value_label,
)
from absa.sim_harness.toy import CALIBRATED
from absa.stats_core import (
    COHEN,
    AMeasureResult,
    BoxplotSummary,
    Distribution,
    SignificanceClass,
    Thresholds,
    a_measure,
    boxplot_summary,
)

CAMPAIGN = "robustness"

__all__ = [
    "ParameterSpec",
    "RobustnessEntry",
    "RobustnessResult",
    "plan_robustness",
    "run_robustness",
    "significance_curve",
    "total_distributions",
]


def total_distributions(params: Sequence[ParameterSpec]) -> int:
    if not params:
        raise InvalidSpec("robustness analysis needs at least one parameter")
    return sum(p.levels for p in params)


@dataclass(frozen=True)
class Cell:
    """The replicate run ids behind one (parameter, value) distribution."""

    parameter: str
    value: float
    run_ids: tuple[int, ...]


@dataclass
class RobustnessPlan:
    cells: list[Cell]
    requests: list[RunRequest]
    # parameter -> run ids of the calibrated distribution used by that sweep
    calibrated_runs: dict[str, tuple[int, ...]]


def plan_robustness(
    params: Sequence[ParameterSpec],
    n_star: int,
    master_seed: int,
    reuse_calibrated: bool = False,
    base_point: Optional[Mapping[str, float]] = None,
) -> RobustnessPlan:
    """Lay out the runs of every sweep; ``base_point`` fills parameters not swept."""
    if n_star < 1:
        raise InvalidSpec(f"n_star must be >= 1, got {n_star}")
    names(params)
    total_distributions(params)
    base = {**(base_point or {}), **{p.name: p.calibrated for p in params}}
    requests: list[RunRequest] = []
    cells: list[Cell] = []
    calibrated_runs: dict[str, tuple[int, ...]] = {}

    def make(point: Mapping[str, float], context: list[str]) -> tuple[int, ...]:
        ids = []
        for rep in range(n_star):
            run_id = len(requests)
            seed = derive_seed(master_seed, CAMPAIGN, context, rep)
            requests.append(RunRequest(run_id, dict(point), seed))
            ids.append(run_id)
        return tuple(ids)

    shared = make(base, ["calibrated"]) if reuse_calibrated else None
    for p in params:
        for v in p.values:
            if v == p.calibrated and shared is not None:
                ids = shared
            else:
                ids = make({**base, p.name: v}, [p.name, value_label(v)])
            cells.append(Cell(p.name, v, ids))
            if v == p.calibrated:
                calibrated_runs[p.name] = ids
    return RobustnessPlan(cells, requests, calibrated_runs)


@dataclass(frozen=True)
class RobustnessEntry:
    parameter: str
    value: float
    a_measures: Mapping[str, AMeasureResult]
    boxplots: Mapping[str, BoxplotSummary]
    run_ids: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "parameter": self.parameter,
            "value": self.value,
            "a_measure": {o: a.to_dict() for o, a in self.a_measures.items()},
            "boxplot": {o: b.to_dict() for o, b in self.boxplots.items()},
            "first_run_id": self.run_ids[0] if self.run_ids else None,
        }


@dataclass
class RobustnessResult:
    parameters: list[ParameterSpec]
    outputs: tuple[str, ...]
    entries: dict[tuple[str, float], RobustnessEntry] = field(default_factory=dict)
    n_star_used: int = 0
    total_distributions: int = 0

    def entry(self, parameter: str, value: float) -> RobustnessEntry:
        return self.entries[(parameter, value)]

    def to_dict(self) -> dict:
        return {
            "n_star_used": self.n_star_used,
            "total_distributions": self.total_distributions,
            "outputs": list(self.outputs),
            "parameters": [
                {
                    "name": p.name,
                    "min": p.min,
                    "max": p.max,
                    "calibrated": p.calibrated,
                    "values": list(p.values),
                    "entries": [self.entries[(p.name, v)].to_dict() for v in p.values],
                }
                for p in self.parameters
            ],
        }


def analyze_records(
    records: Sequence[RunRecord],
    plan: RobustnessPlan,
    params: Sequence[ParameterSpec],
    outputs: Sequence[str],
    n_star: int,
    thresholds: Thresholds = COHEN,
) -> RobustnessResult:
    by_id = {r.run_id: r for r in records}
    bad = [r for r in records if not r.ok]
    if bad:
        raise SimulationFailure(
            f"{len(bad)} run(s) failed, first run {bad[0].run_id}: {bad[0].reason}",
            [r.run_id for r in bad],
        )

    def dist(ids: tuple[int, ...], output: str) -> Distribution:
        return Distribution(tuple(by_id[i].outputs[output] for i in ids), output)

    result = RobustnessResult(
        parameters=list(params),
        outputs=tuple(outputs),
        n_star_used=n_star,
        total_distributions=total_distributions(params),
    )
    for cell in plan.cells:
        ref_ids = plan.calibrated_runs[cell.parameter]
        a_measures, boxes = {}, {}
        for output in outputs:
            perturbed = dist(cell.run_ids, output)
            a_measures[output] = a_measure(dist(ref_ids, output), perturbed, thresholds)
            boxes[output] = boxplot_summary(perturbed)
        result.entries[(cell.parameter, cell.value)] = RobustnessEntry(
            cell.parameter, cell.value, a_measures, boxes, cell.run_ids
        )
    return result


def run_robustness(
    sim: SimulatorSpec,
    params: Sequence[ParameterSpec],
    n_star: int,
    outputs: Sequence[str],
    master_seed: int,
    parallelism: int = 1,
    store: Optional[CampaignStore] = None,
    reuse_calibrated: bool = False,
    thresholds: Thresholds = COHEN,
    base_point: Optional[Mapping[str, float]] = None,
) -> RobustnessResult:
    unknown = [p.name for p in params if p.name not in sim.parameters]
    if unknown:
        raise InvalidSpec(f"simulator does not take parameters {unknown}")
    missing = [o for o in outputs if o not in sim.outputs]
    if missing:
        raise InvalidSpec(f"simulator does not produce outputs {missing}")
    if base_point is None:
        base_point = default_base_point(sim)
    plan = plan_robustness(params, n_star, master_seed, reuse_calibrated, base_point)
    if store is not None:
        records, _ = store.run(sim, plan.requests, parallelism)
    else:
        records = execute_batch(sim, plan.requests, parallelism)
    return analyze_records(records, plan, params, outputs, n_star, thresholds)


def default_base_point(sim: SimulatorSpec) -> dict[str, float]:
    """Calibrated values for the toy model; external simulators get none."""
    if sim.kind == "toy":
        return {k: CALIBRATED[k] for k in sim.parameters}
    return {}


def significance_curve(
    result: RobustnessResult, parameter: str, output: str
) -> list[tuple[float, float, float, SignificanceClass]]:
    spec = next((p for p in result.parameters if p.name == parameter), None)
    if spec is None:
        raise UnknownParameter(parameter)
    if output not in result.outputs:
        raise UnknownOutput(output)
    curve = []
    for v in spec.values:
        a = result.entries[(parameter, v)].a_measures[output]
        curve.append((v, a.a_hat, a.a_scaled, a.significance))
    return curve
