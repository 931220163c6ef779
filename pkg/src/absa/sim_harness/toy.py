"""Stochastic toy agent-based drug-response model.

A small surrogate for an in-vitro cancer-cell experiment: healthy cells
acquire DNA damage, a drug (Hill dose response) kills damaged cells and
suppresses their repair, and healthy cells divide.  Damaged cells leave the
damaged pool faster when the drug effect is weak (``p_repair > p_kill_max``),
so a higher EC50 lowers the damaged percentage while raising the cell count.

Cells are held in a fixed-order array; each phase of a step draws one
uniform per cell in that order, so ``(params, seed)`` fixes the trajectory.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, fields, replace
from typing import Mapping

import numpy as np

from absa.errors import InvalidParams

CALIBRATED = {"pi_ds": 0.75, "ec50": 1.0, "gamma": 2.0}


@dataclass(frozen=True)
class ToyModelParams:
    pi_ds: float = 0.75
    ec50: float = 1.0
    gamma: float = 2.0
    initial_cells: int = 50
    steps: int = 60
    drug_concentration: float = 1.0
    p_cycle: float = 0.05
    p_div: float = 0.04
    p_kill_max: float = 0.3
    p_repair: float = 0.4
    population_cap: int = 5000

    def __post_init__(self):
        for name in ("pi_ds", "p_cycle", "p_div", "p_kill_max", "p_repair"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise InvalidParams(f"{name} must be a probability, got {v!r}")
        for name in ("ec50", "gamma"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise InvalidParams(f"{name} must be positive, got {v!r}")
        if self.drug_concentration < 0:
            raise InvalidParams("drug concentration must be non-negative")
        if self.initial_cells < 0 or self.steps < 0 or self.population_cap < 1:
            raise InvalidParams("cell counts and step count must be non-negative")

    @classmethod
    def from_mapping(cls, values: Mapping[str, float]) -> "ToyModelParams":
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise InvalidParams(f"unknown toy-model parameters {sorted(unknown)}")
        return replace(cls(), **{k: float(v) for k, v in values.items()})


def hill_effect(concentration: float, ec50: float, gamma: float) -> float:
    """Fraction of maximal drug effect, C^g / (EC50^g + C^g)."""
    if concentration == ec50:
        return 0.5
    cg = concentration**gamma
    return cg / (ec50**gamma + cg)


def simulate_toy(params: ToyModelParams, seed: int) -> dict[str, float]:
    """Run one trajectory; returns ``X1`` (percent damaged) and ``X2`` (cell count)."""
    if not isinstance(params, ToyModelParams):
        params = ToyModelParams.from_mapping(params)
    rng = np.random.default_rng(seed)
    effect = hill_effect(params.drug_concentration, params.ec50, params.gamma)
    p_damage = params.p_cycle * params.pi_ds
    p_die = effect * params.p_kill_max
    p_fix = (1.0 - effect) * params.p_repair
    cap = params.population_cap

    damaged = np.zeros(min(params.initial_cells, cap), dtype=bool)
    for _ in range(params.steps):
        total = damaged.size
        if total == 0:
            break
        # damage inflow
        damaged = damaged | (rng.random(total) < p_damage)
        # drug response of damaged cells: death, otherwise a chance of repair
        u_die = rng.random(total)
        u_fix = rng.random(total)
        dies = damaged & (u_die < p_die)
        repairs = damaged & ~dies & (u_fix < p_fix)
        survivors = ~dies
        damaged = (damaged & ~repairs)[survivors]
        # division of healthy survivors, first come first served under the cap
        total = damaged.size
        divides = ~damaged & (rng.random(total) < params.p_div)
        room = cap - total
        if room <= 0:
            continue
        births = int(divides.sum())
        if births > room:
            births = room
        if births:
            damaged = np.concatenate([damaged, np.zeros(births, dtype=bool)])

    total = int(damaged.size)
    n_damaged = int(damaged.sum())
    x1 = 100.0 * n_damaged / total if total else 0.0
    return {"X1": x1, "X2": float(total)}


def run_toy(parameters: Mapping[str, float], seed: int):
    """Evaluate the toy model at calibrated values overridden by ``parameters``."""
    start = time.perf_counter()
    out = simulate_toy(ToyModelParams.from_mapping(parameters), seed)
    return out, time.perf_counter() - start
