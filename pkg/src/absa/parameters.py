from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from absa.errors import InvalidSpec


@dataclass(frozen=True)
class ParameterSpec:
    """One input parameter: investigated range, calibrated value, perturbation levels."""

    name: str
    min: float
    max: float
    calibrated: float
    values: tuple[float, ...] = ()

    def __post_init__(self):
        lo, hi, cal = float(self.min), float(self.max), float(self.calibrated)
        values = tuple(float(v) for v in self.values) or (cal,)
        object.__setattr__(self, "min", lo)
        object.__setattr__(self, "max", hi)
        object.__setattr__(self, "calibrated", cal)
        object.__setattr__(self, "values", values)
        if not self.name or not self.name.isidentifier():
            raise InvalidSpec(f"parameter name {self.name!r} is not an identifier")
        if not all(math.isfinite(v) for v in (lo, hi, cal, *values)):
            raise InvalidSpec(f"{self.name}: values must be finite")
        if lo > hi:
            raise InvalidSpec(f"{self.name}: min {lo} exceeds max {hi}")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise InvalidSpec(f"{self.name}: perturbation values must be strictly ascending")
        if any(v < lo or v > hi for v in values):
            raise InvalidSpec(f"{self.name}: perturbation values must lie in [{lo}, {hi}]")
        if cal not in values:
            raise InvalidSpec(f"{self.name}: calibrated value {cal} missing from values")

    @property
    def levels(self) -> int:
        return len(self.values)

    @classmethod
    def evenly_spaced(
        cls, name: str, lo: float, hi: float, calibrated: float, k: int
    ) -> "ParameterSpec":
        """``k`` evenly spaced values over ``[lo, hi]`` with the calibrated value included.

        A grid point that matches the calibrated value up to rounding is snapped
        onto it; otherwise the calibrated value is inserted as an extra level.
        """
        if k < 1:
            raise InvalidSpec("need at least one perturbation level")
        grid = [float(v) for v in np.linspace(lo, hi, k)] if k > 1 else [float(calibrated)]
        tol = 1e-9 * max(abs(hi - lo), abs(calibrated), 1e-300)
        snapped = [calibrated if abs(v - calibrated) <= tol else v for v in grid]
        if calibrated not in snapped:
            snapped.append(calibrated)
        return cls(name, lo, hi, calibrated, tuple(sorted(set(snapped))))


def names(params: Sequence[ParameterSpec]) -> list[str]:
    out = [p.name for p in params]
    if len(set(out)) != len(out):
        raise InvalidSpec(f"duplicate parameter names in {out}")
    return out
