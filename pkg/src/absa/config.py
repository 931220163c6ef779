"""Campaign configuration: one JSON document per campaign."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from absa.consistency import ConsistencyConfig
from absa.errors import ConfigError, InvalidSpec
from absa.parameters import ParameterSpec
from absa.sim_harness import CALIBRATED, TOY_OUTPUTS, TOY_PARAMETERS, SimulatorSpec
from absa.stats_core import Thresholds


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SimulatorModel(_Model):
    kind: Literal["toy", "external"] = "toy"
    command: Optional[str] = None
    workdir: Optional[str] = None
    timeout: Optional[float] = Field(default=None, gt=0)
    outputs: Optional[list[str]] = None
    parameters: Optional[list[str]] = None


class ParameterModel(_Model):
    name: str
    min: float
    max: float
    calibrated: float
    values: Optional[list[float]] = None
    # evenly spaced grid including the calibrated value, used when values is absent
    levels: Optional[int] = Field(default=None, ge=1)


class ConsistencyModel(_Model):
    sizes: list[int] = [1, 5, 50, 100, 300]
    group_count: int = 20
    threshold: Optional[float] = None


class RobustnessModel(_Model):
    n_star: Optional[int] = Field(default=None, ge=1)
    reuse_calibrated: bool = False


class LhsModel(_Model):
    N: Optional[int] = Field(default=None, ge=1)
    criterion: Literal["none", "maximin"] = "maximin"
    candidates: int = Field(default=5, ge=1)


class ThresholdModel(_Model):
    small: float = 0.56
    medium: float = 0.64
    large: float = 0.71


class CampaignConfig(_Model):
    simulator: SimulatorModel = SimulatorModel()
    outputs: Optional[list[str]] = None
    parameters: list[ParameterModel] = []
    consistency: ConsistencyModel = ConsistencyModel()
    robustness: RobustnessModel = RobustnessModel()
    lhs: LhsModel = LhsModel()
    master_seed: int = Field(default=0, ge=0, lt=2**64)
    parallelism: int = Field(default=1, ge=1)
    output_dir: Optional[str] = None
    thresholds: ThresholdModel = ThresholdModel()
    correlation_scheme: Literal["mukaka", "schober", "krehbiel"] = "mukaka"

    @model_validator(mode="after")
    def _resolve(self):
        spec = self.simulator_spec()
        for name in self.output_names():
            if name not in spec.outputs:
                raise ValueError(f"output {name!r} is not produced by the simulator")
        for p in self.parameters:
            if p.name not in spec.parameters:
                raise ValueError(f"parameter {p.name!r} is not taken by the simulator")
        self.parameter_specs()
        self.threshold_spec()
        self.consistency_config()
        return self

    def simulator_spec(self) -> SimulatorSpec:
        s = self.simulator
        try:
            if s.kind == "toy":
                return SimulatorSpec(
                    "toy",
                    tuple(s.outputs or TOY_OUTPUTS),
                    tuple(s.parameters or TOY_PARAMETERS),
                )
            params = s.parameters if s.parameters is not None else [p.name for p in self.parameters]
            return SimulatorSpec(
                "external",
                tuple(s.outputs or self.outputs or ()),
                tuple(params),
                s.command,
                s.workdir,
                s.timeout,
            )
        except InvalidSpec as exc:
            raise ValueError(str(exc)) from None

    def output_names(self) -> tuple[str, ...]:
        if self.outputs:
            return tuple(self.outputs)
        return self.simulator_spec().outputs

    def parameter_specs(self) -> list[ParameterSpec]:
        specs = []
        try:
            for p in self.parameters:
                if p.values is not None:
                    specs.append(ParameterSpec(p.name, p.min, p.max, p.calibrated, tuple(p.values)))
                elif p.levels is not None:
                    specs.append(ParameterSpec.evenly_spaced(p.name, p.min, p.max, p.calibrated, p.levels))
                else:
                    specs.append(ParameterSpec(p.name, p.min, p.max, p.calibrated))
        except InvalidSpec as exc:
            raise ValueError(str(exc)) from None
        names = [s.name for s in specs]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate parameter names {names}")
        return specs

    def calibrated_point(self) -> dict[str, float]:
        point = {}
        if self.simulator.kind == "toy":
            point = {k: CALIBRATED[k] for k in self.simulator_spec().parameters}
        point.update({p.name: p.calibrated for p in self.parameters})
        return point

    def threshold_spec(self) -> Thresholds:
        t = self.thresholds
        try:
            return Thresholds(t.small, t.medium, t.large)
        except ValueError as exc:
            raise ValueError(str(exc)) from None

    def consistency_config(self) -> ConsistencyConfig:
        c = self.consistency
        try:
            return ConsistencyConfig(
                sizes=tuple(c.sizes),
                group_count=c.group_count,
                outputs=self.output_names(),
                threshold=c.threshold if c.threshold is not None else self.thresholds.small,
                master_seed=self.master_seed,
            )
        except InvalidSpec as exc:
            raise ValueError(str(exc)) from None

    def config_hash(self) -> str:
        """Digest of everything that affects results (not output dir or parallelism)."""
        data = self.model_dump(mode="json", exclude={"output_dir", "parallelism"})
        canon = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()


def load_config(path) -> CampaignConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        return CampaignConfig.model_validate_json(text)
    except ValidationError as exc:
        raise ConfigError(f"invalid config {path}:\n{exc}") from None


def demo_config(master_seed: int = 0) -> CampaignConfig:
    """Toy-model campaign at desk scale over the worked-example ranges."""
    return CampaignConfig(
        simulator=SimulatorModel(kind="toy"),
        parameters=[
            ParameterModel(name="pi_ds", min=0.65, max=0.85, calibrated=0.75, levels=5),
            ParameterModel(name="ec50", min=0.25, max=1.75, calibrated=1.0, levels=5),
            ParameterModel(name="gamma", min=1.0, max=3.0, calibrated=2.0, levels=5),
        ],
        consistency=ConsistencyModel(sizes=[1, 5, 20, 50], group_count=10),
        lhs=LhsModel(N=50),
        master_seed=master_seed,
    )
