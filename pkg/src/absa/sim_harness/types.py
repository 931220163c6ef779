from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

from absa.errors import InvalidSpec

TOY_PARAMETERS = ("pi_ds", "ec50", "gamma")
TOY_OUTPUTS = ("X1", "X2")


@dataclass(frozen=True)
class SimulatorSpec:
    """Where run outputs come from: the bundled toy model or an external command.

    ``command`` is a template using ``{param:NAME}`` and ``{seed}`` placeholders.
    """

    kind: str = "toy"
    outputs: tuple[str, ...] = TOY_OUTPUTS
    parameters: tuple[str, ...] = TOY_PARAMETERS
    command: Optional[str] = None
    workdir: Optional[str] = None
    timeout: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "parameters", tuple(self.parameters))
        if self.kind not in ("toy", "external"):
            raise InvalidSpec(f"unknown simulator kind {self.kind!r}")
        if not self.outputs:
            raise InvalidSpec("simulator must declare at least one output")
        if len(set(self.outputs)) != len(self.outputs):
            raise InvalidSpec(f"duplicate output names in {self.outputs}")
        if len(set(self.parameters)) != len(self.parameters):
            raise InvalidSpec(f"duplicate parameter names in {self.parameters}")
        if self.kind == "external" and not self.command:
            raise InvalidSpec("external simulator needs a command template")
        if self.kind == "toy":
            unknown = set(self.outputs) - set(TOY_OUTPUTS)
            if unknown:
                raise InvalidSpec(f"toy model has no outputs {sorted(unknown)}")
            unknown = set(self.parameters) - set(TOY_PARAMETERS)
            if unknown:
                raise InvalidSpec(f"toy model has no parameters {sorted(unknown)}")

    @classmethod
    def toy(cls) -> "SimulatorSpec":
        return cls()


@dataclass(frozen=True)
class RunRequest:
    run_id: int
    parameters: Mapping[str, float]
    seed: int

    def __post_init__(self):
        object.__setattr__(
            self, "parameters", {k: float(v) for k, v in self.parameters.items()}
        )


OK = "ok"


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one execution.  ``status`` is ``"ok"`` or ``"failed:<reason>"``.

    ``wall_time`` is diagnostic only: it is neither persisted nor compared.
    """

    request: RunRequest
    outputs: Mapping[str, float]
    status: str = OK
    wall_time: float = field(default=0.0, compare=False)

    @property
    def ok(self) -> bool:
        return self.status == OK

    @property
    def run_id(self) -> int:
        return self.request.run_id

    @property
    def reason(self) -> Optional[str]:
        if self.ok:
            return None
        return self.status.partition(":")[2]

    def check(self, declared_outputs) -> None:
        if not self.ok:
            return
        for name in declared_outputs:
            value = self.outputs.get(name)
            if value is None or not math.isfinite(value):
                raise InvalidSpec(
                    f"run {self.run_id}: ok record lacks finite output {name!r}"
                )


def failed_status(reason: str) -> str:
    # keep the status a single CSV-safe token
    cleaned = " ".join(str(reason).split()).replace(",", ";")
    return f"failed:{cleaned}"
