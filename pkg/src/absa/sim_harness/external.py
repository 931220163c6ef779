"""Adapter for simulators that run as a child process.

Protocol: the command template's ``{param:NAME}`` and ``{seed}`` placeholders
are replaced by decimal literals; the child prints a header line of output
names and one line of values, then exits 0.
"""

from __future__ import annotations

import math
import re
import shlex
import subprocess
import time
from typing import Mapping

from absa.errors import InvalidSpec, ProtocolViolation, SimulationTimeout, SpawnFailure
from absa.sim_harness.types import RunRecord, RunRequest, SimulatorSpec, failed_status

_PLACEHOLDER = re.compile(r"\{(param:([A-Za-z_][A-Za-z0-9_.\-]*)|seed)\}")


def format_decimal(value: float) -> str:
    return format(float(value), ".17g")


def render_command(template: str, parameters: Mapping[str, float], seed: int) -> list[str]:
    """Substitute placeholders and split into an argv list."""

    def sub(match: re.Match) -> str:
        if match.group(1) == "seed":
            return str(int(seed))
        name = match.group(2)
        if name not in parameters:
            raise InvalidSpec(f"command references unknown parameter {name!r}")
        return format_decimal(parameters[name])

    return shlex.split(_PLACEHOLDER.sub(sub, template))


def parse_output(stdout: str, declared: tuple[str, ...]) -> dict[str, float]:
    lines = stdout.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lines = [ln.rstrip("\r") for ln in lines]
    if len(lines) != 2:
        raise ProtocolViolation(f"expected 2 output lines, got {len(lines)}")
    names = [s.strip() for s in lines[0].split(",")]
    raw = [s.strip() for s in lines[1].split(",")]
    if len(names) != len(raw):
        raise ProtocolViolation(
            f"header has {len(names)} fields but value line has {len(raw)}"
        )
    if len(set(names)) != len(names):
        raise ProtocolViolation(f"duplicate output names in header {names}")
    missing = [n for n in declared if n not in names]
    extra = [n for n in names if n not in declared]
    if missing or extra:
        raise ProtocolViolation(f"output mismatch: missing={missing} extra={extra}")
    values = {}
    for name, text in zip(names, raw):
        try:
            v = float(text)
        except ValueError:
            raise ProtocolViolation(f"output {name!r} is not a number: {text!r}") from None
        if not math.isfinite(v):
            raise ProtocolViolation(f"output {name!r} is not finite: {text!r}")
        values[name] = v
    return {n: values[n] for n in declared}


def run_external(spec: SimulatorSpec, request: RunRequest) -> RunRecord:
    """Run one request through the external command.

    A nonzero exit yields a failed record.  Spawn problems, timeouts and
    malformed output raise, and batch execution turns them into failed records.
    """
    if spec.kind != "external":
        raise InvalidSpec("run_external needs an external simulator spec")
    argv = render_command(spec.command, request.parameters, request.seed)
    start = time.perf_counter()
    try:
        proc = subprocess.run(
            argv,
            cwd=spec.workdir,
            capture_output=True,
            text=True,
            timeout=spec.timeout,
        )
    except subprocess.TimeoutExpired:
        raise SimulationTimeout(
            f"run {request.run_id} exceeded {spec.timeout}s"
        ) from None
    except OSError as exc:
        raise SpawnFailure(f"run {request.run_id}: cannot launch {argv[0]!r}: {exc}") from exc
    elapsed = time.perf_counter() - start
    if proc.returncode != 0:
        return RunRecord(request, {}, failed_status(f"exit code {proc.returncode}"), elapsed)
    outputs = parse_output(proc.stdout, spec.outputs)
    return RunRecord(request, outputs, "ok", elapsed)
