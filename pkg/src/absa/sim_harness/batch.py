from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from typing import Callable, Iterable, Optional

from absa.errors import (
    InvalidParams,
    InvalidSpec,
    ProtocolViolation,
    SimulationTimeout,
    SpawnFailure,
)
from absa.sim_harness.external import run_external
from absa.sim_harness.toy import run_toy
from absa.sim_harness.types import RunRecord, RunRequest, SimulatorSpec, failed_status

log = logging.getLogger(__name__)

_FAILURE_TAGS = (
    (SimulationTimeout, "timeout"),
    (ProtocolViolation, "protocol_violation"),
    (SpawnFailure, "spawn_failure"),
    (InvalidParams, "invalid_params"),
    (InvalidSpec, "invalid_spec"),
)


def run_one(sim: SimulatorSpec, request: RunRequest) -> RunRecord:
    """Execute a single request, mapping per-run errors onto a failed record."""
    start = time.perf_counter()
    try:
        if sim.kind == "toy":
            outputs, elapsed = run_toy(request.parameters, request.seed)
            return RunRecord(request, {k: outputs[k] for k in sim.outputs}, "ok", elapsed)
        return run_external(sim, request)
    except tuple(t for t, _ in _FAILURE_TAGS) as exc:
        tag = next(tag for t, tag in _FAILURE_TAGS if isinstance(exc, t))
        return RunRecord(
            request, {}, failed_status(f"{tag}: {exc}"), time.perf_counter() - start
        )


def _run_chunk(sim: SimulatorSpec, requests: list[RunRequest]) -> list[RunRecord]:
    return [run_one(sim, r) for r in requests]


def execute_batch(
    sim: SimulatorSpec,
    requests: Iterable[RunRequest],
    parallelism: int = 1,
    on_record: Optional[Callable[[RunRecord], None]] = None,
) -> list[RunRecord]:
    """Run every request and return records in ``run_id`` order.

    Seeds travel with the requests, so results do not depend on scheduling.
    The toy model fans out over processes and external commands over threads.
    ``on_record`` is called from the calling thread as records arrive.
    """
    if parallelism < 1:
        raise InvalidSpec("parallelism must be >= 1")
    requests = sorted(requests, key=lambda r: r.run_id)
    ids = [r.run_id for r in requests]
    if len(set(ids)) != len(ids):
        raise InvalidSpec("run ids must be unique within a batch")
    records: list[RunRecord] = []

    def emit(rec: RunRecord):
        records.append(rec)
        if on_record is not None:
            on_record(rec)

    if parallelism == 1 or len(requests) <= 1:
        for r in requests:
            emit(run_one(sim, r))
    elif sim.kind == "toy":
        chunk = max(1, min(64, len(requests) // (parallelism * 4) or 1))
        chunks = [requests[i : i + chunk] for i in range(0, len(requests), chunk)]
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            for batch in pool.map(_run_chunk, [sim] * len(chunks), chunks):
                for rec in batch:
                    emit(rec)
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            for rec in pool.map(lambda r: run_one(sim, r), requests):
                emit(rec)

    failed = [r.run_id for r in records if not r.ok]
    if failed:
        log.warning("%d of %d runs failed (first: %d)", len(failed), len(records), failed[0])
    return sorted(records, key=lambda r: r.run_id)
