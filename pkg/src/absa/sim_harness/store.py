"""Campaign CSV persistence.

Layout: ``run_id,seed,<param names...>,<output names...>,status``, UTF-8 with
LF line endings, decimals written with 17 significant digits so every float
round-trips exactly.  Failed runs leave their output cells empty.
"""

from __future__ import annotations

import io
import math
import os
from pathlib import Path
from typing import Iterable, Optional, Sequence

from absa.errors import CorruptRecord, IoFailure
from absa.sim_harness.batch import execute_batch
from absa.sim_harness.types import OK, RunRecord, RunRequest, SimulatorSpec


def fmt(value: float) -> str:
    return format(float(value), ".17g")


def header(param_names: Sequence[str], output_names: Sequence[str]) -> list[str]:
    return ["run_id", "seed", *param_names, *output_names, "status"]


def format_records(
    records: Iterable[RunRecord],
    param_names: Sequence[str],
    output_names: Sequence[str],
) -> str:
    buf = io.StringIO()
    buf.write(",".join(header(param_names, output_names)) + "\n")
    for rec in records:
        buf.write(_format_row(rec, param_names, output_names))
    return buf.getvalue()


def _format_row(rec: RunRecord, param_names, output_names) -> str:
    req = rec.request
    cells = [str(req.run_id), str(req.seed)]
    cells += [fmt(req.parameters[p]) for p in param_names]
    cells += [fmt(rec.outputs[o]) if o in rec.outputs else "" for o in output_names]
    cells.append(rec.status)
    return ",".join(cells) + "\n"


def save_records(
    path: os.PathLike,
    records: Iterable[RunRecord],
    param_names: Sequence[str],
    output_names: Sequence[str],
) -> None:
    path = Path(path)
    text = format_records(sorted(records, key=lambda r: r.run_id), param_names, output_names)
    tmp = path.with_suffix(path.suffix + ".tmp")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def load_records(
    path: os.PathLike,
    param_names: Optional[Sequence[str]] = None,
    output_names: Optional[Sequence[str]] = None,
) -> tuple[list[RunRecord], list[str], list[str]]:
    """Read a campaign CSV.  Returns ``(records, param_names, output_names)``.

    Without explicit names, columns between ``seed`` and ``status`` are split
    using ``output_names`` if given, else the header must be resolvable via
    ``param_names``.
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    if not text:
        raise CorruptRecord("empty campaign file", line=1)
    lines = text.split("\n")
    if lines[-1] != "":
        raise CorruptRecord("truncated record (no line terminator)", line=len(lines))
    lines.pop()
    cols = lines[0].split(",")
    if len(cols) < 3 or cols[:2] != ["run_id", "seed"] or cols[-1] != "status":
        raise CorruptRecord(f"unexpected header {lines[0]!r}", line=1)
    middle = cols[2:-1]
    if param_names is None and output_names is None:
        raise ValueError("need param_names or output_names to split the header")
    if param_names is None:
        param_names = middle[: len(middle) - len(output_names)]
    if output_names is None:
        output_names = middle[len(param_names):]
    param_names, output_names = list(param_names), list(output_names)
    if middle != param_names + output_names:
        raise CorruptRecord(f"header columns {middle} do not match campaign", line=1)

    records = []
    seen = set()
    np_, no = len(param_names), len(output_names)
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(cols):
            raise CorruptRecord(f"expected {len(cols)} fields, got {len(cells)}", line=lineno)
        try:
            run_id = int(cells[0])
            seed = int(cells[1])
            params = {p: float(v) for p, v in zip(param_names, cells[2 : 2 + np_])}
            raw_out = cells[2 + np_ : 2 + np_ + no]
            status = cells[-1]
            outputs = {o: float(v) for o, v in zip(output_names, raw_out) if v != ""}
        except ValueError as exc:
            raise CorruptRecord(f"unparsable field: {exc}", line=lineno) from None
        if run_id in seen:
            raise CorruptRecord(f"duplicate run_id {run_id}", line=lineno)
        seen.add(run_id)
        if status == OK:
            if len(outputs) != no or not all(math.isfinite(v) for v in outputs.values()):
                raise CorruptRecord("ok record with missing or non-finite outputs", line=lineno)
        elif not status.startswith("failed:"):
            raise CorruptRecord(f"unknown status {status!r}", line=lineno)
        records.append(RunRecord(RunRequest(run_id, params, seed), outputs, status))
    return records, param_names, output_names


class CampaignStore:
    """Runs CSV for one campaign, with resume support.

    Records are appended by a single writer while a batch executes, and the
    file is rewritten in ``run_id`` order when the batch completes.
    """

    def __init__(self, path: os.PathLike, param_names: Sequence[str], output_names: Sequence[str]):
        self.path = Path(path)
        self.param_names = list(param_names)
        self.output_names = list(output_names)

    def load(self) -> dict[int, RunRecord]:
        if not self.path.exists():
            return {}
        records, _, _ = load_records(self.path, self.param_names, self.output_names)
        return {r.run_id: r for r in records}

    def save(self, records: Iterable[RunRecord]) -> None:
        save_records(self.path, records, self.param_names, self.output_names)

    def run(
        self, sim: SimulatorSpec, requests: Sequence[RunRequest], parallelism: int = 1
    ) -> tuple[list[RunRecord], int]:
        """Execute requests not already persisted as ok; returns ``(records, executed)``."""
        existing = self.load()
        todo = []
        for req in requests:
            prev = existing.get(req.run_id)
            if prev is not None and prev.ok:
                if prev.request.seed != req.seed:
                    raise CorruptRecord(
                        f"run {req.run_id} was persisted with seed {prev.request.seed}, "
                        f"campaign now expects {req.seed}"
                    )
            else:
                todo.append(req)

        # failed rows are dropped here and re-executed below
        merged = {i: r for i, r in existing.items() if r.ok}
        if todo:
            self.save(merged.values())
            try:
                fh = open(self.path, "a", encoding="utf-8", newline="\n")
            except OSError as exc:
                raise IoFailure(f"cannot append to {self.path}: {exc}") from exc

            def append(rec: RunRecord):
                # invoked from the calling thread only: the single writer
                fh.write(_format_row(rec, self.param_names, self.output_names))
                fh.flush()
                merged[rec.run_id] = rec

            try:
                execute_batch(sim, todo, parallelism, on_record=append)
            finally:
                fh.close()
        self.save(merged.values())
        wanted = {r.run_id for r in requests}
        out = sorted((merged[i] for i in wanted), key=lambda r: r.run_id)
        return out, len(todo)
