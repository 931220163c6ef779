"""Report bundles written to disk: results JSON, CSV tables and SVG figures.

Reports are views over the analysis results, which in turn derive entirely
from the persisted runs CSV.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Optional

from absa.config import CampaignConfig
from absa.consistency import ConsistencyResult
from absa.errors import IoFailure
from absa.lhs import LhsResult
from absa.robustness import RobustnessResult, significance_curve
from absa.schemas import SCHEMA_VERSION, validate
from absa.sim_harness.store import fmt
from absa.svg import line_chart, robustness_figure, scatter_chart


def envelope(analysis: str, cfg: CampaignConfig, result: dict) -> dict:
    doc = {
        "schema": f"absa/{analysis}/v{SCHEMA_VERSION}",
        "schema_version": SCHEMA_VERSION,
        "analysis": analysis,
        "master_seed": cfg.master_seed,
        "config_hash": cfg.config_hash(),
        "thresholds": cfg.thresholds.model_dump(),
        "result": result,
    }
    validate(doc)
    return doc


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def write_json(path: Path, doc: dict) -> None:
    _write(path, json.dumps(doc, indent=2, allow_nan=False) + "\n")


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow([fmt(c) if isinstance(c, float) else ("" if c is None else c) for c in row])
    return buf.getvalue()


def read_json(path: Path) -> Optional[dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        return None
    except (OSError, ValueError) as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc


def write_consistency(out: Path, cfg: CampaignConfig, result: ConsistencyResult) -> dict:
    doc = envelope("consistency", cfg, result.to_dict())
    write_json(out / "results.json", doc)

    rows = [["size", "output", "k_prime", "a_hat", "a_scaled", "significance"]]
    for size in result.sizes:
        for o in result.outputs:
            for k, c in enumerate(result.groups[(size, o)].comparisons, start=2):
                rows.append([size, o, k, c.a_hat, c.a_scaled, c.significance.value])
    _write(out / "ameasures.csv", _csv(rows))

    rows = [["size", *result.outputs]]
    for i, size in enumerate(result.sizes):
        rows.append([size, *(result.maxima(o)[i] for o in result.outputs)])
    _write(out / "max_scaled_a.csv", _csv(rows))

    _write(
        out / "max_scaled_a.svg",
        line_chart(
            [str(s) for s in result.sizes],
            {o: result.maxima(o) for o in result.outputs},
            "Maximal scaled A-measure per distribution size",
            "distribution size n",
            "max scaled A",
            guides=[result.threshold],
            ylim=(0.5, 1.0),
        ),
    )
    for size in result.sizes:
        k = len(result.groups[(size, result.outputs[0])].comparisons)
        series = {}
        for o in result.outputs:
            comps = result.groups[(size, o)].comparisons
            series[f"{o} A"] = [c.a_hat for c in comps]
            series[f"{o} scaled"] = [c.a_scaled for c in comps]
        _write(
            out / f"ameasures_n{size}.svg",
            line_chart(
                [str(i) for i in range(2, k + 2)],
                series,
                f"A-measures, distribution size n={size}",
                "compared distribution k'",
                "A-measure",
                guides=[cfg.thresholds.small],
                ylim=(0.0, 1.0),
            ),
        )
    return doc


def write_robustness(out: Path, cfg: CampaignConfig, result: RobustnessResult) -> dict:
    doc = envelope("robustness", cfg, result.to_dict())
    write_json(out / "results.json", doc)
    t = cfg.thresholds
    for p in result.parameters:
        header = ["value"]
        for o in result.outputs:
            header += [f"{o}_a_hat", f"{o}_a_scaled", f"{o}_class"]
        rows = [header]
        curves = {o: significance_curve(result, p.name, o) for o in result.outputs}
        for i, v in enumerate(p.values):
            row = [v]
            for o in result.outputs:
                _, a_hat, a_scaled, sig = curves[o][i]
                row += [a_hat, a_scaled, sig.value]
            rows.append(row)
        _write(out / f"{p.name}.csv", _csv(rows))
        _write(
            out / f"{p.name}.svg",
            robustness_figure(
                p.name,
                list(p.values),
                {o: [pt[1] for pt in curves[o]] for o in result.outputs},
                {o: [result.entry(p.name, v).boxplots[o] for v in p.values] for o in result.outputs},
                guides=(t.small, t.medium, t.large),
            ),
        )
    return doc


def write_lhs(out: Path, cfg: CampaignConfig, result: LhsResult) -> dict:
    doc = envelope("lhs", cfg, result.to_dict())
    write_json(out / "results.json", doc)
    names = [p.name for p in result.parameters]
    rows = [["point", *names]]
    rows += [[j, *(pt[n] for n in names)] for j, pt in enumerate(result.points)]
    _write(out / "design.csv", _csv(rows))
    rows = [["point", *names, *result.outputs]]
    for j, (pt, med) in enumerate(zip(result.points, result.medians)):
        rows.append([j, *(pt[n] for n in names), *(med[o] for o in result.outputs)])
    _write(out / "medians.csv", _csv(rows))
    rows = [["parameter", "output", "r", "descriptor"]]
    for n in names:
        for o in result.outputs:
            rows.append([n, o, result.correlations[(n, o)], result.descriptors[(n, o)]])
    _write(out / "correlations.csv", _csv(rows))
    for n in names:
        for o in result.outputs:
            xs, ys = result.scatter(n, o)
            r = result.correlations[(n, o)]
            title = f"median {o} vs {n}" + ("" if r is None else f" (r = {r:.2f})")
            _write(out / f"scatter_{n}_{o}.svg", scatter_chart(xs, ys, title, n, f"median {o}"))
    return doc
