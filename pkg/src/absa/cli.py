"""Command-line front end.

Subcommands: ``ameasure``, ``consistency``, ``robustness``, ``lhs``, ``demo``.
Exit codes: 0 success, 1 simulation failure, 2 configuration or input error,
3 missing prerequisite n* (run ``consistency`` first or pass ``--n-star``).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from absa import consistency, lhs, robustness
from absa.config import CampaignConfig, demo_config, load_config
from absa.errors import (
    AbsaError,
    ConfigError,
    CorruptRecord,
    IoFailure,
    MissingPrerequisite,
    SimulationFailure,
)
from absa.report import (
    envelope,
    read_json,
    write_consistency,
    write_json,
    write_lhs,
    write_robustness,
)
from absa.sim_harness import CampaignStore
from absa.stats_core import a_measure

log = logging.getLogger("absa")

EXIT_OK, EXIT_SIM, EXIT_CONFIG, EXIT_PREREQ = 0, 1, 2, 3


def read_column(path: str) -> list[float]:
    """Parse a one-column CSV of finite reals; blank lines are skipped."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    values = []
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            v = float(text)
        except ValueError:
            raise ConfigError(f"{path}, line {lineno}: not a number: {text!r}") from None
        if not math.isfinite(v):
            raise ConfigError(f"{path}, line {lineno}: non-finite value {text!r}")
        values.append(v)
    if not values:
        raise ConfigError(f"{path}: no samples")
    return values


def _store(out: Path, cfg: CampaignConfig) -> CampaignStore:
    return CampaignStore(out / "runs.csv", cfg.simulator_spec().parameters, cfg.output_names())


def _campaign_params(cfg: CampaignConfig) -> list:
    specs = cfg.parameter_specs()
    if not specs:
        raise ConfigError("config lists no parameters")
    return specs


def run_consistency_cmd(cfg: CampaignConfig, out: Path, parallelism: int) -> dict:
    d = out / "consistency"
    result = consistency.run_consistency(
        cfg.simulator_spec(),
        cfg.consistency_config(),
        calibrated=cfg.calibrated_point(),
        parallelism=parallelism,
        store=_store(d, cfg),
        thresholds=cfg.threshold_spec(),
    )
    doc = write_consistency(d, cfg, result)
    if result.n_star_overall is None:
        log.warning(
            "n* not reached on ladder %s; extend the ladder with larger sizes",
            list(result.sizes),
        )
    return doc


def resolve_n_star(cfg: CampaignConfig, out: Path, override: Optional[int]) -> int:
    if override is not None:
        return override
    if cfg.robustness.n_star is not None:
        return cfg.robustness.n_star
    doc = read_json(out / "consistency" / "results.json")
    if doc is None:
        raise MissingPrerequisite(
            f"no consistency result in {out}; run 'consistency' first or pass --n-star"
        )
    n_star = doc["result"]["n_star_overall"]
    if n_star is None:
        raise MissingPrerequisite(
            "consistency analysis did not reach n*; extend the ladder or pass --n-star"
        )
    return int(n_star)


def run_robustness_cmd(cfg: CampaignConfig, out: Path, parallelism: int, n_star: int) -> dict:
    d = out / "robustness"
    params = _campaign_params(cfg)
    result = robustness.run_robustness(
        cfg.simulator_spec(),
        params,
        n_star,
        cfg.output_names(),
        cfg.master_seed,
        parallelism=parallelism,
        store=_store(d, cfg),
        reuse_calibrated=cfg.robustness.reuse_calibrated,
        thresholds=cfg.threshold_spec(),
        base_point=cfg.calibrated_point(),
    )
    return write_robustness(d, cfg, result)


def run_lhs_cmd(cfg: CampaignConfig, out: Path, parallelism: int, n_star: int) -> dict:
    if cfg.lhs.N is None:
        raise ConfigError("lhs.N must be set explicitly (e.g. 2q, 4q/3, or larger)")
    d = out / "lhs"
    result = lhs.run_lhs(
        cfg.simulator_spec(),
        _campaign_params(cfg),
        cfg.lhs.N,
        n_star,
        cfg.output_names(),
        cfg.master_seed,
        criterion=cfg.lhs.criterion,
        candidates=cfg.lhs.candidates,
        parallelism=parallelism,
        store=_store(d, cfg),
        scheme=cfg.correlation_scheme,
        base_point=cfg.calibrated_point(),
    )
    return write_lhs(d, cfg, result)


# worked-example signs: r(pi_ds, X1) > 0, r(pi_ds, X2) < 0, r(ec50, X1) < 0, r(ec50, X2) > 0
SIGN_CHECKS = (
    ("pi_ds", "X1", 1),
    ("pi_ds", "X2", -1),
    ("ec50", "X1", -1),
    ("ec50", "X2", 1),
)


def sign_checks(correlations: dict) -> dict:
    """Evaluate the worked-example direction checks on a correlation table."""
    checks = {}
    for p, o, sign in SIGN_CHECKS:
        r = correlations.get((p, o))
        checks[f"r({p},{o}){'>' if sign > 0 else '<'}0"] = r is not None and r * sign > 0
    for o in ("X1", "X2"):
        rg, re_ = correlations.get(("gamma", o)), correlations.get(("ec50", o))
        checks[f"|r(gamma,{o})|<|r(ec50,{o})|"] = (
            rg is not None and re_ is not None and abs(rg) < abs(re_)
        )
    return checks


def run_demo(out: Path, master_seed: int, parallelism: int, n_star_override: Optional[int] = None) -> dict:
    cfg = demo_config(master_seed)
    cons = run_consistency_cmd(cfg, out, parallelism)
    found = cons["result"]["n_star_overall"]
    if n_star_override is not None:
        n_star = n_star_override
    elif found is not None:
        n_star = found
    else:
        # cap at the top of the ladder so the demo always completes
        n_star = max(cfg.consistency.sizes)
    rob = run_robustness_cmd(cfg, out, parallelism, n_star)
    lhs_doc = run_lhs_cmd(cfg, out, parallelism, n_star)
    table = {(e["parameter"], e["output"]): e["r"] for e in lhs_doc["result"]["correlations"]}
    summary = {
        "n_star_found": found,
        "n_star_used": n_star,
        "consistency_max_scaled_a": cons["result"]["max_scaled_a"],
        "robustness_total_distributions": rob["result"]["total_distributions"],
        "correlations": lhs_doc["result"]["correlations"],
        "sign_checks": sign_checks(table),
    }
    doc = envelope("demo", cfg, summary)
    write_json(out / "report.json", doc)
    (out / "report.md").write_text(_demo_markdown(summary), encoding="utf-8", newline="\n")
    return doc


def _demo_markdown(summary: dict) -> str:
    lines = ["# Toy-model sensitivity report", ""]
    found = summary["n_star_found"]
    lines.append(f"- n* found: {found if found is not None else 'not reached on the ladder'}")
    lines.append(f"- n* used: {summary['n_star_used']}")
    lines.append(f"- robustness distributions: {summary['robustness_total_distributions']}")
    lines += ["", "| parameter | output | r | descriptor |", "|---|---|---|---|"]
    for e in summary["correlations"]:
        r = "n/a" if e["r"] is None else f"{e['r']:.3f}"
        lines.append(f"| {e['parameter']} | {e['output']} | {r} | {e['descriptor']} |")
    lines += ["", "Sign checks:", ""]
    for name, ok in summary["sign_checks"].items():
        lines.append(f"- {name}: {'pass' if ok else 'FAIL'}")
    return "\n".join(lines) + "\n"


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="absa", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ameasure", help="A-measure of two one-column sample files")
    p.add_argument("file_b")
    p.add_argument("file_c")
    p.add_argument("--config", help="take significance thresholds from a campaign config")

    def common(sp, needs_config=True):
        if needs_config:
            sp.add_argument("--config", required=True, help="campaign config JSON")
        sp.add_argument("--out", help="output directory (default: $ABSA_OUT)")
        sp.add_argument("--master-seed", type=int, help="override the config's master seed")
        sp.add_argument("--parallelism", type=int, help="concurrent runs")

    common(sub.add_parser("consistency", help="find n* by consistency analysis"))
    for name, text in (("robustness", "one-at-a-time robustness analysis"), ("lhs", "Latin hypercube analysis")):
        sp = sub.add_parser(name, help=text)
        common(sp)
        sp.add_argument("--n-star", type=int, help="use this n* instead of the consistency result")
    sp = sub.add_parser("demo", help="full pipeline on the toy model at desk scale")
    common(sp, needs_config=False)
    sp.add_argument("--n-star", type=int)
    return parser


def _out_dir(args, cfg: Optional[CampaignConfig], default: str) -> Path:
    if args.out:
        return Path(args.out)
    if os.environ.get("ABSA_OUT"):
        return Path(os.environ["ABSA_OUT"])
    if cfg is not None and cfg.output_dir:
        return Path(cfg.output_dir)
    return Path(default)


def _apply_overrides(cfg: CampaignConfig, args) -> CampaignConfig:
    updates = {}
    if args.master_seed is not None:
        updates["master_seed"] = args.master_seed
    if args.parallelism is not None:
        updates["parallelism"] = args.parallelism
    if not updates:
        return cfg
    try:
        return CampaignConfig.model_validate({**cfg.model_dump(), **updates})
    except Exception as exc:
        raise ConfigError(str(exc)) from None


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _dispatch(args)
    except SimulationFailure as exc:
        print(f"error: simulation failure: {exc}", file=sys.stderr)
        return EXIT_SIM
    except MissingPrerequisite as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PREREQ
    except (ConfigError, CorruptRecord, IoFailure, AbsaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def _dispatch(args) -> int:
    if args.command == "ameasure":
        thresholds = load_config(args.config).threshold_spec() if args.config else None
        b = read_column(args.file_b)
        c = read_column(args.file_c)
        res = a_measure(b, c) if thresholds is None else a_measure(b, c, thresholds)
        print(json.dumps({
            "a_hat": res.a_hat,
            "a_scaled": res.a_scaled,
            "significance": res.significance.value,
            "m": res.m,
            "n": res.n,
        }))
        return EXIT_OK

    if args.parallelism is not None and args.parallelism < 1:
        raise ConfigError("--parallelism must be >= 1")
    if getattr(args, "n_star", None) is not None and args.n_star < 1:
        raise ConfigError("--n-star must be >= 1")

    if args.command == "demo":
        seed = 0 if args.master_seed is None else args.master_seed
        out = _out_dir(args, None, "absa-demo")
        doc = run_demo(out, seed, args.parallelism or 1, args.n_star)
        res = doc["result"]
        print(json.dumps({
            "out": str(out),
            "n_star_found": res["n_star_found"],
            "n_star_used": res["n_star_used"],
            "sign_checks": res["sign_checks"],
        }, indent=2))
        return EXIT_OK

    cfg = _apply_overrides(load_config(args.config), args)
    out = _out_dir(args, cfg, "absa-out")
    parallelism = cfg.parallelism
    if args.command == "consistency":
        doc = run_consistency_cmd(cfg, out, parallelism)
        print(json.dumps({"out": str(out), "n_star": doc["result"]["n_star_overall"]}))
        return EXIT_OK
    n_star = resolve_n_star(cfg, out, args.n_star)
    if args.command == "robustness":
        run_robustness_cmd(cfg, out, parallelism, n_star)
    else:
        run_lhs_cmd(cfg, out, parallelism, n_star)
    print(json.dumps({"out": str(out), "n_star": n_star}))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
