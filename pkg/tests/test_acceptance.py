"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Every test records a PASS/FAIL line that is echoed in the session summary.
"""

import math
import time
from fractions import Fraction

import numpy as np

from absa.cli import run_consistency_cmd, run_demo, run_lhs_cmd, run_robustness_cmd
from absa.config import CampaignConfig, demo_config
from absa.consistency import ConsistencyConfig, n_star_from_maxima, plan_runs, run_consistency
from absa.lhs import candidate_designs, classify_correlation, design, min_pairwise_distance
from absa.parameters import ParameterSpec
from absa.robustness import analyze_records, plan_robustness, run_robustness, total_distributions
from absa.sim_harness import RunRequest, SimulatorSpec, execute_batch
from absa.stats_core import a_measure, classify_significance, pearson_r

from conftest import record_criterion, stub_records


def test_criterion_01_a_measure_oracle():
    start = time.perf_counter()
    rng = np.random.default_rng(20240601)
    mismatches = complement_failures = 0
    for _ in range(10_000):
        m, n = rng.integers(1, 51, size=2)
        pool = np.concatenate([rng.integers(-3, 4, 6).astype(float), np.round(rng.normal(size=4), 2)])
        b = rng.choice(pool, m)
        c = rng.choice(pool, n)
        # force at least one tie
        c[0] = b[rng.integers(m)]
        # exhaustive pair counting over all m*n pairs
        gt = int((b[:, None] > c[None, :]).sum())
        eq = int((b[:, None] == c[None, :]).sum())
        oracle = float(Fraction(2 * gt + eq, 2 * int(m) * int(n)))
        ab = a_measure(b, c).a_hat
        mismatches += ab != oracle
        complement_failures += ab + a_measure(c, b).a_hat != 1.0
    secs = time.perf_counter() - start
    ok = mismatches == 0 and complement_failures == 0 and secs < 10
    record_criterion(1, ok, "A-measure equals pair-count oracle",
                     f"{mismatches} mismatches, {complement_failures} complement failures", secs)
    assert ok


def test_criterion_02_significance_boundaries():
    start = time.perf_counter()
    probes = [0.50, 0.56, 0.5600001, 0.64, 0.6400001, 0.71]
    expected = ["Small", "Small", "Medium", "Medium", "Large", "Large"]
    got = [classify_significance(p).value for p in probes]
    ok = got == expected
    record_criterion(2, ok, "significance thresholds", f"got {got}", time.perf_counter() - start)
    assert ok


def test_criterion_03_consistency_plan_math():
    start = time.perf_counter()
    runs = plan_runs(ConsistencyConfig())
    n_star, _ = n_star_from_maxima(
        (1, 5, 50, 100, 300),
        {"X1": (1, 0.92, 0.61, 0.55, 0.54), "X2": (1, 0.84, 0.59, 0.56, 0.54)},
        0.56,
    )
    ok = runs == 9120 and n_star == 100
    record_criterion(3, ok, "consistency plan and n*", f"runs={runs}, n*={n_star}", time.perf_counter() - start)
    assert ok


def test_criterion_04_consistency_on_toy_model():
    start = time.perf_counter()
    sizes = (1, 5, 20, 50)
    maxima = {o: [] for o in ("X1", "X2")}
    n1_all_one = 0
    for seed in range(20):
        res = run_consistency(SimulatorSpec(), ConsistencyConfig(sizes=sizes, group_count=10, master_seed=seed))
        n1_all_one += all(res.maxima(o)[0] == 1.0 for o in maxima)
        for o in maxima:
            maxima[o].append(res.maxima(o))
    medians = {o: np.median(np.array(v), axis=0).tolist() for o, v in maxima.items()}
    decreasing = all(all(b < a for a, b in zip(m, m[1:])) for m in medians.values())
    secs = time.perf_counter() - start
    ok = n1_all_one >= 18 and decreasing and secs < 180
    detail = f"n=1 max is 1.0 in {n1_all_one}/20 seeds; median maxima " + ", ".join(
        f"{o}={[round(x, 3) for x in m]}" for o, m in medians.items()
    )
    record_criterion(4, ok, "consistency behaviour on toy model", detail, secs)
    assert ok


def test_criterion_05_robustness():
    start = time.perf_counter()
    # calibrated-vs-calibrated on the toy model, every parameter and output
    cfg = demo_config(0)
    params = cfg.parameter_specs()
    res = run_robustness(SimulatorSpec(), params, 20, ("X1", "X2"), master_seed=0)
    calibrated_half = all(
        res.entry(p.name, p.calibrated).a_measures[o].a_hat == 0.5 for p in params for o in ("X1", "X2")
    )

    # parameter-ignoring stub at n* = 100; each trial is an independent campaign
    stub_param = [ParameterSpec("ignored", 0.0, 1.0, 0.0, (0.0, 1.0))]
    trials = []
    for trial in range(100):
        plan = plan_robustness(stub_param, 100, master_seed=trial)
        recs = stub_records(plan.requests, ("Y",), lambda rng, p: [rng.normal()])
        stub = analyze_records(recs, plan, stub_param, ("Y",), 100)
        trials.append(stub.entry("ignored", 1.0).a_measures["Y"].a_scaled)
    small = sum(a <= 0.56 for a in trials)

    widths = [ParameterSpec(f"p{i}", 0, 10, 0, tuple(range(k))) for i, k in enumerate((9, 7, 9))]
    p_total = total_distributions(widths)

    secs = time.perf_counter() - start
    ok = calibrated_half and small >= 95 and p_total == 25
    detail = f"calibrated Â=0.5: {calibrated_half}; stub scaled Â<=0.56 in {small}/100 trials; P(9,7,9)={p_total}"
    record_criterion(5, ok, "robustness", detail, secs)
    assert calibrated_half
    assert p_total == 25
    assert small >= 95


def test_criterion_06_lhs_design_validity():
    start = time.perf_counter()
    latin_failures = 0
    dominance_failures = 0
    for q in range(1, 21):
        for n in (1, 2, 10, 100, 1000):
            d = design(q, n, seed=1000 * q + n, criterion="maximin", candidates=5)
            target = np.arange(1, n + 1)
            for i in range(q):
                if not np.array_equal(np.sort(d.interval_matrix[:, i]), target):
                    latin_failures += 1
            if n >= 2:
                pool = candidate_designs(q, n, d.seed, 5)
                dists = [min_pairwise_distance(u) for u, _ in pool]
                if any(d.min_distance < x for x in dists):
                    dominance_failures += 1
    secs = time.perf_counter() - start
    ok = latin_failures == 0 and dominance_failures == 0 and secs < 30
    record_criterion(6, ok, "LHS design validity",
                     f"{latin_failures} non-permutation columns, {dominance_failures} dominance failures", secs)
    assert ok


def _two_pass(x, y):
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = math.fsum((a - mx) ** 2 for a in x)
    syy = math.fsum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def test_criterion_07_pearson():
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 200))
        x = rng.normal(size=n) * rng.uniform(0.1, 100)
        y = 0.3 * x + rng.normal(size=n) * rng.uniform(0.1, 100)
        worst = max(worst, abs(pearson_r(x, y) - _two_pass(x.tolist(), y.tolist())))
    xs = [float(v) for v in range(-7, 12)]
    affine = [pearson_r(xs, [3 * v + 2 for v in xs]), pearson_r(xs, [-5 * v + 1 for v in xs]),
              pearson_r([1, 2, 3], [2, 4, 6]), pearson_r([1, 2, 3], [3, 2, 1])]
    descriptors = (classify_correlation(0.84, "mukaka"), classify_correlation(0.05, "schober"))
    secs = time.perf_counter() - start
    ok = worst <= 1e-12 and affine == [1.0, -1.0, 1.0, -1.0] and descriptors == ("strong", "negligible")
    record_criterion(7, ok, "Pearson correlation", f"max |r - oracle| = {worst:.2e}; affine {affine}; {descriptors}", secs)
    assert ok


def test_criterion_08_worked_example_signs(tmp_path):
    start = time.perf_counter()
    passing = []
    failing = {}
    for seed in range(10):
        doc = run_demo(tmp_path / f"seed{seed}", seed, parallelism=1)
        res = doc["result"]
        assert res["n_star_used"] <= 50
        checks = res["sign_checks"]
        if all(checks.values()):
            passing.append(seed)
        else:
            failing[seed] = [k for k, v in checks.items() if not v]
    secs = time.perf_counter() - start
    ok = len(passing) >= 9 and secs < 300
    record_criterion(8, ok, "worked-example correlation signs",
                     f"{len(passing)}/10 seeds pass; failures {failing}", secs)
    assert ok


def _campaign_files(root):
    return {
        p.relative_to(root).as_posix(): p.read_bytes()
        for p in sorted(root.rglob("*"))
        if p.is_file() and p.name in ("runs.csv", "results.json")
    }


def test_criterion_09_determinism(tmp_path):
    start = time.perf_counter()
    doc = demo_config(5).model_dump()
    doc["consistency"].update(sizes=[1, 5, 20], group_count=5)
    cfg = CampaignConfig.model_validate(doc)
    bundles = []
    for label, par in (("a1", 1), ("a8", 8), ("b1", 1), ("b8", 8)):
        out = tmp_path / label
        run_consistency_cmd(cfg, out, par)
        run_robustness_cmd(cfg, out, par, 10)
        run_lhs_cmd(cfg, out, par, 10)
        bundles.append(_campaign_files(out))
    identical = all(b == bundles[0] for b in bundles[1:]) and len(bundles[0]) == 6
    secs = time.perf_counter() - start
    record_criterion(9, identical, "determinism across reruns and parallelism",
                     f"{len(bundles[0])} files compared over 4 runs", secs)
    assert identical


def test_criterion_10_external_protocol(fake_sim):
    start = time.perf_counter()
    sim = fake_sim(timeout=2.0)
    modes = [0, 1, 2, 0, 2, 1, 0]
    reqs = [RunRequest(i, {"mode": m, "x": 0.5 * i}, 10 + i) for i, m in enumerate(modes)]
    recs = execute_batch(sim, reqs, parallelism=2)
    kinds = []
    for r in recs:
        if r.ok:
            kinds.append("ok")
        elif r.reason.startswith("exit code"):
            kinds.append("exit")
        elif r.reason.startswith("protocol"):
            kinds.append("malformed")
        else:
            kinds.append(r.status)
    expected = ["ok" if m == 0 else "exit" if m == 1 else "malformed" for m in modes]
    values_ok = all(r.outputs == {"X1": 1.0 * r.run_id, "X2": float(10 + r.run_id)} for r in recs if r.ok)
    ok = kinds == expected and values_ok and len(recs) == len(reqs)
    record_criterion(10, ok, "external protocol conformance", f"statuses {kinds}", time.perf_counter() - start)
    assert ok
