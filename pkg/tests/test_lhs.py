import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from absa.errors import DimensionMismatch, IndexOutOfRange, InvalidDimensions, InvalidSpec, OutOfRange
from absa.lhs import (
    analyze_records,
    candidate_designs,
    classify_correlation,
    design,
    interval_bounds,
    min_pairwise_distance,
    plan_lhs,
    run_lhs,
    scale_design,
)
from absa.parameters import ParameterSpec
from absa.sim_harness import SimulatorSpec

from conftest import stub_records


def latin(matrix):
    n = matrix.shape[0]
    return all(sorted(matrix[:, i].tolist()) == list(range(1, n + 1)) for i in range(matrix.shape[1]))


def test_small_design_is_latin():
    d = design(2, 4, seed=1)
    assert d.interval_matrix.shape == (4, 2)
    assert latin(d.interval_matrix)


def test_single_point_design():
    d = design(3, 1, seed=5)
    assert d.unit_matrix.shape == (1, 3)
    assert ((0 <= d.unit_matrix) & (d.unit_matrix < 1)).all()
    assert math.isinf(d.min_distance)


def test_unit_values_inside_their_intervals():
    d = design(4, 37, seed=3)
    low = (d.interval_matrix - 1) / 37
    high = d.interval_matrix / 37
    assert ((d.unit_matrix >= low) & (d.unit_matrix < high)).all()


@pytest.mark.parametrize("args", [(0, 5, 1), (2, 0, 1), (2, 5, 0)])
def test_design_rejects_bad_dimensions(args):
    q, n, cand = args
    with pytest.raises(InvalidDimensions):
        design(q, n, seed=0, candidates=cand)
    with pytest.raises(InvalidDimensions):
        design(2, 2, seed=0, criterion="lloyd")


def test_design_reproducible_and_seed_sensitive():
    assert design(3, 20, 42) == design(3, 20, 42)
    assert design(3, 20, 42) != design(3, 20, 43)


def test_maximin_dominates_regenerated_candidates():
    d = design(2, 100, seed=8, criterion="maximin", candidates=5)
    dists = [min_pairwise_distance(u) for u, _ in candidate_designs(2, 100, 8, 5)]
    assert d.min_distance == max(dists)
    assert d.min_distance >= min(dists)
    assert all(d.min_distance >= x for x in dists)


def test_none_criterion_is_first_candidate():
    d = design(3, 10, seed=2, criterion="none")
    unit, intervals = candidate_designs(3, 10, 2, 1)[0]
    assert np.array_equal(d.unit_matrix, unit)
    assert np.array_equal(d.interval_matrix, intervals)


def test_min_pairwise_distance_matches_brute_force():
    pts = np.random.default_rng(1).random((12, 3))
    brute = min(
        math.dist(pts[i], pts[j]) for i in range(12) for j in range(i + 1, 12)
    )
    assert min_pairwise_distance(pts) == pytest.approx(brute, rel=1e-15)


def test_interval_bounds():
    ec50 = ParameterSpec("ec50", 0.25, 1.75, 1.0)
    low, high = interval_bounds(ec50, 1, 100)
    assert low == 0.25
    assert high == pytest.approx(0.265, abs=1e-15)
    assert interval_bounds(ParameterSpec("a", 0, 1, 0.5), 1, 1) == (0, 1)
    assert interval_bounds(ParameterSpec("a", 0, 10, 5), 10, 10) == (9, 10)
    for r in (0, 11):
        with pytest.raises(IndexOutOfRange):
            interval_bounds(ParameterSpec("a", 0, 10, 5), r, 10)


class _Fixed:
    """Minimal design stand-in for checking the affine map by hand."""

    def __init__(self, unit, n):
        self.unit_matrix = np.array(unit, dtype=float)
        self.n, self.q = self.unit_matrix.shape
        self.interval_matrix = np.floor(self.unit_matrix * n).astype(int) + 1


def test_scale_design_affine_examples():
    pts = scale_design(_Fixed([[0.0, 0.5]], 1), [ParameterSpec("a", 2, 4, 3), ParameterSpec("b", 0, 10, 5)])
    assert pts == [{"a": 2.0, "b": 5.0}]
    with pytest.raises(DimensionMismatch):
        scale_design(design(2, 3, 0), [ParameterSpec("a", 0, 1, 0.5)])


bounds = st.tuples(st.floats(-1e3, 1e3), st.floats(1e-6, 1e3)).map(lambda t: (t[0], t[0] + t[1]))


@settings(max_examples=60, deadline=None)
@given(st.lists(bounds, min_size=1, max_size=5), st.integers(1, 60), st.integers(0, 2**32))
def test_scaled_points_respect_interval_bounds(ranges, n, seed):
    params = [ParameterSpec(f"p{i}", lo, hi, lo) for i, (lo, hi) in enumerate(ranges)]
    d = design(len(params), n, seed, candidates=2)
    pts = scale_design(d, params)
    for j, pt in enumerate(pts):
        for i, p in enumerate(params):
            low, high = interval_bounds(p, int(d.interval_matrix[j, i]), n)
            assert low <= pt[p.name] <= high
            assert p.min <= pt[p.name] <= p.max


@pytest.mark.parametrize(
    "r, scheme, expected",
    [
        (0.84, "mukaka", "strong"),
        (-0.84, "mukaka", "strong"),
        (0.29, "mukaka", "negligible"),
        (0.3, "mukaka", "weak"),
        (0.5, "mukaka", "moderate"),
        (0.9, "mukaka", "very strong"),
        (1.0, "mukaka", "very strong"),
        (0.05, "schober", "negligible"),
        (0.1, "schober", "weak"),
        (0.4, "schober", "moderate"),
        (0.7, "schober", "strong"),
        (0.95, "schober", "very strong"),
    ],
)
def test_descriptor_tables(r, scheme, expected):
    assert classify_correlation(r, scheme) == expected


def test_krehbiel_rule():
    assert classify_correlation(0.3, "krehbiel", 100) == "linear relationship exists"
    assert classify_correlation(0.2, "krehbiel", 100) == "linear relationship exists"
    assert classify_correlation(0.19, "krehbiel", 100) == "no linear relationship"
    with pytest.raises(InvalidSpec):
        classify_correlation(0.3, "krehbiel")
    with pytest.raises(OutOfRange):
        classify_correlation(1.5)
    with pytest.raises(InvalidSpec):
        classify_correlation(0.5, "spearman")


def _analyze(params, n, n_star, fn, outputs=("Y",), seed=0):
    d = design(len(params), n, seed)
    pts = scale_design(d, params)
    reqs = plan_lhs(pts, n_star, seed)
    recs = stub_records(reqs, outputs, fn)
    return analyze_records(recs, d, params, pts, outputs, n_star)


def test_linear_stub_gives_exact_correlation():
    params = [ParameterSpec("a", 0, 1, 0.5), ParameterSpec("b", 10, 20, 15)]
    res = _analyze(params, 20, 3, lambda rng, p: [p["a"]])
    assert res.correlations[("a", "Y")] == pytest.approx(1.0, abs=1e-12)
    assert abs(res.correlations[("b", "Y")]) < 1


def test_integer_affine_stub_is_exactly_one():
    params = [ParameterSpec("a", 0, 1, 0.5)]
    d = design(1, 8, 0)
    pts = [{"a": float(j)} for j in range(8)]
    for scale, sign in ((3.0, 1.0), (-2.0, -1.0)):
        recs = stub_records(plan_lhs(pts, 1, 0), ("Y",), lambda rng, p: [scale * p["a"] + 5])
        res = analyze_records(recs, d, params, pts, ("Y",), 1)
        assert res.correlations[("a", "Y")] == sign


def test_constant_stub_reports_degenerate_pairs():
    params = [ParameterSpec("a", 0, 1, 0.5), ParameterSpec("b", 0, 1, 0.5)]
    res = _analyze(params, 10, 2, lambda rng, p: [4.0, 1.0], outputs=("Y", "Z"))
    assert sorted(res.degenerate_pairs) == [("a", "Y"), ("a", "Z"), ("b", "Y"), ("b", "Z")]
    doc = res.to_dict()
    assert all(row["r"] is None for row in doc["correlations"])


def test_medians_from_exactly_n_star_runs():
    params = [ParameterSpec("a", 0, 1, 0.5)]
    d = design(1, 4, 0)
    pts = scale_design(d, params)
    reqs = plan_lhs(pts, 5, 0)
    assert len(reqs) == 20
    recs = stub_records(reqs, ("Y",), lambda rng, p: [rng.normal()])
    res = analyze_records(recs, d, params, pts, ("Y",), 5)
    for j in range(4):
        ys = sorted(r.outputs["Y"] for r in recs if r.run_id // 5 == j)
        assert res.medians[j]["Y"] == ys[2]
    with pytest.raises(InvalidSpec):
        analyze_records(recs[:-1], d, params, pts, ("Y",), 5)


def test_correlations_match_two_pass_oracle():
    params = [ParameterSpec("a", 0, 1, 0.5), ParameterSpec("b", -5, 5, 0)]
    res = _analyze(params, 30, 3, lambda rng, p: [p["a"] ** 2 + rng.normal() * 0.1 - p["b"] * 0.01])
    for p in params:
        x = np.array([pt[p.name] for pt in res.points])
        y = np.array([m["Y"] for m in res.medians])
        dx, dy = x - x.mean(), y - y.mean()
        oracle = (dx @ dy) / math.sqrt((dx @ dx) * (dy @ dy))
        assert res.correlations[(p.name, "Y")] == pytest.approx(oracle, abs=1e-12)


def test_run_lhs_on_toy_model_small():
    params = [ParameterSpec("ec50", 0.25, 1.75, 1.0)]
    res = run_lhs(SimulatorSpec(), params, 6, 3, ("X1", "X2"), master_seed=1)
    assert len(res.points) == 6 and len(res.medians) == 6
    assert all(-1 <= r <= 1 for r in res.correlations.values() if r is not None)
    doc = res.to_dict()
    assert doc["N"] == 6 and doc["q"] == 1
