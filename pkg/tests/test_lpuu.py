import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import lattice_lpuu, random_interval_lpuu
from itsp.lpuu import (
    default_candidates,
    feasibility_probability_mc,
    five_case,
    gain,
    inner_polyhedron,
    maximal_membership_interval,
    maximin_interval,
    maximin_probabilistic,
    outer_polyhedron,
    upper_gain_difference,
)
from itsp.model import Crisp, Discrete, Interval, LpuuInstance, Normal, Uniform
from itsp.oracle import grid_upper_gain_difference, lp_vertex_oracle, prop1_check


def simple(z=(2, 4), penalty=-10.0):
    return LpuuInstance([1.0], [[Interval(1, 2)]], [Interval(*z)], penalty=penalty)


def uniform_z(penalty=-10.0):
    return LpuuInstance([1.0], [[Crisp(1)]], [Uniform(0, 1)], penalty=penalty)


# --------------------------------------------------------------- gain


def test_gain_examples():
    inst = LpuuInstance([1.0], [[Crisp(1)]], [Crisp(3)], penalty=-10)
    assert gain([2], [[1]], [3], inst) == 2
    assert gain([4], [[1]], [3], inst) == -10
    inst2 = LpuuInstance([1.0, 1.0], [[Crisp(5), Crisp(-2)]], [Crisp(0)], penalty=-10)
    assert gain([0, 0], [[5, -2]], [0], inst2) == 0


def test_gain_tolerance_and_sense():
    inst = LpuuInstance([2.0], [[Crisp(1)]], [Crisp(3)], sense="minimize", penalty=-10)
    assert gain([3 + 5e-10], [[1]], [3], inst) == pytest.approx(-6)
    with pytest.raises(ValueError):
        gain([-1], [[1]], [3], inst)


# ------------------------------------------------------- regions, maximin


def test_region_examples():
    inner, outer = inner_polyhedron(simple()), outer_polyhedron(simple())
    assert inner.A.tolist() == [[2.0]] and inner.b.tolist() == [2.0]
    assert outer.A.tolist() == [[1.0]] and outer.b.tolist() == [4.0]
    crisp = LpuuInstance([1.0], [[Crisp(1)]], [Crisp(3)])
    assert inner_polyhedron(crisp) == outer_polyhedron(crisp)
    two = LpuuInstance([1.0, 1.0], [[Interval(1, 2), Interval(0, 1)]], [Interval(3, 5)])
    assert inner_polyhedron(two).A.tolist() == [[2.0, 1.0]]
    assert inner_polyhedron(two).b.tolist() == [3.0]
    assert outer_polyhedron(two).A.tolist() == [[1.0, 0.0]]
    assert outer_polyhedron(two).b.tolist() == [5.0]


def test_regions_reject_distributions():
    with pytest.raises(ValueError):
        inner_polyhedron(uniform_z())


def test_maximin_examples():
    out = maximin_interval(simple()).outcome
    assert out.status == "optimal" and out.x.tolist() == pytest.approx([1.0]) and out.value == pytest.approx(1)
    assert maximin_interval(simple(z=(-4, -2))).outcome.status == "infeasible"
    crisp = LpuuInstance([3.0, 2.0], [[Crisp(1), Crisp(0)], [Crisp(0), Crisp(1)]], [Crisp(2), Crisp(3)])
    out = maximin_interval(crisp).outcome
    assert np.allclose(out.x, [2, 3]) and out.value == pytest.approx(12)


def test_maximin_matches_vertex_oracle_on_inner_region():
    rng = np.random.default_rng(8)
    for _ in range(100):
        inst = random_interval_lpuu(rng, int(rng.integers(1, 5)), int(rng.integers(1, 5)))
        got = maximin_interval(inst).outcome
        ref = lp_vertex_oracle(inner_polyhedron(inst), inst.c)
        assert got.status == ref.status
        if got.optimal:
            assert got.value == pytest.approx(ref.value, abs=1e-6)


def test_minimize_sense_reports_own_objective():
    inst = LpuuInstance([1.0], [[Crisp(-1)]], [Interval(-3, -2)], sense="minimize")
    out = maximin_interval(inst).outcome
    # need x >= 3 for every z in [-3, -2]
    assert out.x.tolist() == pytest.approx([3.0]) and out.value == pytest.approx(3.0)


# ------------------------------------------------------------- maximality


@pytest.mark.parametrize("x, expected", [(2.5, True), (0.5, False), (5.0, False), (1.0, True), (4.0, True)])
def test_maximal_examples(x, expected):
    v = maximal_membership_interval(simple(), [x])
    assert v.is_maximal is expected and not v.degenerate_inner_empty


def test_empty_inner_makes_everything_maximal():
    for x in (0.0, 3.0, 1e5):
        v = maximal_membership_interval(simple(z=(-4, -2)), [x])
        assert v.is_maximal and v.degenerate_inner_empty


def test_unbounded_maximin_has_no_maximal_decision():
    inst = LpuuInstance([1.0, 1.0], [[Interval(0, 1), Crisp(0)]], [Interval(1, 2)])
    assert maximin_interval(inst).outcome.status == "unbounded"
    assert not maximal_membership_interval(inst, [0, 0]).is_maximal


def test_maximal_matches_five_case_definition():
    """x is maximal iff no w on a fine grid has lower-prev(G_w - G_x) > 0."""
    inst = simple()
    grid = np.linspace(0, 5, 21).tolist() + [1.0]
    for x in grid:
        dominated = any(-upper_gain_difference(inst, [x], [w]) > 1e-9 for w in grid)
        assert maximal_membership_interval(inst, [x]).is_maximal == (not dominated), x


# -------------------------------------------------------------- five-case


def test_five_case_examples():
    assert five_case(simple(), [0.5], [2]) == (1, 10.5)
    assert upper_gain_difference(simple(), [3], [3]) == 0
    crisp = LpuuInstance([2.0, 1.0], [[Crisp(1), Crisp(1)]], [Crisp(4)], penalty=-10)
    assert five_case(crisp, [1, 2], [2, 1]) == (4, -1.0)


def test_five_case_remaining_cases():
    inst = simple()
    # x = 5 is never feasible; w = 2 sometimes fails
    assert five_case(inst, [5], [2]).case == 2
    # x = 0.5 always feasible; w = 5 never feasible
    assert five_case(inst, [0.5], [5]).case == 1
    # x never feasible, w always feasible
    assert five_case(inst, [5], [1]) == (5, -10.0 - 1.0)
    # x feasible somewhere but only where w = 3 also holds; w = 3 fails at times
    assert five_case(inst, [3.5], [3]).case == 3


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_five_case_matches_grid_oracle(seed):
    rng = np.random.default_rng(seed)
    inst = lattice_lpuu(rng)
    pts = [np.array([float(v) for v in rng.integers(0, 4, inst.n)]) for _ in range(3)]
    pts.append(pts[0] / 2)
    for x in pts:
        for w in pts:
            case, val = five_case(inst, x, w)
            ref = grid_upper_gain_difference(inst, x, w, points=50 if inst.m * inst.n < 3 else 20)
            assert val == pytest.approx(ref, abs=1e-6)
            if case == 1:
                assert val > 0
            elif case == 2:
                assert val == 0
            elif case == 3:
                assert val >= 0
            elif case == 5:
                assert val < 0


def test_five_case_lifts_penalty_linearly():
    inst = simple(penalty=-10)
    for L in (-100.0, -1e6):
        other = inst.with_penalty(L)
        assert five_case(other, [0.5], [2]).value == pytest.approx(0.5 - L)
        assert five_case(other, [0.5], [1]).value == five_case(inst, [0.5], [1]).value


# --------------------------------------------------- properties over batches


def test_prop1_and_l_independence_on_random_batch():
    rng = np.random.default_rng(99)
    for _ in range(60):
        inst = random_interval_lpuu(rng, int(rng.integers(1, 6)), int(rng.integers(1, 6)))
        assert prop1_check(inst).agreement
        outs = [maximin_interval(inst.with_penalty(L)).outcome for L in (-1, -1e3, -1e6)]
        assert len({o.status for o in outs}) == 1
        if outs[0].optimal:
            assert all(np.array_equal(outs[0].x, o.x) for o in outs)
            for L in (-1, -1e3, -1e6):
                v = maximal_membership_interval(inst.with_penalty(L), outs[0].x)
                assert v.is_maximal


def test_inner_inside_outer():
    rng = np.random.default_rng(4)
    for _ in range(50):
        inst = random_interval_lpuu(rng, 3, 3)
        inner, outer = inner_polyhedron(inst), outer_polyhedron(inst)
        for _ in range(20):
            x = rng.uniform(0, 4, 3)
            if inner.contains(x):
                assert outer.contains(x)


# ------------------------------------------------------------ Monte Carlo


def test_mc_examples():
    inst = uniform_z()
    p, se = feasibility_probability_mc(inst, [0.5], 10_000, seed=1)
    assert abs(p - 0.5) <= 3 * se
    assert feasibility_probability_mc(inst, [0.0], 1000, 0) == (1.0, 0.0)
    assert feasibility_probability_mc(inst, [2.0], 1000, 0) == (0.0, 0.0)


def test_mc_reproducible_and_seed_sensitive():
    inst = uniform_z()
    a = feasibility_probability_mc(inst, [0.3], 5000, 12)
    assert a == feasibility_probability_mc(inst, [0.3], 5000, 12)
    assert a != feasibility_probability_mc(inst, [0.3], 5000, 13)


def test_mc_argument_checks():
    with pytest.raises(ValueError):
        feasibility_probability_mc(uniform_z(), [0.5], 50, 0)
    with pytest.raises(ValueError):
        feasibility_probability_mc(uniform_z(), [0.5], 1000, -1)
    with pytest.raises(ValueError):
        feasibility_probability_mc(simple(), [0.5], 1000, 0)


def test_mc_normal_rows():
    inst = LpuuInstance([1.0, 1.0], [[Normal(1, 0.2), Normal(2, 0.2)]], [Crisp(3)])
    p, se = feasibility_probability_mc(inst, [1, 1], 20_000, 3)
    assert abs(p - 0.5) <= 4 * se


def test_maximin_probabilistic_examples():
    inst = uniform_z()
    best = maximin_probabilistic(inst, [[0], [0.5], [1]], 10_000, 0)
    assert best.x.tolist() == [0.0] and best.score == pytest.approx(10.0)
    assert best.scores[1] == pytest.approx(10.5 * 0.5, abs=0.25)
    assert best.scores[2] == 0
    none = maximin_probabilistic(inst, [[3], [2], [5]], 1000, 0)
    assert none.x.tolist() == [2.0] and none.score == 0


def test_maximin_probabilistic_point_masses_match_lp():
    rng = np.random.default_rng(21)
    for _ in range(20):
        A = rng.integers(1, 4, (2, 2)).astype(float)
        b = rng.integers(2, 9, 2).astype(float)
        c = rng.integers(1, 5, 2).astype(float)
        pm = lambda v: Discrete((float(v),), (1.0,))
        inst = LpuuInstance(c, [[pm(v) for v in row] for row in A], [pm(v) for v in b], penalty=-1e4)
        cands = [np.array([i, j], float) for i in range(5) for j in range(5)]
        best = maximin_probabilistic(inst, cands, 200, 0)
        feas = [x for x in cands if np.all(A @ x <= b)]
        top = max(c @ x for x in feas)
        assert best.value == top
        assert tuple(best.x) == min(tuple(x) for x in feas if c @ x == top)


def test_default_candidates_cover_lp_optimum():
    inst = LpuuInstance([1.0, 2.0], [[Uniform(1, 2), Uniform(1, 2)]], [Uniform(3, 4)], penalty=-100)
    cands = default_candidates(inst, grid_points=5)
    ylo, zhi = np.array([[1.0, 1.0]]), np.array([4.0])
    assert all(np.all(ylo @ x <= zhi + 1e-9) for x in cands)
    assert any(np.allclose(x, [0, 4]) for x in cands)
    with pytest.raises(ValueError):
        default_candidates(LpuuInstance([1.0] * 8, [[Uniform(1, 2)] * 8], [Uniform(3, 4)]), 11)


def test_probabilistic_default_candidates_find_analytic_optimum():
    inst = LpuuInstance([1.0], [[Crisp(1)]], [Uniform(0, 1)], penalty=-1.0)
    best = maximin_probabilistic(inst, default_candidates(inst, grid_points=21), 20_000, 5)
    # analytic maximizer of (x + 1)(1 - x) on [0, 1] is x = 0
    assert best.x.tolist() == [0.0]
