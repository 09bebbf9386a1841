"""Uncertain linear programs as decision problems.

Each decision ``x >= 0`` earns the gain ``c.x`` when the realized constraints
``y x <= z`` hold and the penalty ``L`` otherwise.  Under interval (vacuous)
uncertainty the maximin decision solves a crisp LP over the inner region
``Y_hi x <= Z_lo`` and the maximal set is ``{x in outer : c.x >= c.x_m}`` with
outer region ``Y_lo x <= Z_hi``.  Under distributions both criteria reduce to
maximizing ``(c.x - L) * P(Y x <= Z)``, estimated here by Monte Carlo over a
candidate set.

Minimization instances are handled by maximizing ``-c``; values reported back
to callers are always ``c.x`` in the instance's own sense.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .model import TOL, LpuuInstance, Normal, Polyhedron, interval_bounds, sample
from .simplex import LpOutcome, lp_solve

MAX_GRID_CANDIDATES = 200_000


@dataclass(frozen=True)
class FeasibilityRegions:
    inner: Polyhedron
    outer: Polyhedron


@dataclass(frozen=True)
class MaximinResult:
    outcome: LpOutcome


@dataclass(frozen=True)
class MaximalVerdict:
    is_maximal: bool
    degenerate_inner_empty: bool = False


class CaseValue(NamedTuple):
    case: int
    value: float


def _require_interval(inst: LpuuInstance):
    if inst.kind == "dist":
        raise ValueError("operation needs an interval or crisp instance")


def _decision(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape != (n,):
        raise ValueError(f"decision has {x.size} entries, expected {n}")
    if np.any(x < -TOL):
        raise ValueError("decisions must be nonnegative")
    return x


def gain(x, y, z, inst: LpuuInstance) -> float:
    """Gain of decision ``x`` under the realization ``(y, z)``.

    Uses the sense-normalized objective, so for minimization instances the
    feasible gain is ``-c.x``.
    """
    x = _decision(x, inst.n)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float).reshape(-1)
    if y.shape != (inst.m, inst.n) or z.shape != (inst.m,):
        raise ValueError("realization dimensions do not match the instance")
    if np.all(y @ x <= z + TOL):
        return float(inst.objective() @ x)
    return float(inst.penalty)


def inner_polyhedron(inst: LpuuInstance) -> Polyhedron:
    """Decisions feasible for every realization: ``Y_hi x <= Z_lo``."""
    _require_interval(inst)
    _, yhi, zlo, _ = inst.bounds()
    return Polyhedron(yhi, zlo)


def outer_polyhedron(inst: LpuuInstance) -> Polyhedron:
    """Decisions feasible for some realization: ``Y_lo x <= Z_hi``."""
    _require_interval(inst)
    ylo, _, _, zhi = inst.bounds()
    return Polyhedron(ylo, zhi)


def feasibility_regions(inst: LpuuInstance) -> FeasibilityRegions:
    return FeasibilityRegions(inner_polyhedron(inst), outer_polyhedron(inst))


def maximin_interval(inst: LpuuInstance) -> MaximinResult:
    """Worst-case optimal decision: the crisp LP over the inner region.

    The outcome is ``infeasible`` when the inner region is empty.  The penalty
    plays no role.
    """
    _require_interval(inst)
    out = lp_solve(inner_polyhedron(inst), inst.objective(), "maximize")
    if out.optimal:
        out = LpOutcome("optimal", out.x, float(np.asarray(inst.c) @ out.x))
    return MaximinResult(out)


def maximal_membership_interval(inst: LpuuInstance, x, maximin: MaximinResult | None = None) -> MaximalVerdict:
    """Is ``x`` undominated under interval uncertainty?

    Every ``x >= 0`` is maximal when the inner region is empty.  Otherwise
    ``x`` must lie in the outer region and match the maximin objective.  If
    the maximin LP is unbounded no decision is maximal.
    """
    x = _decision(x, inst.n)
    if maximin is None:
        maximin = maximin_interval(inst)
    out = maximin.outcome
    if out.status == "infeasible":
        return MaximalVerdict(True, True)
    if out.status == "unbounded":
        return MaximalVerdict(False)
    obj = inst.objective()
    ok = outer_polyhedron(inst).contains(x) and obj @ x >= obj @ out.x - TOL
    return MaximalVerdict(bool(ok))


# ------------------------------------------------------- five-case table


def _box_variables(inst: LpuuInstance):
    """Offsets and widths of the box variables ``(y, z)`` in row-major order."""
    ylo, yhi, zlo, zhi = inst.bounds()
    return ylo, yhi - ylo, zlo, zhi - zlo


def _box_lp(inst: LpuuInstance, x: np.ndarray | None):
    """Box constraints on shifted variables ``v = (y, z) - lo``, plus
    ``y_k x <= z_k`` for every row when ``x`` is given."""
    m, n = inst.m, inst.n
    ylo, yw, zlo, zw = _box_variables(inst)
    nv = m * n + m
    rows = [np.eye(nv)]
    rhs = [np.concatenate([yw.reshape(-1), zw])]
    if x is not None:
        R = np.zeros((m, nv))
        for k in range(m):
            R[k, k * n:(k + 1) * n] = x
            R[k, m * n + k] = -1.0
        rows.append(R)
        rhs.append(zlo - ylo @ x)
    return Polyhedron(np.vstack(rows), np.concatenate(rhs))


def _x_plus_nonempty(inst: LpuuInstance, x: np.ndarray) -> bool:
    """Some realization in the box keeps ``x`` feasible."""
    poly = _box_lp(inst, x)
    return lp_solve(poly, np.zeros(poly.shape[1])).status != "infeasible"


def _violation_possible(inst: LpuuInstance, w: np.ndarray, x: np.ndarray | None) -> bool:
    """Some realization violates a row of ``y w <= z`` by more than ``TOL``
    (while keeping ``x`` feasible, if given).

    Decided per row by maximizing ``y_k w - z_k`` over the box LP; a strict
    inequality cannot be posed to an LP directly.
    """
    m, n = inst.m, inst.n
    ylo, _, zlo, _ = _box_variables(inst)
    poly = _box_lp(inst, x)
    for k in range(m):
        obj = np.zeros(poly.shape[1])
        obj[k * n:(k + 1) * n] = w
        obj[m * n + k] = -1.0
        out = lp_solve(poly, obj)
        if out.status == "infeasible":
            return False
        best = math.inf if out.status == "unbounded" else out.value + ylo[k] @ w - zlo[k]
        if best > TOL:
            return True
    return False


def five_case(inst: LpuuInstance, x, w) -> CaseValue:
    """Case index and value of the upper prevision of ``G_x - G_w``.

    Case 1: some realization keeps ``x`` feasible while ``w`` fails.
    Case 2: ``x`` is never feasible, ``w`` sometimes fails.
    Case 3: ``x`` sometimes feasible, ``w`` sometimes fails, never together.
    Case 4: ``x`` sometimes feasible, ``w`` always feasible.
    Case 5: ``x`` never feasible, ``w`` always feasible.
    """
    _require_interval(inst)
    x = _decision(x, inst.n)
    w = _decision(w, inst.n)
    obj = inst.objective()
    cx, cw, L = float(obj @ x), float(obj @ w), float(inst.penalty)

    x_plus = _x_plus_nonempty(inst, x)
    w_minus = _violation_possible(inst, w, None)
    both = x_plus and w_minus and _violation_possible(inst, w, x)
    if both:
        return CaseValue(1, cx - L)
    if not x_plus and w_minus:
        return CaseValue(2, 0.0)
    if x_plus and w_minus:
        return CaseValue(3, max(0.0, cx - cw))
    if x_plus:
        return CaseValue(4, cx - cw)
    return CaseValue(5, L - cw)


def upper_gain_difference(inst: LpuuInstance, x, w) -> float:
    """Upper prevision of ``G_x - G_w`` under interval uncertainty."""
    return five_case(inst, x, w).value


# ------------------------------------------------------ probabilistic case


def _sample_realizations(inst: LpuuInstance, n_samples: int, seed: int):
    rng = np.random.default_rng(seed)
    Y = np.empty((n_samples, inst.m, inst.n))
    Z = np.empty((n_samples, inst.m))
    for k, row in enumerate(inst.Y):
        for j, u in enumerate(row):
            Y[:, k, j] = sample(u, rng, n_samples)
    for k, u in enumerate(inst.Z):
        Z[:, k] = sample(u, rng, n_samples)
    return Y, Z


def _check_mc_args(inst: LpuuInstance, n_samples: int, seed: int):
    if inst.kind == "interval":
        raise ValueError("Monte Carlo needs a distribution (or crisp) instance")
    if int(n_samples) != n_samples or n_samples < 100:
        raise ValueError(f"n_samples must be an integer >= 100, got {n_samples}")
    if int(seed) != seed or seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed}")


def feasibility_probability_mc(inst: LpuuInstance, x, n_samples: int = 10_000, seed: int = 0) -> tuple[float, float]:
    """Monte Carlo estimate of ``P(Y x <= Z)`` and its binomial standard error."""
    _check_mc_args(inst, n_samples, seed)
    x = _decision(x, inst.n)
    Y, Z = _sample_realizations(inst, n_samples, seed)
    ok = np.all(Y @ x <= Z + TOL, axis=1)
    p = float(ok.mean())
    return p, math.sqrt(p * (1.0 - p) / n_samples)


@dataclass(frozen=True)
class ProbabilisticChoice:
    x: np.ndarray
    score: float
    probability: float
    value: float
    scores: tuple[float, ...]


def maximin_probabilistic(inst: LpuuInstance, candidates, n_samples: int = 10_000, seed: int = 0) -> ProbabilisticChoice:
    """Best candidate under ``(c.x - L) * P(Y x <= Z)``.

    All candidates are scored on the same sample (common random numbers).
    Ties go to the lexicographically smallest candidate.  ``scores`` follows
    the order of ``candidates`` as given.
    """
    _check_mc_args(inst, n_samples, seed)
    cands = [_decision(c, inst.n) for c in candidates]
    if not cands:
        raise ValueError("candidate list is empty")
    Y, Z = _sample_realizations(inst, n_samples, seed)
    obj = inst.objective()
    scores, probs = [], []
    for x in cands:
        p = float(np.all(Y @ x <= Z + TOL, axis=1).mean())
        probs.append(p)
        scores.append((float(obj @ x) - inst.penalty) * p)
    best = max(scores)
    winners = [i for i, s in enumerate(scores) if s >= best - 1e-12]
    i = min(winners, key=lambda i: tuple(cands[i]))
    return ProbabilisticChoice(
        cands[i], scores[i], probs[i], float(np.asarray(inst.c) @ cands[i]), tuple(scores)
    )


def support_box(inst: LpuuInstance, normal_width: float = 4.0):
    """``(Y_lo, Y_hi, Z_lo, Z_hi)`` of the support; normals use mean +/- width*sigma."""
    def bounds(u):
        if isinstance(u, Normal):
            return u.mu - normal_width * u.sigma, u.mu + normal_width * u.sigma
        iv = interval_bounds(u)
        return iv.lo, iv.hi

    ylo = np.array([[bounds(u)[0] for u in row] for row in inst.Y])
    yhi = np.array([[bounds(u)[1] for u in row] for row in inst.Y])
    zlo = np.array([bounds(u)[0] for u in inst.Z])
    zhi = np.array([bounds(u)[1] for u in inst.Z])
    return ylo, yhi, zlo, zhi


def polyhedron_vertices(poly: Polyhedron, max_subsets: int = 200_000) -> list[np.ndarray]:
    """Vertices of a small polyhedron by active-set enumeration."""
    A, b = poly.A, poly.b
    m, n = A.shape
    G = np.vstack([A, -np.eye(n)])
    h = np.concatenate([b, np.zeros(n)])
    if math.comb(m + n, n) > max_subsets:
        raise ValueError("polyhedron too large for vertex enumeration")
    out = []
    for active in itertools.combinations(range(m + n), n):
        M = G[list(active)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        v = np.linalg.solve(M, h[list(active)])
        if np.all(G @ v <= h + 1e-9) and not any(np.allclose(v, u) for u in out):
            out.append(np.maximum(v, 0.0))
    return out


def default_candidates(inst: LpuuInstance, grid_points: int = 11, box_hi: float | None = None) -> list[np.ndarray]:
    """Grid over ``[0, box_hi]^n`` plus vertices of the support-outer region.

    ``box_hi`` defaults to the largest coordinate among those vertices (or 1).
    Grid points outside the support-outer region are dropped, since they are
    infeasible with probability one.
    """
    ylo, _, _, zhi = support_box(inst)
    outer = Polyhedron(ylo, zhi)
    verts = polyhedron_vertices(outer)
    if box_hi is None:
        box_hi = max([float(v.max()) for v in verts if v.size] + [1.0])
    if grid_points ** inst.n > MAX_GRID_CANDIDATES:
        raise ValueError(f"grid of {grid_points}^{inst.n} candidates is too large")
    axis = np.linspace(0.0, box_hi, grid_points)
    cands = [np.array(p) for p in itertools.product(axis, repeat=inst.n)]
    cands = [p for p in cands if outer.contains(p)] + verts
    uniq = {tuple(np.round(p, 12)): p for p in cands}
    return [uniq[k] for k in sorted(uniq)]
