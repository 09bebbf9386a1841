"""Brute-force verifiers.

Nothing in here calls the code it checks: LPs are solved by vertex
enumeration, tour sets by listing every tour, and the five-case upper
prevision by grid search over the uncertainty box.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .model import (
    Interval,
    LpuuInstance,
    Polyhedron,
    Tour,
    UtspInstance,
    interval_bounds,
    mean,
)
from .simplex import LpOutcome

MAX_VERTEX_SIZE = 14
MAX_TOUR_ORACLE_N = 8
_FEAS_TOL = 1e-7


class OracleCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleReport:
    subject: str
    agreement: bool
    max_discrepancy: float
    cases_checked: int
    detail: str = ""


# --------------------------------------------------------------------- LP


def _enumerate_vertices(G: np.ndarray, h: np.ndarray, k: int, extra=None):
    """Vertices of ``{d : G d <= h}`` in ``R^k`` (optionally with equality rows).

    ``extra`` is an ``(E, e)`` pair of equality rows always held active.
    Yields every point where a nonsingular choice of active rows meets and all
    inequalities hold.
    """
    rows = range(G.shape[0])
    n_eq = 0 if extra is None else extra[0].shape[0]
    need = k - n_eq
    scale = max(1.0, float(np.abs(h).max()) if h.size else 1.0)
    for active in itertools.combinations(rows, need):
        M = G[list(active)]
        r = h[list(active)]
        if extra is not None:
            M = np.vstack([M, extra[0]])
            r = np.concatenate([r, extra[1]])
        if np.linalg.matrix_rank(M) < k:
            continue
        point = np.linalg.solve(M, r)
        if np.all(G @ point <= h + _FEAS_TOL * scale):
            yield point


def lp_vertex_oracle(poly: Polyhedron, c: Sequence[float], sense: str = "maximize") -> LpOutcome:
    """Solve an LP by enumerating basic feasible solutions.

    Unboundedness is detected on the recession cone ``{d >= 0 : A d <= 0}``
    normalized by ``sum(d) = 1``: the LP is unbounded iff it is feasible and
    some vertex of that slice has positive objective.
    """
    A, b = np.asarray(poly.A, dtype=float), np.asarray(poly.b, dtype=float)
    m, n = A.shape
    if m + n > MAX_VERTEX_SIZE:
        raise OracleCapExceeded(f"m + n = {m + n} exceeds {MAX_VERTEX_SIZE}")
    c = np.asarray(c, dtype=float)
    obj = c if sense == "maximize" else -c

    G = np.vstack([A, -np.eye(n)])
    h = np.concatenate([b, np.zeros(n)])
    best: Optional[np.ndarray] = None
    best_val = -math.inf
    for v in _enumerate_vertices(G, h, n):
        val = float(obj @ v)
        if val > best_val + 1e-12:
            best, best_val = v, val
    if best is None:
        return LpOutcome.infeasible()

    cone = np.vstack([A, -np.eye(n)])
    for d in _enumerate_vertices(cone, np.zeros(m + n), n, (np.ones((1, n)), np.ones(1))):
        if obj @ d > 1e-9:
            return LpOutcome.unbounded()
    best = np.maximum(best, 0.0)
    return LpOutcome("optimal", best, float(c @ best))


# -------------------------------------------------------------------- TSP


@dataclass(frozen=True)
class TourTable:
    rows: tuple[tuple[Tour, float, float, Optional[float]], ...]  # tour, lo, hi, expected
    maximin_tour: Tour
    v_star: float
    hypograph_maximal: tuple[Tour, ...]
    edge_level_maximal: tuple[Tour, ...]
    expected_tour: Optional[Tour] = None


def _all_tours(n: int) -> list[tuple[int, ...]]:
    out = []
    for rest in itertools.permutations(range(1, n)):
        if rest[0] < rest[-1]:
            out.append((0,) + rest)
    return out


def _tour_edges(order) -> list[tuple[int, int]]:
    n = len(order)
    return [tuple(sorted((order[i], order[(i + 1) % n]))) for i in range(n)]


def tour_enumeration_oracle(inst: UtspInstance, tol: float = 1e-9) -> TourTable:
    """Evaluate every canonical tour and derive all tour sets by definition."""
    n = inst.n
    if n > MAX_TOUR_ORACLE_N:
        raise OracleCapExceeded(f"n = {n} exceeds {MAX_TOUR_ORACLE_N}")
    lo_e, hi_e, ex_e = {}, {}, {}
    for i, j in itertools.combinations(range(n), 2):
        d = inst.durations[i][j]
        if inst.kind == "dist":
            ex_e[i, j] = mean(d) / inst.speed
            lo_e[i, j] = hi_e[i, j] = ex_e[i, j]
            try:
                iv = interval_bounds(d)
                lo_e[i, j], hi_e[i, j] = iv.lo / inst.speed, iv.hi / inst.speed
            except ValueError:
                pass
        else:
            iv = interval_bounds(d)
            lo_e[i, j], hi_e[i, j] = iv.lo / inst.speed, iv.hi / inst.speed

    orders = _all_tours(n)
    edge_lists = [_tour_edges(o) for o in orders]
    lows = [math.fsum(lo_e[e] for e in es) for es in edge_lists]
    highs = [math.fsum(hi_e[e] for e in es) for es in edge_lists]
    exps = [math.fsum(ex_e[e] for e in es) for es in edge_lists] if ex_e else [None] * len(orders)

    v_star = min(highs)
    maximin = min(o for o, h in zip(orders, highs) if h <= v_star + tol)
    hyp = [o for o, lo in zip(orders, lows) if lo <= v_star + tol]

    # pairwise edge-level dominance on symmetric differences
    index = {e: k for k, e in enumerate(itertools.combinations(range(n), 2))}
    inc = np.zeros((len(orders), len(index)))
    for t, es in enumerate(edge_lists):
        inc[t, [index[e] for e in es]] = 1.0
    lo_vec = np.array([lo_e[e] for e in index])
    hi_vec = np.array([hi_e[e] for e in index])
    dominated = np.zeros(len(orders), dtype=bool)
    for start in range(0, len(orders), 512):
        X = inc[start:start + 512]
        only_x = (X * lo_vec) @ (1.0 - inc).T
        only_w = (1.0 - X) @ (inc * hi_vec).T
        dominated[start:start + 512] = ((only_x - only_w) > tol).any(axis=1)
    edge = [o for o, dom in zip(orders, dominated) if not dom]

    expected_tour = None
    if ex_e:
        best = min(exps)
        expected_tour = Tour(min(o for o, e in zip(orders, exps) if e <= best + tol))

    return TourTable(
        rows=tuple((Tour(o), lo, hi, ex) for o, lo, hi, ex in zip(orders, lows, highs, exps)),
        maximin_tour=Tour(maximin),
        v_star=v_star,
        hypograph_maximal=tuple(Tour(o) for o in hyp),
        edge_level_maximal=tuple(Tour(o) for o in edge),
        expected_tour=expected_tour,
    )


# ----------------------------------------------------- five-case oracle


def grid_upper_gain_difference(
    inst: LpuuInstance, x: Sequence[float], w: Sequence[float], points: int = 50
) -> float:
    """``max over the box of G_x - G_w`` by grid search.

    Each uncertain coordinate gets ``points`` equally spaced values including
    both endpoints; crisp coordinates are held fixed.
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    m, n = inst.m, inst.n
    coords = []
    for k in range(m):
        for j in range(n):
            coords.append(interval_bounds(inst.Y[k][j]))
    for k in range(m):
        coords.append(interval_bounds(inst.Z[k]))
    axes = [
        np.array([iv.lo]) if iv.width == 0 else np.linspace(iv.lo, iv.hi, points)
        for iv in coords
    ]
    grids = np.meshgrid(*axes, indexing="ij", sparse=True)
    obj = np.asarray(inst.c, dtype=float)
    if inst.sense == "minimize":
        obj = -obj
    L = inst.penalty

    def feasible(d):
        ok = True
        for k in range(m):
            lhs = 0.0
            for j in range(n):
                lhs = lhs + grids[k * n + j] * d[j]
            ok = ok & (lhs <= grids[m * n + k] + 1e-9)
        return np.broadcast_to(ok, tuple(len(a) for a in axes))

    gx = np.where(feasible(x), obj @ x, L)
    gw = np.where(feasible(w), obj @ w, L)
    return float((gx - gw).max())


# ------------------------------------------------------------ Prop. 1


def prop1_check(inst) -> OracleReport:
    """Does the maximin solution pass the matching maximal test?"""
    from . import lpuu, tsp

    if isinstance(inst, UtspInstance):
        if inst.kind == "dist":
            best, _ = tsp.expected_optimal_tour(inst)
            ok = True  # both criteria coincide for linear previsions
            return OracleReport("maximin-in-maximal[utsp/dist]", ok, 0.0, 1, f"tour {best}")
        tour, v_star = tsp.maximin_tour(inst)
        hyp = tsp.maximal_tours_hypograph(inst)
        edge = tsp.maximal_tours_edge_level(inst) if inst.n <= tsp.edge_cap() else None
        ok = tour in hyp and (edge is None or tour in edge)
        return OracleReport("maximin-in-maximal[utsp]", ok, 0.0 if ok else 1.0, 1, f"tour {tour}, v*={v_star}")
    if isinstance(inst, LpuuInstance):
        res = lpuu.maximin_interval(inst)
        if not res.outcome.optimal:
            return OracleReport("maximin-in-maximal[lpuu]", True, 0.0, 0, f"maximin {res.outcome.status}")
        verdict = lpuu.maximal_membership_interval(inst, res.outcome.x)
        return OracleReport(
            "maximin-in-maximal[lpuu]", verdict.is_maximal, 0.0 if verdict.is_maximal else 1.0, 1
        )
    raise TypeError(f"not an instance: {type(inst).__name__}")

