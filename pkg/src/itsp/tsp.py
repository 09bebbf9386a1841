"""Uncertain symmetric TSP.

Interval case: the maximin tour minimizes the worst-case (upper-bound) length;
its value is ``v*``.  The hypograph maximal set keeps every tour whose
best-case length does not exceed ``v*``.  The edge-level maximal set is
finer: tour ``w`` dominates ``x`` when ``x`` is longer for *every* realization,
which only depends on the edges the two tours do not share.

Probabilistic case: maximin and maximal coincide and reduce to a crisp TSP on
expected travel times.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import TOL, Interval, Tour, UtspInstance, interval_bounds

BRUTEFORCE_CAP = 10
HELD_KARP_CAP = 18
HYPOGRAPH_CAP = 12
EDGE_LEVEL_CAP = 10
_ENV_CAP = "ITSP_MAX_N"
_CHUNK = 65_536


class CapExceeded(ValueError):
    pass


def _cap(default: int) -> int:
    raw = os.environ.get(_ENV_CAP)
    if raw is None or raw == "":
        return default
    return min(int(raw), HELD_KARP_CAP)


def edge_cap() -> int:
    return _cap(EDGE_LEVEL_CAP)


def _check_cap(n: int, cap: int, what: str):
    if n > cap:
        raise CapExceeded(f"{what}: n = {n} exceeds cap {cap}")


def _require_interval(inst: UtspInstance):
    if inst.kind == "dist":
        raise ValueError("operation needs an interval or crisp instance")


@dataclass(frozen=True)
class TourEvaluation:
    tour: Tour
    length_bounds: Optional[Interval]
    expected_length: Optional[float] = None


@dataclass(frozen=True)
class MaximalTourReport:
    maximin_tour: Tour
    maximin_value: float
    hypograph_maximal: tuple[Tour, ...]
    edge_level_maximal: Optional[tuple[Tour, ...]]


def tour_length_bounds(inst: UtspInstance, t: Tour) -> Interval:
    """Best- and worst-case travel time of ``t``."""
    lo, hi = inst.time_bounds()
    return Interval(t.length(lo), t.length(hi))


def evaluate_tour(inst: UtspInstance, t: Tour) -> TourEvaluation:
    if t.n != inst.n:
        raise ValueError(f"tour has {t.n} cities, instance has {inst.n}")
    try:
        bounds = tour_length_bounds(inst, t)
    except ValueError:  # unbounded support
        bounds = None
    expected = t.length(inst.expected_times()) if inst.kind != "interval" else None
    return TourEvaluation(t, bounds, expected)


# ---------------------------------------------------------- crisp solvers


def _bruteforce(w: np.ndarray) -> Tour:
    n = w.shape[0]
    rest = np.array(
        [p for p in itertools.permutations(range(1, n)) if p[0] < p[-1]], dtype=np.intp
    )
    lengths = w[0, rest[:, 0]] + w[rest[:, -1], 0]
    for k in range(rest.shape[1] - 1):
        lengths = lengths + w[rest[:, k], rest[:, k + 1]]
    best = lengths.min()
    first = int(np.flatnonzero(lengths <= best + TOL)[0])
    return Tour((0,) + tuple(int(c) for c in rest[first]))


def _held_karp_table(w: np.ndarray) -> np.ndarray:
    """``f[S, j]``: shortest path from city 0 through the set ``S`` of cities
    ``1..n-1`` (bit ``j`` is city ``j+1``) ending at city ``j+1``."""
    m = w.shape[0] - 1
    W = w[1:, 1:]
    size = 1 << m
    f = np.full((size, m), np.inf)
    for j in range(m):
        f[1 << j, j] = w[0, j + 1]
    masks = np.arange(size)
    popcount = np.zeros(size, dtype=np.int64)
    for j in range(m):
        popcount += (masks >> j) & 1
    for s in range(2, m + 1):
        layer = masks[popcount == s]
        for j in range(m):
            S = layer[(layer >> j) & 1 == 1]
            prev = S ^ (1 << j)
            f[S, j] = (f[prev] + W[:, j]).min(axis=1)
    return f


def _held_karp(w: np.ndarray) -> Tour:
    n = w.shape[0]
    m = n - 1
    f = _held_karp_table(w)
    full = (1 << m) - 1
    opt = float((f[full] + w[1:, 0]).min())

    # lexicographically smallest tour within TOL of the optimum; the cost to
    # go from city k with set R still to visit is f[R | k, k] by symmetry
    order, visited, cur, acc = [0], 0, 0, 0.0
    for _ in range(m):
        for k in range(m):
            if visited >> k & 1:
                continue
            nxt = visited | (1 << k)
            remaining = full ^ nxt
            to_go = f[remaining | (1 << k), k] if remaining else w[k + 1, 0]
            step = acc + w[cur, k + 1]
            if step + to_go <= opt + TOL:
                order.append(k + 1)
                visited, cur, acc = nxt, k + 1, step
                break
        else:  # pragma: no cover - float trouble only
            raise RuntimeError("Held-Karp reconstruction failed")
    return Tour(tuple(order))


def crisp_tsp(weights, method: str = "held_karp") -> tuple[Tour, float]:
    """Optimal tour of a symmetric nonnegative weight matrix.

    Ties go to the lexicographically smallest canonical tour, so both methods
    return the same tour; the length is always summed edge by edge along it.
    """
    w = np.asarray(weights, dtype=float)
    n = w.shape[0]
    if w.shape != (n, n) or n < 3:
        raise ValueError("weights must be a square matrix with at least 3 cities")
    if not np.allclose(w, w.T, rtol=0, atol=0):
        raise ValueError("weights must be symmetric")
    if np.any(w[~np.eye(n, dtype=bool)] < 0):
        raise ValueError("weights must be nonnegative")
    if method == "bruteforce":
        _check_cap(n, _cap(BRUTEFORCE_CAP), "bruteforce")
        tour = _bruteforce(w)
    elif method == "held_karp":
        _check_cap(n, HELD_KARP_CAP, "held_karp")
        tour = _held_karp(w)
    else:
        raise ValueError(f"unknown method {method!r}")
    return tour, tour.length(w)


# --------------------------------------------------------- interval case


def maximin_tour(inst: UtspInstance, method: str = "held_karp") -> tuple[Tour, float]:
    """Tour with the smallest worst-case length, and that length ``v*``."""
    _require_interval(inst)
    _, hi = inst.time_bounds()
    return crisp_tsp(hi, method)


def maximal_tours_hypograph(inst: UtspInstance, v_star: float | None = None) -> tuple[Tour, ...]:
    """Every tour whose best-case length is at most ``v*`` (lexicographic order).

    Prefixes from city 0 are extended one city at a time in numpy batches; a
    prefix is dropped once its lower length plus a lower bound on the
    remaining edges exceeds ``v*``.
    """
    _require_interval(inst)
    n = inst.n
    _check_cap(n, _cap(HYPOGRAPH_CAP), "hypograph enumeration")
    if v_star is None:
        v_star = maximin_tour(inst)[1]
    lo, _ = inst.time_bounds()
    limit = v_star + TOL
    # past the first step every unvisited city is entered once from a
    # non-start city, and the tour closes with one edge into city 0
    min_in = np.zeros(n)
    for u in range(1, n):
        min_in[u] = min(lo[v, u] for v in range(1, n) if v != u)
    back = lo[:, 0]
    bits = 1 << np.arange(n, dtype=np.int64)
    found: list[np.ndarray] = []

    def expand(paths, mask, acc, bound_in):
        depth = paths.shape[1]
        cur = paths[:, -1]
        free = (mask[:, None] & bits[None, 1:]) == 0
        step = acc[:, None] + lo[cur][:, 1:]
        rest = bound_in[:, None] - min_in[None, 1:]
        ok = free & (step + rest <= limit)
        rows, cols = np.nonzero(ok)
        k = cols + 1
        new_paths = np.concatenate([paths[rows], k[:, None].astype(paths.dtype)], axis=1)
        new_acc = step[rows, cols]
        if depth == n - 1:
            close = new_acc + back[k] <= limit
            # keep one orientation: the second city precedes the last
            close &= new_paths[:, 1] < new_paths[:, -1]
            found.append(new_paths[close])
            return
        new_mask = mask[rows] | bits[k]
        new_bound = rest[rows, cols]
        remaining = ((1 << n) - 1) ^ new_mask
        free_after = (remaining[:, None] & bits[None, :]) != 0
        # the closing edge into city 0 leaves from some unvisited city
        close_min = np.where(free_after, back[None, :], np.inf).min(axis=1)
        alive = new_acc + new_bound + close_min <= limit
        # the last city must exceed the second for the kept orientation
        top = np.where(free_after, np.arange(n)[None, :], -1).max(axis=1)
        alive &= top > new_paths[:, 1]
        idx = np.flatnonzero(alive)
        for lo_i in range(0, idx.size, _CHUNK):
            sel = idx[lo_i:lo_i + _CHUNK]
            expand(new_paths[sel], new_mask[sel], new_acc[sel], new_bound[sel])

    expand(
        np.zeros((1, 1), dtype=np.int8),
        np.ones(1, dtype=np.int64),
        np.zeros(1),
        np.array([min_in[1:].sum()]),
    )
    orders = np.concatenate(found) if found else np.zeros((0, n), dtype=np.int8)
    orders = orders[np.lexsort(orders.T[::-1])]
    return tuple(Tour._canonical(tuple(row)) for row in orders.tolist())


def edge_level_dominance(inst: UtspInstance, x: Tour, w: Tour) -> bool:
    """True iff ``w`` is strictly shorter than ``x`` for every realization."""
    _require_interval(inst)
    lo, hi = inst.time_bounds()
    ex, ew = x.edges, w.edges
    gap = sum(lo[e] for e in ex - ew) - sum(hi[e] for e in ew - ex)
    return bool(gap > TOL)


def _incidence(tours, n: int) -> np.ndarray:
    index = {e: k for k, e in enumerate(itertools.combinations(range(n), 2))}
    inc = np.zeros((len(tours), len(index)))
    for r, t in enumerate(tours):
        inc[r, [index[e] for e in t.edges]] = 1.0
    return inc


def maximal_tours_edge_level(inst: UtspInstance, hypograph: tuple[Tour, ...] | None = None) -> tuple[Tour, ...]:
    """Tours not dominated at edge level by any other tour.

    Edge-level dominance is a strict partial order and every tour outside the
    hypograph set is dominated by the maximin tour, so it suffices to compare
    hypograph-maximal tours among themselves.  A dominated tour is dominated
    by some maximal one, which keeps the comparisons to roughly
    ``|hypograph| * |maximal|``.
    """
    _require_interval(inst)
    n = inst.n
    _check_cap(n, edge_cap(), "edge-level enumeration")
    if hypograph is None:
        hypograph = maximal_tours_hypograph(inst)
    tours = list(hypograph)
    lo, hi = inst.time_bounds()
    iu = np.triu_indices(n, 1)
    width = (hi - lo)[iu]
    inc = _incidence(tours, n)
    lower = inc @ lo[iu]
    upper = inc @ hi[iu]
    # w dominating x forces upper(w) < upper(x): scan in that order and
    # test each block against the maximal tours found so far and itself
    order = np.argsort(upper, kind="stable")
    kept: list[int] = []
    chunk = 1024
    for start in range(0, len(order), chunk):
        block = order[start:start + chunk]
        rivals = np.concatenate([np.array(kept, dtype=np.intp), block])
        X = inc[block]
        # min over the box of cost(x) - cost(w): shared edges contribute lo - hi
        gap = lower[block, None] - upper[None, rivals] + (X * width) @ inc[rivals].T
        dominated = (gap > TOL).any(axis=1)
        kept.extend(int(i) for i in block[~dominated])
    return tuple(tours[i] for i in sorted(kept))


def maximal_tour_report(inst: UtspInstance, variant: str = "both") -> MaximalTourReport:
    tour, v_star = maximin_tour(inst)
    hyp = maximal_tours_hypograph(inst, v_star)
    edge = maximal_tours_edge_level(inst, hyp) if variant in ("edge", "both") else None
    return MaximalTourReport(tour, v_star, hyp, edge)


# ------------------------------------------------------ probabilistic case


def expected_optimal_tour(inst: UtspInstance, method: str = "held_karp") -> tuple[Tour, float]:
    """Crisp TSP on expected travel times."""
    if inst.kind == "interval":
        raise ValueError("expected-value tour needs a distribution (or crisp) instance")
    return crisp_tsp(inst.expected_times(), method)


def time_box(inst: UtspInstance) -> tuple[Interval, ...]:
    """Travel-time intervals of the edges ``(i, j)``, ``i < j``, row-major."""
    return tuple(interval_bounds(t) for t in inst.edge_times().values())
