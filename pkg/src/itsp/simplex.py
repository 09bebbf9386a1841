"""Dense two-phase primal simplex with Bland's rule.

Solves ``max/min c.x  s.t.  A x <= b, x >= 0``.  Rows with negative right-hand
side get an artificial variable; phase 1 minimizes the artificial sum, phase 2
optimizes the real objective with artificials barred from entering.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .model import Polyhedron

PIVOT_TOL = 1e-9
VALUE_TOL = 1e-6


class NumericFailure(RuntimeError):
    """The solver could not reach a trustworthy outcome."""


@dataclass(frozen=True)
class LpOutcome:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Optional[np.ndarray] = None
    value: Optional[float] = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"

    @classmethod
    def infeasible(cls) -> "LpOutcome":
        return cls("infeasible")

    @classmethod
    def unbounded(cls) -> "LpOutcome":
        return cls("unbounded")


def _choose_entering(reduced: np.ndarray, allowed: np.ndarray) -> int:
    candidates = np.flatnonzero((reduced > PIVOT_TOL) & allowed)
    return int(candidates[0]) if candidates.size else -1


def _choose_leaving(T: np.ndarray, basis: list[int], col: int) -> int:
    column = T[:, col]
    rows = np.flatnonzero(column > PIVOT_TOL)
    if rows.size == 0:
        return -1
    ratios = T[rows, -1] / column[rows]
    best = ratios.min()
    ties = rows[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
    return int(min(ties, key=lambda r: basis[r]))


def _pivot(T: np.ndarray, basis: list[int], row: int, col: int):
    piv = T[row, col]
    if abs(piv) < 1e-11:
        raise NumericFailure(f"pivot magnitude {abs(piv):.3g} below 1e-11")
    T[row] /= piv
    for r in range(T.shape[0]):
        if r != row and T[r, col] != 0.0:
            T[r] -= T[r, col] * T[row]
    basis[row] = col


def _optimize(T: np.ndarray, basis: list[int], cost: np.ndarray, allowed: np.ndarray) -> bool:
    """Maximize ``cost . vars`` in place.  Returns False if unbounded."""
    max_iter = 50 * (T.shape[0] + T.shape[1]) + 1000
    for _ in range(max_iter):
        reduced = cost - cost[basis] @ T[:, :-1]
        col = _choose_entering(reduced, allowed)
        if col < 0:
            return True
        row = _choose_leaving(T, basis, col)
        if row < 0:
            return False
        _pivot(T, basis, row, col)
        if not np.all(np.isfinite(T)):
            raise NumericFailure("non-finite tableau entries")
    raise NumericFailure("iteration limit reached; cycling suspected")


def lp_solve(poly: Polyhedron, c: Sequence[float], sense: str = "maximize") -> LpOutcome:
    """Optimize ``c.x`` over ``poly``.  Deterministic for a fixed input."""
    A, b = np.array(poly.A, dtype=float), np.array(poly.b, dtype=float)
    m, n = A.shape
    c = np.asarray(c, dtype=float)
    if c.shape != (n,):
        raise ValueError(f"objective has {c.shape} entries, polyhedron has {n} variables")
    if sense not in ("maximize", "minimize"):
        raise ValueError(f"unknown sense {sense!r}")
    obj = c if sense == "maximize" else -c

    neg = np.flatnonzero(b < 0)
    k = neg.size
    width = n + m + k
    T = np.zeros((m, width + 1))
    T[:, :n] = A
    T[np.arange(m), n + np.arange(m)] = 1.0
    T[:, -1] = b
    T[neg] *= -1.0
    basis = [n + i for i in range(m)]
    for a, r in enumerate(neg):
        T[r, n + m + a] = 1.0
        basis[r] = n + m + a

    is_artificial = np.zeros(width, dtype=bool)
    is_artificial[n + m:] = True

    if k:
        cost1 = np.where(is_artificial, -1.0, 0.0)
        _optimize(T, basis, cost1, np.ones(width, dtype=bool))
        infeasibility = T[[r for r, v in enumerate(basis) if is_artificial[v]], -1].sum()
        if infeasibility > PIVOT_TOL * max(1.0, np.abs(b).max()):
            return LpOutcome.infeasible()
        # drive zero-level artificials out of the basis; drop redundant rows
        keep = []
        for r in range(m):
            if is_artificial[basis[r]]:
                cols = np.flatnonzero((np.abs(T[r, :n + m]) > PIVOT_TOL))
                if cols.size == 0:
                    continue
                _pivot(T, basis, r, int(cols[0]))
            keep.append(r)
        T = T[keep]
        basis = [basis[r] for r in keep]

    cost2 = np.zeros(width)
    cost2[:n] = obj
    if not _optimize(T, basis, cost2, ~is_artificial):
        return LpOutcome.unbounded()

    x = np.zeros(width)
    x[basis] = T[:, -1]
    x = np.maximum(x[:n], 0.0)
    return LpOutcome("optimal", x, float(c @ x))
