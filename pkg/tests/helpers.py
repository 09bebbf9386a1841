"""Random instance builders shared by the test modules."""

import numpy as np

from itsp.instances import generate_instance, instance_from_document
from itsp.model import Crisp, Discrete, Interval, LpuuInstance, UtspInstance

E1_EDGES = {(1, 2): (1, 2), (1, 3): (4, 6), (1, 4): (2, 3), (2, 3): (2, 3), (2, 4): (5, 7), (3, 4): (1, 2)}
E2_EDGES = {(1, 2): (1, 5), (3, 4): (1, 5), (1, 3): (2, 3), (2, 4): (2, 3), (1, 4): (2, 3), (2, 3): (2, 3)}


def utsp_from_edges(edges, n=4, speed=1.0, name=None):
    grid = [[None] * n for _ in range(n)]
    for (i, j), (lo, hi) in edges.items():
        grid[i - 1][j - 1] = grid[j - 1][i - 1] = Interval(lo, hi)
    return UtspInstance(grid, speed, name)


def utsp_from_matrices(lo, hi):
    n = lo.shape[0]
    grid = [[None if i == j else Interval(float(lo[i, j]), float(hi[i, j])) for j in range(n)] for i in range(n)]
    return UtspInstance(grid)


def random_utsp(seed, n, kind="interval", spread=2.0):
    return instance_from_document(generate_instance("utsp", kind, n, seed, spread=spread))


def random_integer_utsp(rng, n, max_width=3, max_center=6):
    """Integer-valued interval instance; small ranges force ties."""
    lo = np.zeros((n, n))
    hi = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            a = int(rng.integers(0, max_center))
            b = a + int(rng.integers(0, max_width + 1))
            lo[i, j] = lo[j, i] = a
            hi[i, j] = hi[j, i] = b
    return utsp_from_matrices(lo, hi)


def point_mass_utsp(inst: UtspInstance) -> UtspInstance:
    """Replace every degenerate interval by a one-point discrete distribution."""
    grid = [
        [None if u is None else Discrete((u.lo,), (1.0,)) for u in row] for row in inst.durations
    ]
    return UtspInstance(grid, inst.speed)


def random_interval_lpuu(rng, m, n, penalty=-1e9, sense="maximize"):
    """Interval LPUU with mixed-sign data so inner/outer regions vary.

    Roughly: most instances have a bounded nonempty inner region, some have an
    empty inner region, some are unbounded.
    """
    c = np.round(rng.uniform(-1.0, 4.0, n), 3)
    flavour = rng.random()
    Y, Z = [], []
    for _ in range(m):
        row = []
        for _ in range(n):
            center = rng.uniform(-0.5, 3.0) if flavour < 0.85 else rng.uniform(-2.0, 1.0)
            half = rng.uniform(0.0, 1.0) * (rng.random() < 0.7)
            lo, hi = round(center - half, 3), round(center + half, 3)
            row.append(Interval(lo, hi) if hi > lo else Crisp(lo))
        Y.append(row)
        zc = rng.uniform(-1.0, 10.0)
        zh = rng.uniform(0.0, 2.0)
        Z.append(Interval(round(zc - zh, 3), round(zc + zh, 3)))
    # a cap row keeps most instances bounded
    if flavour < 0.9:
        Y.append([Interval(1.0, 1.0 + round(rng.uniform(0, 0.5), 3)) for _ in range(n)])
        Z.append(Interval(round(rng.uniform(5, 10), 3), round(rng.uniform(10, 15), 3)))
    return LpuuInstance(tuple(c), Y, Z, sense, penalty)


def lattice_lpuu(rng, max_uncertain=4, penalty=-1e7):
    """Small interval LPUU with integer endpoints and at most ``max_uncertain``
    non-degenerate entries, for grid-search oracles."""
    m = int(rng.integers(1, 3))
    n = int(rng.integers(1, 3))
    slots = [("Y", k, j) for k in range(m) for j in range(n)] + [("Z", k, None) for k in range(m)]
    n_unc = int(rng.integers(1, min(max_uncertain, len(slots)) + 1))
    chosen = set(map(int, rng.choice(len(slots), n_unc, replace=False)))
    Y = [[None] * n for _ in range(m)]
    Z = [None] * m
    for idx, (which, k, j) in enumerate(slots):
        if which == "Y":
            lo = int(rng.integers(0, 4))
        else:
            lo = int(rng.integers(-2, 8))
        width = int(rng.choice([1, 2, 3, 7])) if idx in chosen else 0
        u = Interval(float(lo), float(lo + width)) if width else Crisp(float(lo))
        if which == "Y":
            Y[k][j] = u
        else:
            Z[k] = u
    c = [float(v) for v in rng.integers(-2, 5, n)]
    return LpuuInstance(c, Y, Z, "maximize", penalty)
