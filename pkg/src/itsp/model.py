"""Domain types shared by the solvers.

Uncertain coefficients are one of five frozen dataclasses (``Crisp``,
``Interval``, ``Uniform``, ``Normal``, ``Discrete``).  Instances record a
single uncertainty *kind*: ``"crisp"``, ``"interval"`` or ``"dist"``.  Crisp
entries may appear inside interval or distribution instances (they are the
degenerate member of both families), but interval and distribution entries
never mix.

Tours are stored 0-based (city 0 is the fixed start); the CLI and reports
render them 1-based.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

TOL = 1e-9
DEFAULT_X_MAX = 1e6


class InstanceError(ValueError):
    """Raised when an instance violates a type invariant.

    ``path`` names the offending field, e.g. ``durations[0][1]``.
    """

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


def _as_floats(obj, *names):
    for name in names:
        object.__setattr__(obj, name, float(getattr(obj, name)))


@dataclass(frozen=True)
class Crisp:
    v: float

    def __post_init__(self):
        _as_floats(self, "v")


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        _as_floats(self, "lo", "hi")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InstanceError("interval bounds must be finite")
        if self.lo > self.hi:
            raise InstanceError(f"interval lo={self.lo} > hi={self.hi}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, v: float) -> bool:
        return self.lo - TOL <= v <= self.hi + TOL


@dataclass(frozen=True)
class Uniform:
    a: float
    b: float

    def __post_init__(self):
        _as_floats(self, "a", "b")
        if self.a > self.b:
            raise InstanceError(f"uniform requires a <= b, got a={self.a}, b={self.b}")


@dataclass(frozen=True)
class Normal:
    mu: float
    sigma: float

    def __post_init__(self):
        _as_floats(self, "mu", "sigma")
        if not self.sigma > 0:
            raise InstanceError(f"normal requires sigma > 0, got {self.sigma}")


@dataclass(frozen=True)
class Discrete:
    values: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        if len(self.values) == 0 or len(self.values) != len(self.probs):
            raise InstanceError("discrete requires matching, nonempty values and probs")
        if any(p < 0 for p in self.probs):
            raise InstanceError("discrete probs must be nonnegative")
        if abs(math.fsum(self.probs) - 1.0) > 1e-12:
            raise InstanceError("discrete probs must sum to 1")


DistributionSpec = Union[Uniform, Normal, Discrete]
UncertainScalar = Union[Crisp, Interval, Uniform, Normal, Discrete]

_DIST_TYPES = (Uniform, Normal, Discrete)


def scalar_kind(u: UncertainScalar) -> str:
    if isinstance(u, Crisp):
        return "crisp"
    if isinstance(u, Interval):
        return "interval"
    if isinstance(u, _DIST_TYPES):
        return "dist"
    raise TypeError(f"not an uncertain scalar: {u!r}")


def combined_kind(entries: Iterable[tuple[str, UncertainScalar]]) -> str:
    """Kind of a collection of (path, scalar) pairs; rejects interval/dist mixes."""
    seen: dict[str, str] = {}
    for path, u in entries:
        seen.setdefault(scalar_kind(u), path)
    if "interval" in seen and "dist" in seen:
        raise InstanceError(
            "mixed uncertainty kinds (interval and distribution entries)",
            seen["dist"],
        )
    if "interval" in seen:
        return "interval"
    if "dist" in seen:
        return "dist"
    return "crisp"


def travel_time(d: UncertainScalar, speed: float) -> UncertainScalar:
    """Divide an uncertain distance by a constant speed."""
    if not speed > 0:
        raise ValueError(f"speed must be positive, got {speed}")
    if isinstance(d, Crisp):
        return Crisp(d.v / speed)
    if isinstance(d, Interval):
        return Interval(d.lo / speed, d.hi / speed)
    if isinstance(d, Uniform):
        return Uniform(d.a / speed, d.b / speed)
    if isinstance(d, Normal):
        return Normal(d.mu / speed, d.sigma / speed)
    if isinstance(d, Discrete):
        return Discrete(tuple(v / speed for v in d.values), d.probs)
    raise TypeError(f"not an uncertain scalar: {d!r}")


def interval_bounds(u: UncertainScalar) -> Interval:
    """Support of ``u`` as a closed interval.

    Raises ``ValueError("unbounded support")`` for normal distributions.
    """
    if isinstance(u, Crisp):
        return Interval(u.v, u.v)
    if isinstance(u, Interval):
        return u
    if isinstance(u, Uniform):
        return Interval(u.a, u.b)
    if isinstance(u, Discrete):
        return Interval(min(u.values), max(u.values))
    if isinstance(u, Normal):
        raise ValueError("unbounded support")
    raise TypeError(f"not an uncertain scalar: {u!r}")


def mean(u: UncertainScalar) -> float:
    """Expectation of a crisp value or distribution."""
    if isinstance(u, Crisp):
        return u.v
    if isinstance(u, Uniform):
        return 0.5 * (u.a + u.b)
    if isinstance(u, Normal):
        return u.mu
    if isinstance(u, Discrete):
        return math.fsum(v * p for v, p in zip(u.values, u.probs))
    raise ValueError(f"no expectation for {type(u).__name__} without a probability model")


def sample(u: UncertainScalar, rng: np.random.Generator, size: int) -> np.ndarray:
    if isinstance(u, Crisp):
        return np.full(size, u.v)
    if isinstance(u, Uniform):
        return rng.uniform(u.a, u.b, size)
    if isinstance(u, Normal):
        return rng.normal(u.mu, u.sigma, size)
    if isinstance(u, Discrete):
        return rng.choice(np.asarray(u.values), size=size, p=np.asarray(u.probs))
    raise ValueError(f"cannot sample {type(u).__name__}; a distribution is required")


@dataclass(frozen=True)
class Polyhedron:
    """The crisp system ``A x <= b, x >= 0``."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.A, dtype=float))
        b = np.asarray(self.b, dtype=float).reshape(-1)
        if A.shape[0] != b.shape[0]:
            raise ValueError(f"A has {A.shape[0]} rows but b has {b.shape[0]} entries")
        A.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape

    def contains(self, x: Sequence[float], tol: float = TOL) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.A.shape[1],):
            raise ValueError(f"expected a point of dimension {self.A.shape[1]}")
        return bool(np.all(x >= -tol) and np.all(self.A @ x <= self.b + tol))

    def __eq__(self, other):
        if not isinstance(other, Polyhedron):
            return NotImplemented
        return np.array_equal(self.A, other.A) and np.array_equal(self.b, other.b)

    __hash__ = None


def _freeze_grid(rows) -> tuple[tuple, ...]:
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class LpuuInstance:
    """``max/min c.x  s.t.  Y x <= Z, x >= 0`` with uncertain ``Y`` and ``Z``.

    Structural invariants (dimensions, single uncertainty kind) are checked on
    construction.  The penalty bound is checked by :func:`validate_instance`,
    because it depends on the configured decision box.
    """

    c: tuple[float, ...]
    Y: tuple[tuple[UncertainScalar, ...], ...]
    Z: tuple[UncertainScalar, ...]
    sense: str = "maximize"
    penalty: float = -1e9
    name: str | None = None
    kind: str = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(float(v) for v in self.c))
        object.__setattr__(self, "Y", _freeze_grid(self.Y))
        object.__setattr__(self, "Z", tuple(self.Z))
        if self.sense not in ("maximize", "minimize"):
            raise InstanceError(f"unknown sense {self.sense!r}", "sense")
        n = len(self.c)
        if n == 0:
            raise InstanceError("objective must have at least one entry", "c")
        if len(self.Y) != len(self.Z):
            raise InstanceError(f"Y has {len(self.Y)} rows but Z has {len(self.Z)}", "Z")
        for k, row in enumerate(self.Y):
            if len(row) != n:
                raise InstanceError(f"row has {len(row)} entries, expected {n}", f"Y[{k}]")
        if not math.isfinite(self.penalty):
            raise InstanceError("penalty must be finite", "penalty")
        entries = [(f"Y[{k}][{j}]", u) for k, row in enumerate(self.Y) for j, u in enumerate(row)]
        entries += [(f"Z[{k}]", u) for k, u in enumerate(self.Z)]
        object.__setattr__(self, "kind", combined_kind(entries))

    @property
    def m(self) -> int:
        return len(self.Z)

    @property
    def n(self) -> int:
        return len(self.c)

    def objective(self) -> np.ndarray:
        """Objective normalized to maximization (``c`` or ``-c``)."""
        c = np.asarray(self.c)
        return c if self.sense == "maximize" else -c

    def bounds(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Elementwise ``(Y_lo, Y_hi, Z_lo, Z_hi)`` of the support box."""
        ylo = np.empty((self.m, self.n))
        yhi = np.empty((self.m, self.n))
        for k, row in enumerate(self.Y):
            for j, u in enumerate(row):
                iv = interval_bounds(u)
                ylo[k, j], yhi[k, j] = iv.lo, iv.hi
        zb = [interval_bounds(u) for u in self.Z]
        zlo = np.array([iv.lo for iv in zb], dtype=float)
        zhi = np.array([iv.hi for iv in zb], dtype=float)
        return ylo, yhi, zlo, zhi

    def with_penalty(self, penalty: float) -> "LpuuInstance":
        return LpuuInstance(self.c, self.Y, self.Z, self.sense, penalty, self.name)


@dataclass(frozen=True)
class UtspInstance:
    """Symmetric TSP with uncertain durations and constant speed.

    ``durations[i][i]`` is ``None``.  City 0 is the start.
    """

    durations: tuple[tuple[UncertainScalar | None, ...], ...]
    speed: float = 1.0
    name: str | None = None
    kind: str = field(init=False)

    def __post_init__(self):
        d = _freeze_grid(self.durations)
        object.__setattr__(self, "durations", d)
        n = len(d)
        if n < 3:
            raise InstanceError(f"need at least 3 cities, got {n}", "durations")
        if not (math.isfinite(self.speed) and self.speed > 0):
            raise InstanceError(f"speed must be positive, got {self.speed}", "speed")
        entries = []
        for i, row in enumerate(d):
            if len(row) != n:
                raise InstanceError(f"row has {len(row)} entries, expected {n}", f"durations[{i}]")
            for j, u in enumerate(row):
                path = f"durations[{i}][{j}]"
                if i == j:
                    continue
                if u is None:
                    raise InstanceError("missing off-diagonal duration", path)
                if u != d[j][i]:
                    raise InstanceError(f"asymmetric: differs from durations[{j}][{i}]", path)
                if _lower_location(u) < 0:
                    raise InstanceError("durations must be nonnegative", path)
                entries.append((path, u))
        object.__setattr__(self, "kind", combined_kind(entries))

    @property
    def n(self) -> int:
        return len(self.durations)

    def edge_times(self) -> dict[tuple[int, int], UncertainScalar]:
        """Uncertain travel time of every undirected edge ``(i, j)``, ``i < j``."""
        return {
            (i, j): travel_time(self.durations[i][j], self.speed)
            for i, j in itertools.combinations(range(self.n), 2)
        }

    def time_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Symmetric matrices of lower and upper travel times (zero diagonal)."""
        lo = np.zeros((self.n, self.n))
        hi = np.zeros((self.n, self.n))
        for (i, j), t in self.edge_times().items():
            iv = interval_bounds(t)
            lo[i, j] = lo[j, i] = iv.lo
            hi[i, j] = hi[j, i] = iv.hi
        return lo, hi

    def expected_times(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        for (i, j), t in self.edge_times().items():
            out[i, j] = out[j, i] = mean(t)
        return out


def _lower_location(u: UncertainScalar) -> float:
    # normal entries are judged by their mean
    if isinstance(u, Normal):
        return u.mu
    return interval_bounds(u).lo


@dataclass(frozen=True, order=True)
class Tour:
    """A cyclic tour as a permutation of ``0..n-1`` starting at city 0.

    Construction canonicalizes orientation so that ``order[1] < order[-1]``;
    the two directions of the same cycle compare equal.
    """

    order: tuple[int, ...]

    def __post_init__(self):
        order = tuple(int(c) for c in self.order)
        n = len(order)
        if n < 3 or sorted(order) != list(range(n)):
            raise ValueError(f"not a permutation of 0..{n - 1}: {order}")
        if order[0] != 0:
            raise ValueError("tour must start at city 0")
        if order[1] > order[-1]:
            order = (0,) + order[:0:-1]
        object.__setattr__(self, "order", order)

    @classmethod
    def _canonical(cls, order: tuple[int, ...]) -> "Tour":
        """Skip validation for an order already known to be canonical."""
        t = object.__new__(cls)
        object.__setattr__(t, "order", order)
        return t

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Tour":
        """Build from 1-based city labels, e.g. ``(1, 3, 2, 4)``."""
        return cls(tuple(int(c) - 1 for c in labels))

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(c + 1 for c in self.order)

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        o = self.order
        return frozenset(
            (min(a, b), max(a, b)) for a, b in zip(o, o[1:] + o[:1])
        )

    def length(self, weights: np.ndarray) -> float:
        o = self.order
        return float(sum(weights[a, b] for a, b in zip(o, o[1:] + o[:1])))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.labels)) + ")"


def canonical_tours(n: int) -> Iterator[Tour]:
    """All ``(n-1)!/2`` canonical tours in lexicographic order."""
    if n < 3:
        raise ValueError("need at least 3 cities")
    for rest in itertools.permutations(range(1, n)):
        if rest[0] < rest[-1]:
            yield Tour((0,) + rest)


def validate_instance(inst, x_max: float = DEFAULT_X_MAX, check_penalty: bool = True):
    """Check invariants that need configuration (the penalty bound).

    Structural invariants are enforced by the instance constructors; this adds
    ``penalty < -(1 + sum|c_j| * x_max)`` for LPUU instances.
    """
    if isinstance(inst, LpuuInstance) and check_penalty:
        bound = -(1.0 + sum(abs(v) for v in inst.c) * x_max)
        if not inst.penalty < bound:
            raise InstanceError(
                f"penalty {inst.penalty} must be < {bound} (x_max={x_max})", "penalty"
            )
    elif not isinstance(inst, (LpuuInstance, UtspInstance)):
        raise TypeError(f"not an instance: {type(inst).__name__}")
    return inst
