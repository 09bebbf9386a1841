"""Lower/upper and linear previsions of affine gambles.

A vacuous prevision on a box is the min (lower) or max (upper) of the gamble
over the box.  For affine gambles the extremes sit at corners and separate by
coordinate, so both sides have exact closed forms.  A linear prevision is the
expectation under independent per-coordinate distributions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .model import DistributionSpec, Interval, mean

Box = tuple[Interval, ...]


@dataclass(frozen=True)
class AffineGamble:
    """The gamble ``g(u) = coeffs . u + offset``."""

    coeffs: tuple[float, ...]
    offset: float = 0.0

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.coeffs)
        if not all(math.isfinite(a) for a in coeffs) or not math.isfinite(self.offset):
            raise ValueError("gamble coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __call__(self, u: Sequence[float]) -> float:
        if len(u) != self.dim:
            raise ValueError(f"expected a point of dimension {self.dim}")
        return math.fsum(a * v for a, v in zip(self.coeffs, u)) + self.offset

    def __add__(self, other):
        if isinstance(other, AffineGamble):
            if other.dim != self.dim:
                raise ValueError("gamble dimensions differ")
            return AffineGamble(
                tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
                self.offset + other.offset,
            )
        return AffineGamble(self.coeffs, self.offset + float(other))

    __radd__ = __add__

    def __neg__(self):
        return AffineGamble(tuple(-a for a in self.coeffs), -self.offset)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar: float):
        s = float(scalar)
        return AffineGamble(tuple(s * a for a in self.coeffs), s * self.offset)

    __rmul__ = __mul__

    @classmethod
    def constant(cls, value: float, dim: int) -> "AffineGamble":
        return cls((0.0,) * dim, value)


def _check_dim(g: AffineGamble, n: int):
    if g.dim != n:
        raise ValueError(f"gamble has dimension {g.dim}, box/model has {n}")


def lower_vacuous(g: AffineGamble, box: Box) -> float:
    _check_dim(g, len(box))
    return math.fsum(min(a * iv.lo, a * iv.hi) for a, iv in zip(g.coeffs, box)) + g.offset


def upper_vacuous(g: AffineGamble, box: Box) -> float:
    _check_dim(g, len(box))
    return math.fsum(max(a * iv.lo, a * iv.hi) for a, iv in zip(g.coeffs, box)) + g.offset


def vacuous_prevision(g: AffineGamble, box: Box, side: str = "lower") -> float:
    """Min (``side="lower"``) or max (``side="upper"``) of ``g`` over ``box``."""
    if side == "lower":
        return lower_vacuous(g, box)
    if side == "upper":
        return upper_vacuous(g, box)
    raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")


def linear_prevision(g: AffineGamble, dists: Sequence[DistributionSpec]) -> float:
    """Expectation of ``g`` with coordinate ``k`` distributed as ``dists[k]``."""
    _check_dim(g, len(dists))
    return math.fsum(a * mean(d) for a, d in zip(g.coeffs, dists)) + g.offset
