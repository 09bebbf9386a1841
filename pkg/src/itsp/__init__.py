"""Maximin and maximal solutions for TSP and LP problems with uncertain coefficients."""

from .model import (
    Crisp,
    Discrete,
    InstanceError,
    Interval,
    LpuuInstance,
    Normal,
    Polyhedron,
    Tour,
    Uniform,
    UtspInstance,
    canonical_tours,
    interval_bounds,
    travel_time,
    validate_instance,
)
from .simplex import LpOutcome, NumericFailure, lp_solve

__version__ = "0.1.0"
