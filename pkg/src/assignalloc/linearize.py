"""Two-segment linearization of a concave curve under a target allocation.

Given a curve f and its super-optimal allocation c, the linearized curve rises
linearly from the origin to (c, f(c)) and stays flat beyond.  It never exceeds
f anywhere on the integer grid, matches it exactly at c, and summing the peaks
over all threads reproduces the super-optimal value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .allocation import SuperOptimalAllocation
from .model import Instance, UtilityFunction


@dataclass(frozen=True)
class LinearizedFunction:
    """g(x) = slope * x for x < cap, g(x) = peak for x >= cap.

    A zero cap degenerates to the constant f(0); the stored slope is then an
    unused +inf sentinel.
    """

    cap: int
    peak: float
    slope: float

    def value(self, x: int | float) -> float:
        if x >= self.cap:
            return self.peak
        return self.slope * x


def linearize(f: UtilityFunction, c_hat: int) -> LinearizedFunction:
    """Build the two-segment envelope of ``f`` pinned at ``c_hat``."""
    if not 0 <= c_hat <= f.domain_end:
        raise ValueError(f"c_hat={c_hat} outside [0, {f.domain_end}]")
    peak = f.value(c_hat)
    slope = math.inf if c_hat == 0 else peak / c_hat
    return LinearizedFunction(cap=int(c_hat), peak=peak, slope=slope)


def linearize_all(
    inst: Instance, so: SuperOptimalAllocation
) -> list[LinearizedFunction]:
    return [linearize(f, c) for f, c in zip(inst.threads, so.c_hat)]
