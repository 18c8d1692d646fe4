"""Random utility-curve generation, closed-form curves, and the partition
reduction.

Random curves follow a three-anchor recipe: sample two values v >= w >= 0 from
a chosen distribution, pin the curve at (0, 0), (C/2, v) and (C, v + w),
interpolate with a monotone cubic (Fritsch-Carlson tangent limiting), sample
every integer unit, then make the unit increments nonincreasing with a
pool-adjacent-violators pass run separately on each half so both anchors keep
their values.

Seeding: every randomized operation takes an explicit nonnegative integer seed
or a numpy Generator.  Derived streams are spawned as
``default_rng([seed, *path])``; instance generation gives thread i the stream
``(seed, 0, i)`` so threads are independent and reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import isotonic_regression

from .model import Instance, UtilityFunction

DIST_KINDS = ("uniform", "normal", "powerlaw", "discrete", "power_beta")


class OddSumError(ValueError):
    """Partition numbers with an odd sum admit no balanced split."""


@dataclass(frozen=True)
class DistSpec:
    """Distribution for the anchor values v, w (or the exponent curve).

    Only the fields belonging to ``kind`` are meaningful: uniform uses
    (lo, hi), normal (mean, sd) with negative draws rejected, powerlaw
    (alpha_exp, x_min, x_max) sampled by truncated inverse CDF, discrete
    (ell, theta, gamma_prob) taking value ell with probability gamma_prob and
    theta * ell otherwise, and power_beta (beta_exp) is the deterministic
    x**beta curve with no sampling at all.
    """

    kind: str
    lo: float = 0.0
    hi: float = 1.0
    mean: float = 1.0
    sd: float = 1.0
    alpha_exp: float = 2.0
    x_min: float = 1.0
    x_max: float = 1000.0
    ell: float = 1.0
    theta: float = 5.0
    gamma_prob: float = 0.85
    beta_exp: float = 0.5

    def __post_init__(self):
        if self.kind not in DIST_KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if self.kind == "uniform" and not 0 <= self.lo < self.hi:
            raise ValueError("uniform requires 0 <= lo < hi")
        if self.kind == "normal" and self.sd <= 0:
            raise ValueError("normal requires sd > 0")
        if self.kind == "powerlaw":
            if self.alpha_exp <= 1:
                raise ValueError("powerlaw requires alpha_exp > 1")
            if not 0 < self.x_min < self.x_max:
                raise ValueError("powerlaw requires 0 < x_min < x_max")
        if self.kind == "discrete":
            if not 0 <= self.gamma_prob <= 1:
                raise ValueError("discrete requires 0 <= gamma_prob <= 1")
            if self.theta < 1:
                raise ValueError("discrete requires theta >= 1")
            if self.ell <= 0:
                raise ValueError("discrete requires ell > 0")
        if self.kind == "power_beta" and not 0 < self.beta_exp < 1:
            raise ValueError("power_beta requires beta_exp in (0, 1)")

    def params(self) -> dict[str, float]:
        match self.kind:
            case "uniform":
                return {"lo": self.lo, "hi": self.hi}
            case "normal":
                return {"mean": self.mean, "sd": self.sd}
            case "powerlaw":
                return {
                    "alpha_exp": self.alpha_exp,
                    "x_min": self.x_min,
                    "x_max": self.x_max,
                }
            case "discrete":
                return {
                    "ell": self.ell,
                    "theta": self.theta,
                    "gamma_prob": self.gamma_prob,
                }
            case _:
                return {"beta_exp": self.beta_exp}

    @classmethod
    def uniform(cls, lo: float = 0.0, hi: float = 1.0) -> "DistSpec":
        return cls(kind="uniform", lo=lo, hi=hi)

    @classmethod
    def normal(cls, mean: float = 1.0, sd: float = 1.0) -> "DistSpec":
        return cls(kind="normal", mean=mean, sd=sd)

    @classmethod
    def powerlaw(
        cls, alpha_exp: float = 2.0, x_min: float = 1.0, x_max: float = 1000.0
    ) -> "DistSpec":
        return cls(kind="powerlaw", alpha_exp=alpha_exp, x_min=x_min, x_max=x_max)

    @classmethod
    def discrete(
        cls, ell: float = 1.0, theta: float = 5.0, gamma_prob: float = 0.85
    ) -> "DistSpec":
        return cls(kind="discrete", ell=ell, theta=theta, gamma_prob=gamma_prob)

    @classmethod
    def power(cls, beta_exp: float = 0.5) -> "DistSpec":
        return cls(kind="power_beta", beta_exp=beta_exp)


def substream(seed: int, *path: int) -> np.random.Generator:
    """Independent generator for (seed, path); same inputs, same stream."""
    entropy = [int(seed), *[int(p) for p in path]]
    if any(e < 0 for e in entropy):
        raise ValueError("seeds and stream path elements must be nonnegative")
    return np.random.default_rng(entropy)


def _draw_one(spec: DistSpec, rng: np.random.Generator) -> float:
    if spec.kind == "uniform":
        return float(rng.uniform(spec.lo, spec.hi))
    if spec.kind == "normal":
        while True:
            x = float(rng.normal(spec.mean, spec.sd))
            if x >= 0:
                return x
    if spec.kind == "powerlaw":
        # Inverse CDF of density ~ x**(-alpha) truncated to [x_min, x_max].
        e = 1.0 - spec.alpha_exp
        a, b = spec.x_min**e, spec.x_max**e
        u = float(rng.random())
        return float((a + u * (b - a)) ** (1.0 / e))
    if spec.kind == "discrete":
        return float(spec.ell if rng.random() < spec.gamma_prob else spec.theta * spec.ell)
    raise ValueError(f"{spec.kind} does not describe an anchor-value distribution")


def sample_vw(spec: DistSpec, rng: np.random.Generator | int) -> tuple[float, float]:
    """Draw the two anchor values, conditioned on 0 <= w <= v by rejection."""
    rng = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    while True:
        v = _draw_one(spec, rng)
        w = _draw_one(spec, rng)
        if w <= v:
            return v, w


def _hermite(y0, y1, m0, m1, h, t):
    # Cubic Hermite on [0, h] evaluated at t (array), tangents in y-units/x-unit.
    s = t / h
    s2 = s * s
    s3 = s2 * s
    return (
        y0 * (2 * s3 - 3 * s2 + 1)
        + h * m0 * (s3 - 2 * s2 + s)
        + y1 * (-2 * s3 + 3 * s2)
        + h * m1 * (s3 - s2)
    )


def _monotone_cubic_grid(v: float, w: float, c: int) -> np.ndarray:
    """Fritsch-Carlson monotone cubic through (0,0), (C/2,v), (C,v+w) sampled
    at every integer unit.  Requires 0 <= w <= v."""
    h = c // 2
    d0 = v / h
    d1 = w / h
    # Interior tangent: harmonic mean, zero if either secant vanishes.
    t1 = 0.0 if (d0 == 0.0 or d1 == 0.0) else 2.0 * d0 * d1 / (d0 + d1)
    # One-sided endpoint tangents, clamped to preserve monotonicity.
    t0 = max(0.0, (3.0 * d0 - d1) / 2.0)
    t2 = max(0.0, (3.0 * d1 - d0) / 2.0)

    left = _hermite(0.0, v, t0, t1, h, np.arange(0, h, dtype=np.float64))
    right = _hermite(v, v + w, t1, t2, c - h, np.arange(0, c - h, dtype=np.float64))
    y = np.concatenate([left, right, [v + w]])
    y[0] = 0.0
    y[h] = v
    y[c] = v + w
    return y


def _nonincreasing(values: np.ndarray) -> np.ndarray:
    if values.size <= 1 or np.all(np.diff(values) <= 0):
        return values
    return isotonic_regression(values, increasing=False).x


def _collapse_to_breakpoints(y: np.ndarray) -> tuple[tuple[int, float], ...]:
    deltas = np.diff(y)
    change = np.nonzero(deltas[1:] != deltas[:-1])[0] + 1
    idx = np.concatenate([[0], change, [len(y) - 1]])
    idx = np.unique(idx)
    return tuple((int(u), float(y[u])) for u in idx)


def utility_from_anchors(
    v: float, w: float, c: int, name: str | None = None
) -> UtilityFunction:
    """Deterministic core of the random-curve recipe for fixed anchors."""
    if c < 2 or c % 2:
        raise ValueError(f"capacity must be an even integer >= 2, got {c}")
    if not 0 <= w <= v:
        raise ValueError(f"anchors need 0 <= w <= v, got v={v}, w={w}")
    y = _monotone_cubic_grid(v, w, c)
    deltas = np.diff(y)
    h = c // 2
    # Concavify each half separately so f(C/2) and f(C) keep their values
    # (pool-adjacent-violators preserves the sum it is run over).
    first = _nonincreasing(deltas[:h])
    second = _nonincreasing(deltas[h:])
    y2 = np.concatenate([[0.0], np.cumsum(np.concatenate([first, second]))])
    return UtilityFunction(_collapse_to_breakpoints(y2), name=name)


def gen_utility(
    spec: DistSpec,
    c: int,
    rng: np.random.Generator | int,
    name: str | None = None,
) -> UtilityFunction:
    """Sample anchors from ``spec`` and build the concave curve over [0, C]."""
    v, w = sample_vw(spec, rng)
    return utility_from_anchors(v, w, c, name=name)


def gen_power_utility(
    beta_exp: float, c: int, name: str | None = None
) -> UtilityFunction:
    """Dense table of f(u) = u**beta, concave and nondecreasing for beta in (0,1)."""
    if not 0 < beta_exp < 1:
        raise ValueError("beta_exp must lie in (0, 1)")
    if c < 1:
        raise ValueError("capacity must be positive")
    u = np.arange(c + 1, dtype=np.float64)
    y = u**beta_exp
    return UtilityFunction(tuple((int(x), float(v)) for x, v in enumerate(y)), name=name)


def gen_instance(
    m: int,
    beta_load: int,
    c: int,
    spec: DistSpec,
    seed: int,
) -> Instance:
    """Instance with n = beta_load * m threads drawn from independent
    substreams (seed, 0, i)."""
    if m < 1 or beta_load < 1:
        raise ValueError("m and beta_load must be positive integers")
    n = beta_load * m
    if spec.kind == "power_beta":
        threads = tuple(
            gen_power_utility(spec.beta_exp, c, name=f"t{i + 1}") for i in range(n)
        )
    else:
        threads = tuple(
            gen_utility(spec, c, substream(seed, 0, i), name=f"t{i + 1}")
            for i in range(n)
        )
    meta = {
        "dist": spec.kind,
        "params": spec.params(),
        "seed": int(seed),
        "beta_load": int(beta_load),
    }
    return Instance(servers=m, capacity=c, threads=threads, meta=meta)


def from_partition(numbers: Sequence[int]) -> tuple[Instance, int]:
    """Two-server instance whose optimum hits sum(numbers) iff the numbers
    split into two halves of equal sum.

    Thread i ramps up with unit slope and caps at its number: reaching the
    target utility requires giving every thread exactly its number, which is
    possible iff a balanced split of the numbers across the two servers
    exists.
    """
    nums = [int(x) for x in numbers]
    if not nums or any(x <= 0 for x in nums):
        raise ValueError("need a non-empty list of positive integers")
    total = sum(nums)
    if total % 2:
        raise OddSumError(f"sum {total} is odd; no balanced split exists")
    c = total // 2
    threads = []
    for i, x in enumerate(nums):
        if x < c:
            bps: tuple[tuple[int, float], ...] = ((0, 0.0), (x, float(x)), (c, float(x)))
        else:
            # A number at or above half the total caps at the capacity.
            bps = ((0, 0.0), (c, float(min(x, c))))
        threads.append(UtilityFunction(bps, name=f"t{i + 1}"))
    inst = Instance(
        servers=2,
        capacity=c,
        threads=tuple(threads),
        meta={"reduction": "partition", "numbers": nums},
    )
    return inst, total
