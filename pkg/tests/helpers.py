"""Shared test utilities: small random instances built independently of the
package's own generators, so oracle comparisons do not share a code path with
what they check."""

from __future__ import annotations

import numpy as np

from assignalloc import Instance, UtilityFunction


def random_concave(rng: np.random.Generator, c: int, zero_at_origin: bool = True) -> UtilityFunction:
    """Valid concave nondecreasing curve from sorted-descending unit gains."""
    gains = np.sort(rng.random(c))[::-1]
    if rng.random() < 0.3:
        flat = int(rng.integers(0, c // 2 + 1))
        if flat:
            gains[c - flat:] = 0.0
    y0 = 0.0 if zero_at_origin else float(rng.random())
    ys = y0 + np.concatenate([[0.0], np.cumsum(gains)])
    return UtilityFunction(tuple((i, float(v)) for i, v in enumerate(ys)))


def random_instance(
    rng: np.random.Generator,
    n_max: int = 8,
    m_max: int = 4,
    c_max: int = 16,
    allow_offset: bool = False,
) -> Instance:
    n = int(rng.integers(1, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    c = int(rng.integers(2, c_max + 1))
    zero = not (allow_offset and rng.random() < 0.25)
    threads = tuple(random_concave(rng, c, zero_at_origin=zero) for _ in range(n))
    return Instance(servers=m, capacity=c, threads=threads)
