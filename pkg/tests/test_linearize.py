import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from assignalloc import (
    Instance,
    UtilityFunction,
    linearize,
    linearize_all,
    super_optimal,
)
from helpers import random_concave


def test_cap_at_steep_knee():
    f = UtilityFunction(((0, 0.0), (1, 1.0), (2, 1.0)))
    g = linearize(f, 1)
    assert [g.value(x) for x in (0, 1, 2)] == [0.0, 1.0, 1.0]


def test_sqrt_table_full_cap():
    f = UtilityFunction(tuple((u, math.sqrt(u)) for u in range(5)))
    g = linearize(f, 4)
    assert [g.value(x) for x in range(5)] == pytest.approx([0.0, 0.5, 1.0, 1.5, 2.0])
    assert g.value(2) == 1.0 <= f.value(2)


def test_zero_cap_degenerates_to_constant():
    f = UtilityFunction(((0, 0.5), (4, 0.5)))
    g = linearize(f, 0)
    assert g.peak == 0.5
    assert g.slope == math.inf
    assert [g.value(x) for x in range(5)] == [0.5] * 5


def test_cap_out_of_domain_rejected():
    f = UtilityFunction(((0, 0.0), (4, 1.0)))
    with pytest.raises(ValueError):
        linearize(f, 5)
    with pytest.raises(ValueError):
        linearize(f, -1)


def test_peak_matches_curve_exactly():
    rng = np.random.default_rng(3)
    f = random_concave(rng, 12)
    for cap in range(13):
        assert linearize(f, cap).value(cap) == f.value(cap)


def test_peak_sum_reproduces_super_optimal_value():
    rng = np.random.default_rng(5)
    for _ in range(30):
        c = int(rng.integers(2, 16))
        n = int(rng.integers(1, 7))
        inst = Instance(
            servers=int(rng.integers(1, 4)),
            capacity=c,
            threads=tuple(random_concave(rng, c) for _ in range(n)),
        )
        so = super_optimal(inst)
        lin = linearize_all(inst, so)
        assert sum(g.value(c_hat) for g, c_hat in zip(lin, so.c_hat)) == so.value


@settings(max_examples=80, deadline=None, derandomize=True)
@given(seed=st.integers(0, 10_000), c=st.integers(2, 30), frac=st.floats(0, 1))
def test_linearization_never_exceeds_curve(seed, c, frac):
    f = random_concave(np.random.default_rng(seed), c, zero_at_origin=seed % 3 != 0)
    cap = int(round(frac * c))
    g = linearize(f, cap)
    for x in range(c + 1):
        assert g.value(x) <= f.value(x) + 1e-9


@settings(max_examples=40, deadline=None, derandomize=True)
@given(seed=st.integers(0, 10_000), c=st.integers(2, 20))
def test_linearization_monotone_and_concave(seed, c):
    f = random_concave(np.random.default_rng(seed), c)
    cap = int(np.random.default_rng(seed + 1).integers(0, c + 1))
    g = linearize(f, cap)
    values = [g.value(x) for x in range(c + 1)]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
    diffs = [b - a for a, b in zip(values, values[1:])]
    assert all(d2 <= d1 + 1e-9 for d1, d2 in zip(diffs, diffs[1:]))
