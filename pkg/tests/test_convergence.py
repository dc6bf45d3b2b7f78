import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from curvspec.convergence import extrapolate, observed_order, richardson_order
from curvspec.errors import InvalidArgument


@settings(max_examples=60, deadline=None)
@given(st.floats(0.5, 6.0), st.floats(0.1, 10.0), st.floats(-5, 5), st.sampled_from([1.5, 2.0, 3.0]))
def test_richardson_recovers_power_law(p, c, limit, ratio):
    h = np.array([1.0, 1 / ratio, 1 / ratio**2]) * 0.1
    q = limit + c * h**p
    assert richardson_order(h, q) == pytest.approx(p, rel=1e-6)
    assert extrapolate(h, q, p) == pytest.approx(limit, abs=1e-9 * (1 + abs(limit)))


def test_observed_order_known_limit():
    h = np.array([0.1, 0.05, 0.025, 0.0125])
    assert observed_order(h, 3 * h**2) == pytest.approx(2.0, rel=1e-12)
    assert observed_order(h, -h**4) == pytest.approx(4.0, rel=1e-12)
    assert math.isnan(observed_order(h, [0.0, 1.0, 1.0, 1.0]))


def test_degenerate_sequences():
    h = [0.1, 0.05, 0.025]
    assert math.isnan(richardson_order(h, [1.0, 1.0, 1.0]))
    assert math.isnan(richardson_order(h, [1.0, 2.0, 1.0]))
    with pytest.raises(InvalidArgument):
        richardson_order([0.1, 0.05], [1.0, 2.0])
    with pytest.raises(InvalidArgument):
        observed_order([0.1], [1.0])
