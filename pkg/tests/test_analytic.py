import math

import numpy as np
import pytest
import sympy

from curvspec.analytic import (
    AnalyticSpectrumSpec,
    circle_spectrum,
    fd_interval_eigenvalues,
    harmonic_multiplicity,
    interval_spectrum,
    sphere_spectrum,
)
from curvspec.errors import InvalidArgument


def test_circle_quarter():
    s = circle_spectrum(1.0, g=0.25)
    assert s.lam(1) == pytest.approx(math.pi**2, rel=1e-15)
    assert s.lam(2) == pytest.approx(5 * math.pi**2, rel=1e-15)
    assert s.lam(2) / s.lam(1) == pytest.approx(5.0, rel=1e-15)
    assert s.multiplicities[0] == 1 and np.all(s.multiplicities[1:] == 2)


def test_circle_other_cases():
    assert circle_spectrum(1.0).lam(1) == 0.0
    s = circle_spectrum(2 * math.pi, g=1.0, level_cap=5)
    np.testing.assert_allclose(s.levels, np.arange(6) ** 2 + 1, rtol=1e-14)
    with pytest.raises(InvalidArgument):
        circle_spectrum(0.0)


def test_sphere_quarter_levels():
    s = sphere_spectrum(2, g=0.25, level_cap=3)
    np.testing.assert_allclose(s.levels, [1, 3, 7, 13])
    m = np.arange(1, 5)
    np.testing.assert_allclose(s.levels, m * m - m + 1)


@pytest.mark.parametrize("d", [1, 2, 3, 5])
@pytest.mark.parametrize("g", [0.0, 0.25, 1.0])
def test_sphere_first_two(d, g):
    s = sphere_spectrum(d, g=g, level_cap=3)
    assert s.lam(1) == pytest.approx(g * d * d, abs=1e-14)
    assert s.levels[1] == pytest.approx(g * d * d + d, rel=1e-14)


def test_sphere_counting():
    s = sphere_spectrum(2, g=0.0, level_cap=15)
    np.testing.assert_array_equal(s.multiplicities, 2 * np.arange(16) + 1)
    np.testing.assert_array_equal(np.cumsum(s.multiplicities), (np.arange(16) + 1) ** 2)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 6])
def test_harmonic_multiplicity_against_polynomial_count(d):
    # dim of homogeneous degree-l polynomials in d+1 variables minus those of degree l-2
    for level in range(7):
        count = math.comb(level + d, d) - (math.comb(level - 2 + d, d) if level >= 2 else 0)
        assert harmonic_multiplicity(d, level) == count


def test_harmonic_multiplicity_symbolic_d3():
    # S^3: (l+1)^2
    l = sympy.symbols("l", integer=True, nonnegative=True)
    expr = sympy.binomial(l + 3, 3) - sympy.binomial(l + 1, 3)
    assert sympy.expand(sympy.expand_func(expr)) == sympy.expand((l + 1) ** 2)
    for level in range(8):
        assert harmonic_multiplicity(3, level) == (level + 1) ** 2


def test_sphere_radius_scaling():
    a = sphere_spectrum(2, g=0.3, radius=1.0, level_cap=5)
    b = sphere_spectrum(2, g=0.3, radius=2.0, level_cap=5)
    np.testing.assert_allclose(b.values, a.values / 4, rtol=1e-15)


def test_interval():
    np.testing.assert_allclose(interval_spectrum(math.pi, 3).values, [1, 4, 9], rtol=1e-15)
    np.testing.assert_allclose(interval_spectrum(1.0, 2).values, [math.pi**2, 4 * math.pi**2])
    np.testing.assert_allclose(interval_spectrum(2.0).values, interval_spectrum(1.0).values / 4, rtol=1e-15)
    with pytest.raises(InvalidArgument):
        interval_spectrum(-1.0)


def test_fd_interval_matches_dense_matrix():
    n, L = 20, 2.0
    ds = L / (n + 1)
    T = (np.diag(np.full(n, 2.0)) - np.eye(n, k=1) - np.eye(n, k=-1)) / ds**2
    np.testing.assert_allclose(fd_interval_eigenvalues(L, n), np.linalg.eigvalsh(T), rtol=1e-12)


def test_spec_object():
    s = AnalyticSpectrumSpec("sphere", g=0.25, dim=2, level_cap=4).spectrum()
    assert s.source == "analytic" and s.ds is None
    assert AnalyticSpectrumSpec("circle", length=1.0).spectrum().lam(1) == 0.0
    assert AnalyticSpectrumSpec("interval", length=math.pi).spectrum().lam(1) == pytest.approx(1.0)
    with pytest.raises(InvalidArgument):
        AnalyticSpectrumSpec("torus")
    with pytest.raises(InvalidArgument):
        AnalyticSpectrumSpec("sphere", level_cap=0)
