import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from curvspec.eigensolve import eigenbasis
from curvspec.errors import InvalidArgument, NeedsEmbedding
from curvspec.geometry import CurveGeometry, curve_from_curvature, revolution_from_profile
from curvspec.library import cylinder_profile, sphere_profile
from curvspec.operators import (
    PotentialSpec,
    TridiagonalOperator,
    assemble_curve_hamiltonian,
    assemble_mode_hamiltonian,
    commutator,
    double_commutator,
    momentum_operator,
    position_operators,
)


@pytest.fixture(scope="module")
def circle():
    return curve_from_curvature(2 * math.pi, 1.0, True, 128)


def test_curve_hamiltonian_entries(circle):
    H = assemble_curve_hamiltonian(circle, 0.5)
    inv = 1 / circle.ds**2
    np.testing.assert_allclose(H.diag, 2 * inv + 0.5)
    np.testing.assert_allclose(H.offdiag, -inv)
    assert H.corner == -inv and H.periodic
    np.testing.assert_allclose(H.weights, circle.ds)
    D = H.dense()
    assert np.array_equal(D, D.T)
    assert D[0, -1] == D[-1, 0] == -inv


def test_interval_ground_state():
    geom = curve_from_curvature(0.0, math.pi, False, 1023)
    H = assemble_curve_hamiltonian(geom)
    assert not H.periodic
    lam = eigenbasis(H, 3).values
    np.testing.assert_allclose(lam, [1, 4, 9], rtol=1e-5)


def test_constant_shift_moves_spectrum(circle):
    a = eigenbasis(assemble_curve_hamiltonian(circle, 0.0), 6).values
    b = eigenbasis(assemble_curve_hamiltonian(circle, 2.5), 6).values
    np.testing.assert_allclose(b - a, 2.5, atol=1e-9)


def test_hg_potential_realizes_g_h_squared(circle):
    v = PotentialSpec.hg(0.3).realize(circle)
    assert np.array_equal(v, 0.3 * circle.kappa * circle.kappa)
    assert PotentialSpec.hg(0.3).is_hg
    assert not PotentialSpec.constant(1.0).is_hg
    with pytest.raises(InvalidArgument):
        PotentialSpec("samples")
    with pytest.raises(InvalidArgument):
        PotentialSpec("samples", samples=[1.0, 2.0]).realize(circle)


def test_circle_hg_spectrum_limits():
    # lambda_1 = pi^2 exactly on the grid (up to eps ||H||); lambda_2 -> 5 pi^2
    geom = curve_from_curvature(2 * math.pi, 1.0, True, 1024)
    H = assemble_curve_hamiltonian(geom, PotentialSpec.hg(0.25))
    lam = eigenbasis(H, 3).values
    assert lam[0] == pytest.approx(math.pi**2, abs=1e-14 * H.norm_bound())
    assert lam[1] == pytest.approx(5 * math.pi**2, rel=1e-5)


def test_potential_length_mismatch(circle):
    with pytest.raises(InvalidArgument):
        assemble_curve_hamiltonian(circle, np.zeros(5))


def test_sphere_modes_approach_laplace_beltrami():
    r, z, der, length, boundary = sphere_profile(1.0)
    geom = revolution_from_profile(r, z, length, 1024, boundary=boundary, derivatives=der)
    for m in range(4):
        H = assemble_mode_hamiltonian(geom, 0.0, m)
        lam = eigenbasis(H, 3).values
        ls = np.arange(m, m + 3)
        np.testing.assert_allclose(lam, ls * (ls + 1), rtol=5e-4, atol=1e-6)
        np.testing.assert_allclose(H.weights, geom.r * geom.ds)


def test_cylinder_modes_are_flat_plus_constant():
    rho, L, n = 2.0, 3.0, 200
    r, z, der, length, boundary = cylinder_profile(rho, L)
    geom = revolution_from_profile(r, z, length, n, boundary=boundary, derivatives=der)
    flat = assemble_curve_hamiltonian(curve_from_curvature(0.0, L, False, n))
    H0 = assemble_mode_hamiltonian(geom, 0.0, 0)
    np.testing.assert_allclose(H0.diag, flat.diag, rtol=1e-14)
    np.testing.assert_allclose(H0.offdiag, flat.offdiag, rtol=1e-14)
    for m in (1, 3):
        Hm = assemble_mode_hamiltonian(geom, 0.0, m)
        np.testing.assert_allclose(Hm.diag - H0.diag, m * m / rho**2, rtol=1e-12)
        np.testing.assert_array_equal(Hm.offdiag, H0.offdiag)


def test_mode_must_be_nonnegative():
    r, z, der, length, boundary = sphere_profile(1.0)
    geom = revolution_from_profile(r, z, length, 64, boundary=boundary, derivatives=der)
    with pytest.raises(InvalidArgument):
        assemble_mode_hamiltonian(geom, 0.0, -1)


def test_position_operators(circle):
    X = position_operators(circle)
    assert X.nu == 2
    cx, cy = circle.positions.mean(axis=0)
    rad = 1 / (2 * math.pi)
    np.testing.assert_allclose((X.components[0] - cx) ** 2 + (X.components[1] - cy) ** 2, rad**2, rtol=1e-8)
    seg = curve_from_curvature(0.0, 1.0, False, 31)
    Xs = position_operators(seg)
    np.testing.assert_allclose(Xs.components[0], seg.s, atol=1e-14)
    np.testing.assert_allclose(Xs.components[1], 0.0, atol=1e-14)
    bare = CurveGeometry(1.0, True, np.linspace(0, 1, 16, endpoint=False), np.zeros(16))
    with pytest.raises(NeedsEmbedding):
        position_operators(bare)


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, (6, 6), elements=st.floats(-5, 5)),
       arrays(np.float64, 6, elements=st.floats(-5, 5)),
       arrays(np.float64, 6, elements=st.floats(-5, 5)))
def test_commutator_algebra(a, p, q):
    assert np.array_equal(commutator(a, a), np.zeros((6, 6)))
    assert commutator(p, q).nnz == 0 or abs(commutator(p, q)).max() == 0
    # antisymmetry and the Jacobi identity
    b = np.outer(p, q)
    np.testing.assert_allclose(commutator(a, b), -commutator(b, a), atol=1e-12)
    c = np.diag(p) + np.eye(6, k=1)
    jac = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b))
    assert np.abs(jac).max() <= 1e-9 * (1 + np.abs(a).max() * np.abs(b).max() * np.abs(c).max())


def test_commutator_shape_mismatch():
    with pytest.raises(InvalidArgument):
        commutator(np.eye(3), np.eye(4))


def test_canonical_commutation_on_interval():
    geom = curve_from_curvature(0.0, math.pi, False, 63)
    H = assemble_curve_hamiltonian(geom, 1.7)
    x = position_operators(geom).components[0]
    D = double_commutator(x, H).toarray()
    np.testing.assert_allclose(np.diag(D), 0.0, atol=1e-12)
    np.testing.assert_allclose(D.sum(axis=1)[1:-1], 2.0, rtol=1e-10)


def test_momentum_is_half_laplacian_commutator(circle):
    V = np.linspace(0, 3, circle.n)
    H = assemble_curve_hamiltonian(circle, V)
    lap = assemble_curve_hamiltonian(circle, 0.0)
    X = position_operators(circle)
    P = momentum_operator(H, X)
    for pm, xm in zip(P.components, X.components):
        assert sp.issparse(pm)
        ref = 0.5 * commutator(-lap.sparse(), xm)
        assert abs(pm - ref).max() <= 1e-9 * abs(lap.sparse()).max()
    apply = P.apply(np.ones(circle.n))
    assert len(apply) == 2


def test_momentum_dimension_mismatch(circle):
    H = assemble_curve_hamiltonian(circle)
    small = position_operators(curve_from_curvature(2 * math.pi, 1.0, True, 64))
    with pytest.raises(InvalidArgument):
        momentum_operator(H, small)


def test_operator_json_roundtrip(circle):
    H = assemble_curve_hamiltonian(circle, PotentialSpec.hg(0.25))
    H2 = TridiagonalOperator.from_json(H.to_json())
    np.testing.assert_array_equal(H.diag, H2.diag)
    np.testing.assert_array_equal(H.offdiag, H2.offdiag)
    assert H.corner == H2.corner and H.boundary == H2.boundary


def test_matvec_matches_dense(circle):
    H = assemble_curve_hamiltonian(circle, 1.0)
    x = np.random.default_rng(1).normal(size=(circle.n, 3))
    np.testing.assert_allclose(H.matvec(x), H.dense() @ x, rtol=1e-12, atol=1e-8)
    assert H.norm_bound() >= np.abs(np.linalg.eigvalsh(H.dense())).max()
    np.testing.assert_allclose(H.shifted(2.0).diag, H.diag + 2.0)


def test_invalid_operator():
    with pytest.raises(InvalidArgument):
        TridiagonalOperator(np.ones(3), np.ones(3), np.ones(3))
    with pytest.raises(InvalidArgument):
        TridiagonalOperator(np.ones(3), np.ones(2), np.array([1.0, 0.0, 1.0]))
