"""Eigenvalue-gap bounds, sum rules and heat-trace monotonicity checks.

Every evaluator returns :class:`~curvspec.report.BoundReport` records (or a
:class:`GapInterval` / :class:`PartitionCheck`).  Two tolerance classes are
used:

``exact``
    ``1e-9 * (1 + |rhs|)``.  Used for closed-form spectra and for statements
    that hold exactly for matrices (commutator identities, the abstract gap
    lemma, the algebraic layer of the sum rule).

``discretization``
    ``exact + E * ds**2 * (|lhs| + |rhs|)`` where ``E`` is the largest
    ``|lambda|`` entering the check and ``ds`` the grid spacing of the
    spectrum.  The central-difference eigenvalue error is about
    ``lambda**2 ds**2 / 12``, so this allows roughly a factor six over the
    worst gap error.  The product ``E ds**2`` is scale invariant.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy import special

from .eigensolve import EigenBasis, Spectrum
from .errors import ConsistencyError, InvalidArgument
from .geometry import CurveGeometry, RevolutionGeometry, SphereGeometry
from .operators import DiscreteVectorOp, TridiagonalOperator, _as_matrix, commutator
from .report import (
    INCONCLUSIVE,
    INFORMATIONAL,
    NOT_APPLICABLE,
    BoundReport,
    GapInterval,
    PartitionCheck,
)

EXACT_RTOL = 1e-9
EPS = np.finfo(float).eps


def sigma_of(g: float) -> float:
    """``max(1, 1/(4g))`` for ``g > 0``."""
    if not g > 0:
        raise InvalidArgument(f"sigma needs g > 0, got {g}")
    return max(1.0, 1.0 / (4.0 * g))


def _tol(spectrum, lhs, rhs, lam_used=()):
    exact = EXACT_RTOL * (1.0 + abs(rhs))
    ds = None if spectrum is None else spectrum.ds
    if ds is None:
        return exact, "exact"
    lam = np.abs(np.asarray(lam_used, dtype=float))
    e = float(lam.max()) if lam.size else 0.0
    return exact + e * ds * ds * (abs(lhs) + abs(rhs)), "discretization"


def _params(spectrum=None, **kw):
    out = {k: v for k, v in kw.items() if v is not None}
    if spectrum is not None:
        out["source"] = spectrum.source
        if spectrum.ds is not None:
            out["ds"] = spectrum.ds
    return out


def _components(G) -> list:
    if isinstance(G, DiscreteVectorOp):
        return G.matrices()
    if isinstance(G, (list, tuple)):
        return list(G)
    return [G]


# --------------------------------------------------------------------------
# abstract gap lemma and commutator identities


def commutator_gap_bound(H, G, u1, spectrum: Spectrum, case: str = "") -> BoundReport:
    """``Gamma <u1, [G,[H,G]] u1> <= 2 ||[H,G] u1||^2`` for a symmetric matrix.

    ``G`` may be one matrix (dense, sparse, or a 1-D diagonal), a list of
    them, or a :class:`DiscreteVectorOp`; lists are summed over components.
    ``u1`` is the ground eigenvector of the plain symmetric matrix ``H``.
    """
    bound = "commutator-gap-bound"
    if not spectrum.separated(1):
        return BoundReport.skipped(bound, "ground state is degenerate", NOT_APPLICABLE, n=1)
    Hm = _as_matrix(H)
    u = np.asarray(u1, dtype=float)
    u = u / np.linalg.norm(u)
    gamma = spectrum.lam(2) - spectrum.lam(1)
    form = norm2 = scale = 0.0
    hnorm = float(abs(Hm).sum(axis=1).max())
    for g in _components(G):
        Gm = _as_matrix(g)
        Gu = Gm @ u
        Cu = Hm @ Gu - Gm @ (Hm @ u)
        # [H,G] is antisymmetric, so <u,[G,[H,G]]u> = 2 <Gu, [H,G]u>; this
        # avoids the cancellation in 2 <Gu, H Gu> - 2 <u, H u><Gu, Gu>.
        form += 2.0 * float(Cu @ Gu)
        norm2 += float(Cu @ Cu)
        gn = float(abs(Gm).sum(axis=1).max())
        scale += hnorm * gn * gn
    lhs, rhs = gamma * form, 2.0 * norm2
    tol = EXACT_RTOL * (1.0 + abs(rhs)) + 64 * EPS * scale * max(1.0, abs(gamma))
    return BoundReport(bound, lhs, rhs, tolerance=tol, case=case,
                       params=_params(spectrum, n=1, gamma=gamma))


def commutator_identities(H, G, basis: EigenBasis, case: str = "") -> list[BoundReport]:
    """Matrix identities relating commutators with ``H`` to its eigenbasis.

    Checked for every pair of returned eigenvectors (plain orthonormal
    vectors): the gap formula ``<u_j,[H,G]u_k> = (l_j - l_k)<u_j,G u_k>``,
    ``||[H,G]u_k||^2 = <G u_k,(H - l_k)^2 G u_k>`` and
    ``<u_j,[G,[H,G]]u_j> = 2<G u_j,(H - l_j) G u_j>``.  Residuals are
    reported relative to ``||H|| ||G||^2``; the tolerance is ``1e-9``.
    """
    Hm = _as_matrix(H)
    Y = basis.vectors
    lam = basis.values
    hnorm = float(abs(Hm).sum(axis=1).max())
    out = []
    res_gap = res_norm = res_double = 0.0
    for g in _components(G):
        Gm = _as_matrix(g)
        gnorm = float(abs(Gm).sum(axis=1).max()) or 1.0
        C = commutator(Hm, Gm)
        GY = Gm @ Y
        CY = C @ Y
        lhs = Y.T @ CY
        rhs = (lam[:, None] - lam[None, :]) * (Y.T @ GY)
        res_gap = max(res_gap, float(np.abs(lhs - rhs).max()) / (hnorm * gnorm))

        shifted = Hm @ GY - GY * lam[None, :]
        a = np.einsum("ik,ik->k", CY, CY)
        b = np.einsum("ik,ik->k", shifted, shifted)
        res_norm = max(res_norm, float(np.abs(a - b).max()) / (hnorm * gnorm) ** 2)

        D = commutator(Gm, C)
        c = np.einsum("ik,ik->k", Y, D @ Y)
        e = 2.0 * np.einsum("ik,ik->k", GY, shifted)
        res_double = max(res_double, float(np.abs(c - e).max()) / (hnorm * gnorm * gnorm))
    for name, res in (
        ("commutator-gap-formula", res_gap),
        ("commutator-norm", res_norm),
        ("double-commutator", res_double),
    ):
        out.append(BoundReport(name, res, 0.0, relation="==", tolerance=EXACT_RTOL, case=case,
                               params={"pairs": int(len(lam))},
                               notes=["relative residual, normalized by ||H|| ||G||^2"]))
    return out


def canonical_commutation_check(H, X, case: str = "") -> BoundReport:
    """Flat-grid canonical commutation: ``[X,[H,X]]`` acts as ``2`` on smooth functions.

    ``[X,[H,X]]`` has zero diagonal; its off-diagonal entries are
    ``-H_ij (X_j - X_i)^2`` and their interior row sums equal ``2``.  The
    report's lhs is 2 plus the largest interior deviation of the row sums.
    """
    D = sum(_as_matrix(commutator(g, commutator(H, g))) for g in _components(X))
    rows = np.asarray(D.sum(axis=1)).ravel()
    dev = float(np.abs(rows[1:-1] - 2.0).max())
    return BoundReport("canonical-commutation", 2.0 + dev, 2.0, relation="==", tolerance=1e-8,
                       case=case, params={"nodes": int(rows.size)})


# --------------------------------------------------------------------------
# curves and hypersurfaces


def _gradient_energy(u, ds, boundary, w_nodes, w_ends=(1.0, 1.0)):
    """Quadrature of ``w u'^2`` with centered differences.

    Ghost values: periodic wrap, mirror across a pole half-cell, or zero at
    Dirichlet ends (which also get trapezoid end contributions).
    """
    u = np.asarray(u, dtype=float)
    if boundary == "periodic":
        up = (np.roll(u, -1) - np.roll(u, 1)) / (2 * ds)
        return float(np.sum(w_nodes * up * up) * ds)
    if boundary == "poles":
        ext = np.concatenate([[u[0]], u, [u[-1]]])
        up = (ext[2:] - ext[:-2]) / (2 * ds)
        return float(np.sum(w_nodes * up * up) * ds)
    ext = np.concatenate([[0.0], u, [0.0]])
    up = (ext[2:] - ext[:-2]) / (2 * ds)
    left = (4 * u[0] - u[1]) / (2 * ds)
    right = (4 * u[-1] - u[-2]) / (2 * ds)
    ends = 0.5 * ds * (w_ends[0] * left**2 + w_ends[1] * right**2)
    return float(np.sum(w_nodes * up * up) * ds + ends)


def gap_bound_curve(u1, geom: CurveGeometry, spectrum: Spectrum, case: str = "") -> BoundReport:
    """``Gamma <= 4 int (u1'^2 + kappa^2 u1^2 / 4) ds`` on a plane curve.

    ``u1`` is the ground state as a grid function (any normalization; the
    quadrature is divided by its weighted norm).
    """
    bound = "curve-gap"
    u = np.asarray(u1, dtype=float)
    if u.shape != (geom.n,):
        raise InvalidArgument(f"ground state has {u.size} samples, grid has {geom.n}")
    if not spectrum.separated(1):
        return BoundReport.skipped(bound, "ground state is degenerate", NOT_APPLICABLE, n=1)
    ds = geom.ds
    k = np.asarray(geom.kappa)
    norm = float(np.sum(u * u) * ds)
    grad = _gradient_energy(u, ds, geom.boundary, 1.0)
    pot = float(np.sum(0.25 * k * k * u * u) * ds)
    rhs = 4.0 * (grad + pot) / norm
    lam1, lam2 = spectrum.lam(1), spectrum.lam(2)
    lhs = lam2 - lam1
    tol, cls = _tol(spectrum, lhs, rhs, (lam1, lam2, rhs))
    return BoundReport(bound, lhs, rhs, tolerance=tol, tol_class=cls, case=case,
                       params=_params(spectrum, n=1, d=1, N=geom.n))


def gap_bound_hypersurface(u1, geom, spectrum: Spectrum, d: int | None = None,
                           case: str = "") -> BoundReport:
    """``Gamma <= (4/d) <u1, (-Delta + h^2/4) u1>`` on a hypersurface.

    For :class:`SphereGeometry` the ground state of ``-Delta + g h^2`` is
    constant and ``u1`` is ignored.  On a surface of revolution ``u1`` must
    be the rotationally symmetric (mode 0) ground state; the merged spectrum
    must report mode 0 for its lowest value.
    """
    bound = "hypersurface-gap"
    if not spectrum.separated(1):
        return BoundReport.skipped(bound, "ground state is degenerate", NOT_APPLICABLE, n=1)
    lam1, lam2 = spectrum.lam(1), spectrum.lam(2)
    lhs = lam2 - lam1
    if isinstance(geom, SphereGeometry):
        d = geom.dim if d is None else d
        h = float(geom.h[0])
        rhs = (4.0 / d) * 0.25 * h * h
        N = None
    elif isinstance(geom, RevolutionGeometry):
        d = 2 if d is None else d
        if spectrum.modes is not None and int(spectrum.modes[0]) != 0:
            raise ConsistencyError(
                f"lowest eigenvalue comes from mode {int(spectrum.modes[0])}, not the symmetric mode"
            )
        u = np.asarray(u1, dtype=float)
        if u.shape != (geom.n,):
            raise InvalidArgument(f"ground state has {u.size} samples, grid has {geom.n}")
        r, ds, h = geom.r, geom.ds, geom.h
        ends = (1.0, 1.0)
        if geom.boundary == "dirichlet":
            ends = (2 * geom.r_face[0] - r[0], 2 * geom.r_face[-1] - r[-1])
        norm = float(np.sum(r * u * u) * ds)
        grad = _gradient_energy(u, ds, geom.boundary, r, ends)
        pot = float(np.sum(r * 0.25 * h * h * u * u) * ds)
        rhs = (4.0 / d) * (grad + pot) / norm
        N = geom.n
    else:
        raise InvalidArgument(f"unsupported geometry {type(geom).__name__}")
    tol, cls = _tol(spectrum, lhs, rhs, (lam1, lam2, rhs))
    return BoundReport(bound, lhs, rhs, tolerance=tol, tol_class=cls, case=case,
                       params=_params(spectrum, n=1, d=d, N=N))


def gap_delta(spectrum: Spectrum, d: int, delta: float, case: str = "") -> BoundReport:
    """``Gamma <= (4/d)(lambda_1 + delta)``."""
    bound = "gap-delta"
    if not spectrum.separated(1):
        return BoundReport.skipped(bound, "ground state is degenerate", NOT_APPLICABLE, n=1)
    lam1, lam2 = spectrum.lam(1), spectrum.lam(2)
    lhs = lam2 - lam1
    rhs = (4.0 / d) * (lam1 + delta)
    tol, cls = _tol(spectrum, lhs, rhs, (lam1, lam2))
    return BoundReport(bound, lhs, rhs, tolerance=tol, tol_class=cls, case=case,
                       params=_params(spectrum, n=1, d=d, delta=delta))


def ratio_bounds(spectrum: Spectrum, d: int, g: float, case: str = "") -> list[BoundReport]:
    """Universal ratio ``lambda_2/lambda_1 <= 1 + 4 sigma/d`` and gap form ``Gamma <= (4 sigma/d) lambda_1``.

    ``1 + 4 sigma/d`` equals ``(1 + g d)/(g d)`` for ``g <= 1/4`` and
    ``(4 + d)/d`` for ``g >= 1/4``; for curves (``d = 1``) it is
    ``max(5, 1 + 1/g)``.
    """
    if not g > 0:
        reason = "sigma undefined for g <= 0"
        return [BoundReport.skipped("ratio", reason, NOT_APPLICABLE, n=1, d=d, g=g),
                BoundReport.skipped("gap-sigma", reason, NOT_APPLICABLE, n=1, d=d, g=g)]
    sigma = sigma_of(g)
    lam1, lam2 = spectrum.lam(1), spectrum.lam(2)
    p = _params(spectrum, n=1, d=d, g=g, sigma=sigma)
    out = []
    if lam1 > 0:
        lhs, rhs = lam2 / lam1, 1.0 + 4.0 * sigma / d
        tol, cls = _tol(spectrum, lhs, rhs, (lam1, lam2))
        out.append(BoundReport("ratio", lhs, rhs, tolerance=tol, tol_class=cls, case=case, params=dict(p)))
    else:
        out.append(BoundReport.skipped("ratio", "lambda_1 <= 0, ratio undefined", NOT_APPLICABLE, **p))
    lhs, rhs = lam2 - lam1, 4.0 * sigma * lam1 / d
    tol, cls = _tol(spectrum, lhs, rhs, (lam1, lam2))
    out.append(BoundReport("gap-sigma", lhs, rhs, tolerance=tol, tol_class=cls, case=case, params=dict(p)))
    return out


# --------------------------------------------------------------------------
# sum rules


def _check_complete(basis: EigenBasis):
    if not basis.complete:
        raise InvalidArgument(f"sum rules need the full eigenbasis, got {len(basis.values)} of {basis.vectors.shape[0]}")


def _momentum_elements(basis: EigenBasis, P: DiscreteVectorOp):
    Y = basis.vectors
    return [Y.T @ (m @ Y) for m in P.matrices()]


def _nondegenerate(lam, tol):
    diff = lam[:, None] - lam[None, :]
    return diff, np.abs(diff) > tol


def momentum_matrix_check(basis: EigenBasis, P: DiscreteVectorOp, X: DiscreteVectorOp,
                          case: str = "") -> BoundReport:
    """``<u_j, P u_k> = -(1/2)(l_j - l_k) <u_j, X u_k>`` for all pairs.

    Residual relative to ``max|l| * max|X|``; tolerance ``1e-12``.
    """
    Y, lam = basis.vectors, basis.values
    scale = float(np.abs(lam).max()) * max(float(np.abs(c).max()) for c in X.components) or 1.0
    res = 0.0
    for Mp, xm in zip(_momentum_elements(basis, P), X.components):
        A = Y.T @ (xm[:, None] * Y)
        expected = -0.5 * (lam[:, None] - lam[None, :]) * A
        res = max(res, float(np.abs(Mp - expected).max()) / scale)
    return BoundReport("momentum-matrix-elements", res, 0.0, relation="==", tolerance=1e-12,
                       case=case, params={"pairs": int(lam.size)})


def sum_rule_value(basis: EigenBasis, P: DiscreteVectorOp, j: int, d: int, tol: float | None = None,
                   elements=None) -> float:
    """``(4/d) sum_{l_k != l_j} |<u_k, P u_j>|^2 / (l_k - l_j)`` for 1-based ``j``."""
    lam = basis.values
    if tol is None:
        tol = EXACT_RTOL * (1.0 + float(np.abs(lam).max()))
    M = _momentum_elements(basis, P) if elements is None else elements
    jj = j - 1
    diff = lam - lam[jj]
    keep = np.abs(diff) > tol
    total = 0.0
    for Mp in M:
        col = Mp[:, jj]
        total += float(np.sum(col[keep] ** 2 / diff[keep]))
    return 4.0 / d * total


def _sum_rule_tolerance(lam, weights, ds, curvature_scale):
    # The per-eigenvector deviation of the discrete sum rule is
    # O((|l_j| + kappa^2) ds^2); allow twice that.
    exact = EXACT_RTOL * (1.0 + float(np.sum(np.abs(weights))))
    if ds is None:
        return exact, "exact"
    return exact + 2.0 * ds * ds * float(np.sum(np.abs(weights) * (np.abs(lam) + curvature_scale))), \
        "discretization"


def sum_rule_residual(H, basis: EigenBasis, P: DiscreteVectorOp, j: int, d: int,
                      X: DiscreteVectorOp | None = None, curvature_scale: float = 0.0,
                      case: str = "") -> list[BoundReport]:
    """Sum rule for eigenvector ``j`` (1-based) against the value 1.

    Terms with ``l_k`` within the degeneracy tolerance of ``l_j`` are left
    out.  ``curvature_scale`` (``max kappa^2``) enters the discretization
    tolerance.  When ``X`` is given the algebraic layer relating ``P`` and
    ``X`` matrix elements is checked as a second report.
    """
    _check_complete(basis)
    if not 1 <= j <= len(basis.values):
        raise InvalidArgument(f"index {j} outside the basis")
    value = sum_rule_value(basis, P, j, d)
    lam_j = basis.values[j - 1]
    tol, cls = _sum_rule_tolerance(np.array([lam_j]), np.ones(1), getattr(H, "ds", None), curvature_scale)
    out = [BoundReport("sum-rule", 1.0, value, relation="==", tolerance=tol, tol_class=cls,
                       case=case, params={"n": j, "d": d, "deviation": value - 1.0})]
    if X is not None:
        out.append(momentum_matrix_check(basis, P, X, case=case))
    return out


def trace_sum_rule_check(basis: EigenBasis, P: DiscreteVectorOp, d: int, t: float = 1.0,
                         f=None, ds: float | None = None, curvature_scale: float = 0.0,
                         case: str = "") -> list[BoundReport]:
    """Both sides of the trace sum rule, and the heat-trace inequality.

    With ``f = exp(-t x)`` (the default) the second report checks
    ``Z(t) <= (2t/d) sum_j exp(-t l_j) ||P u_j||^2``.  ``ds`` selects the
    discretization tolerance; without it the exact class is used.
    """
    _check_complete(basis)
    lam = basis.values
    heat = f is None
    if heat:
        f = lambda x: np.exp(-t * x)  # noqa: E731
    fv = np.asarray(f(lam), dtype=float) * np.ones_like(lam)
    M = _momentum_elements(basis, P)
    diff, keep = _nondegenerate(lam, EXACT_RTOL * (1.0 + float(np.abs(lam).max())))
    quot = np.zeros_like(diff)
    quot[keep] = (fv[:, None] - fv[None, :])[keep] / diff[keep]
    sq = sum(Mp * Mp for Mp in M)
    lhs = float(np.sum(fv))
    rhs = -2.0 / d * float(np.sum(sq * quot))
    tol, cls = _sum_rule_tolerance(lam, fv, ds, curvature_scale)
    out = [BoundReport("trace-sum-rule", lhs, rhs, relation="==", tolerance=tol, tol_class=cls,
                       case=case, params={"d": d, "t": t})]
    if heat:
        pnorm = np.sum(sq, axis=0)  # ||P u_j||^2 = sum_k |<u_k, P u_j>|^2
        rhs_h = 2.0 * t / d * float(np.sum(fv * pnorm))
        out.append(BoundReport("heat-trace-bound", lhs, rhs_h, tolerance=tol, tol_class=cls,
                               case=case, params={"d": d, "t": t}))
    return out


# --------------------------------------------------------------------------
# Hile-Protter and Yang


def _weights(lam, delta, sigma):
    if (delta is None) == (sigma is None):
        raise InvalidArgument("give exactly one of delta or sigma")
    return (lam + delta) if delta is not None else sigma * lam


def hile_protter_check(spectrum: Spectrum, n: int, d: int, delta: float | None = None,
                       sigma: float | None = None, case: str = "") -> BoundReport:
    """``1 <= (4/(d n)) sum_{j<=n} w_j / (l_{n+1} - l_j)``.

    ``w_j = l_j + delta`` (general potential) or ``sigma l_j`` (``H_g``).
    """
    bound = "hile-protter-delta" if delta is not None else "hile-protter-sigma"
    p = _params(spectrum, n=n, d=d, delta=delta, sigma=sigma)
    if n + 1 > len(spectrum):
        return BoundReport.skipped(bound, f"lambda_{n + 1} not computed", **p)
    if not spectrum.separated(n):
        return BoundReport.skipped(bound, f"lambda_{n + 1} = lambda_{n}", **p)
    lam = spectrum.values[:n]
    top = spectrum.lam(n + 1)
    w = _weights(lam, delta, sigma)
    rhs = 4.0 / (d * n) * float(np.sum(w / (top - lam)))
    # the sum is dominated by the smallest gap; its relative error sets the scale
    tol, cls = _tol(spectrum, 1.0, rhs, np.append(lam, top))
    return BoundReport(bound, 1.0, rhs, tolerance=tol, tol_class=cls, case=case, params=p)


def _quadratic_interval(lam, w, d, n, variant, factor=None):
    """Root interval of ``sum (z - l_j)^2 - c sum (z - l_j) w_j`` divided by n."""
    c = 4.0 / d if factor is None else factor
    lbar, l2bar, wbar = float(np.mean(lam)), float(np.mean(lam * lam)), float(np.mean(w))
    lwbar = float(np.mean(lam * w))
    b = -(2.0 * lbar + c * wbar)
    cc = l2bar + c * lwbar
    center = -0.5 * b
    disc = center * center - cc
    half = math.sqrt(disc) if disc >= 0 else math.nan
    return GapInterval(n=n, center=center, half_width=half, lambda_bar=lbar, lambda_sq_bar=l2bar,
                       variant=variant, discriminant=disc, coefficients=(1.0, b, cc))


def yang_quadratic(spectrum: Spectrum, n: int, d: int, delta: float | None = None,
                   sigma: float | None = None) -> GapInterval:
    """Yang-type quadratic in ``z``, nonpositive on ``(l_n, l_{n+1}]``.

    Normalized per eigenvalue: ``z^2 - 2 lbar z + mean(l^2) - (4/d) mean((z - l_j) w_j)``.
    The alternative ``4/(n d)`` prefactor is evaluated too and its root
    interval recorded in the notes.
    """
    if not 1 <= n <= len(spectrum):
        raise InvalidArgument(f"n = {n} outside the spectrum of length {len(spectrum)}")
    lam = spectrum.values[:n]
    w = _weights(lam, delta, sigma)
    q = _quadratic_interval(lam, w, d, n, "quadratic-roots")
    alt = _quadratic_interval(lam, w, d, n, "quadratic-roots", factor=4.0 / (n * d))
    if alt.vacuous:
        q.notes.append(f"prefactor 4/(n d): complex roots (discriminant {alt.discriminant:.6g})")
    else:
        q.notes.append(f"prefactor 4/(n d): roots [{alt.lower:.12g}, {alt.upper:.12g}]")
    if q.vacuous:
        q.notes.append(f"complex roots: discriminant {q.discriminant:.6g}")
    return q


def yang_check(spectrum: Spectrum, n: int, d: int, delta: float | None = None,
               sigma: float | None = None, case: str = "") -> BoundReport:
    """``l_{n+1} <= z_+`` for the Yang quadratic."""
    bound = "yang-delta" if delta is not None else "yang-sigma"
    p = _params(spectrum, n=n, d=d, delta=delta, sigma=sigma)
    if n + 1 > len(spectrum):
        return BoundReport.skipped(bound, f"lambda_{n + 1} not computed", **p)
    if not spectrum.separated(n):
        return BoundReport.skipped(bound, f"lambda_{n + 1} = lambda_{n}", **p)
    q = yang_quadratic(spectrum, n, d, delta, sigma)
    lhs = spectrum.lam(n + 1)
    if q.vacuous:
        return BoundReport(bound, lhs, math.inf, status=INCONCLUSIVE, params=p, case=case, notes=q.notes)
    tol, cls = _tol(spectrum, lhs, q.upper, spectrum.values[: n + 1])
    return BoundReport(bound, lhs, q.upper, tolerance=tol, tol_class=cls, case=case, params=p,
                       notes=list(q.notes))


def gap_interval(spectrum: Spectrum, n: int, d: int, g: float | None = None,
                 delta: float | None = None, sigma: float | None = None) -> dict[str, GapInterval]:
    """Intervals meant to contain ``[l_n, l_{n+1}]``.

    With ``g`` (or ``sigma``): ``paper-b`` has center ``(1 + 2 sigma/d) lbar``
    and half width ``sqrt(((1 + 2 sigma/d) lbar)^2 - (1 + 4 sigma/d) mean(l^2))``.
    With ``delta``: ``paper-a`` has center ``(1 + 2/d) lbar`` and the
    printed discriminant
    ``(4/d^2)(((dn+2)/2)^2 lbar^2 + (dn - d + 2) delta lbar - d (dn+4)/4 mean(l^2) + delta^2)``;
    the center shifted by ``2 delta/d`` is noted as the other reading.
    ``quadratic-roots`` (and ``quadratic-roots-delta`` when both weights are
    given) are the Yang root intervals.
    """
    if sigma is None and g is not None:
        sigma = sigma_of(g)
    if sigma is None and delta is None:
        raise InvalidArgument("gap_interval needs g, sigma or delta")
    if not 1 <= n <= len(spectrum):
        raise InvalidArgument(f"n = {n} outside the spectrum of length {len(spectrum)}")
    lam = spectrum.values[:n]
    lbar, l2bar = float(np.mean(lam)), float(np.mean(lam * lam))
    out = {}
    if sigma is not None:
        a = 1.0 + 2.0 * sigma / d
        center = a * lbar
        D = center * center - (1.0 + 4.0 * sigma / d) * l2bar
        out["paper-b"] = GapInterval(n, center, math.sqrt(D) if D >= 0 else math.nan, lbar, l2bar,
                                     "paper-b", D)
        if lam[0] <= 0:
            out["paper-b"].notes.append("lambda_1 <= 0: sigma form does not apply")
        out["quadratic-roots"] = yang_quadratic(spectrum, n, d, sigma=sigma)
    if delta is not None:
        center = (1.0 + 2.0 / d) * lbar
        D = (4.0 / d**2) * (
            ((d * n + 2) / 2.0) ** 2 * lbar**2
            + (d * n - d + 2) * delta * lbar
            - d * (d * n + 4) / 4.0 * l2bar
            + delta**2
        )
        half = math.sqrt(D) if D >= 0 else math.nan
        pa = GapInterval(n, center, half, lbar, l2bar, "paper-a", D)
        shifted = center + 2.0 * delta / d
        pa.notes.append(f"center shifted by 2 delta/d: [{shifted - half:.12g}, {shifted + half:.12g}]")
        out["paper-a"] = pa
        key = "quadratic-roots" if sigma is None else "quadratic-roots-delta"
        out[key] = yang_quadratic(spectrum, n, d, delta=delta)
    return out


def gap_interval_checks(spectrum: Spectrum, n: int, d: int, g: float | None = None,
                        delta: float | None = None, case: str = "") -> list[BoundReport]:
    """Containment ``[l_n, l_{n+1}] within interval`` for every variant.

    Only the quadratic-roots variants decide pass/fail; the printed closed
    forms are informational.  The report's lhs/rhs hold the worst endpoint
    excess: ``lhs = max(lower - l_n, l_{n+1} - upper)``, ``rhs = 0``.
    """
    sigma = sigma_of(g) if g is not None and g > 0 else None
    if sigma is None and delta is None:
        return []
    p = _params(spectrum, n=n, d=d, g=g, delta=delta, sigma=sigma)
    if n + 1 > len(spectrum):
        return [BoundReport.skipped("gap-interval", f"lambda_{n + 1} not computed", **p)]
    if not spectrum.separated(n):
        return [BoundReport.skipped("gap-interval", f"lambda_{n + 1} = lambda_{n}", **p)]
    a, b = spectrum.lam(n), spectrum.lam(n + 1)
    out = []
    for key, iv in gap_interval(spectrum, n, d, delta=delta, sigma=sigma).items():
        bound = "gap-interval" if key == "quadratic-roots" else f"gap-interval-{key}"
        if key == "quadratic-roots-delta":
            bound = "gap-interval-delta"
        info = key.startswith("paper")
        params = dict(p, variant=key, lower=iv.lower, upper=iv.upper)
        if iv.vacuous:
            status = INFORMATIONAL if info else INCONCLUSIVE
            out.append(BoundReport(bound, math.nan, math.nan, status=status, case=case, params=params,
                                   notes=["vacuous interval (negative discriminant)"] + iv.notes))
            continue
        excess = max(iv.lower - a, b - iv.upper)
        tol, cls = _tol(spectrum, abs(a) + abs(b), abs(iv.lower) + abs(iv.upper), spectrum.values[: n + 1])
        out.append(BoundReport(bound, excess, 0.0, tolerance=tol,
                               tol_class=INFORMATIONAL if info else cls, case=case, params=params,
                               notes=list(iv.notes)))
    return out


# --------------------------------------------------------------------------
# heat trace


def _growth_constant(spectrum: Spectrum, d: int) -> float:
    """Twice the largest ``N(l) / l^(d/2)`` over the upper half of the kept spectrum."""
    lam = spectrum.values
    top = lam[-1]
    count = np.arange(1, lam.size + 1)
    sel = (lam >= 0.5 * top) & (lam > 0)
    return 2.0 * float(np.max(count[sel] / lam[sel] ** (d / 2.0)))


def partition_monotonicity(spectrum: Spectrum, d: int, t_grid: Sequence[float],
                           delta: float | None = None, sigma: float | None = None) -> PartitionCheck:
    """Monotonicity of ``F(t) = t^a e^{-delta t} Z(t)`` on a grid.

    ``a = d/2`` with ``delta`` or ``a = d/(2 sigma)`` with ``sigma``.  The
    eigenvalues beyond the kept cutoff ``L`` contribute at most
    ``c t^{-d/2} Gamma(d/2 + 1, t L)`` to ``Z(t)``, assuming the Weyl-type
    growth ``N(l) <= c l^{d/2}`` with ``c`` estimated (with a factor two)
    from the kept eigenvalues.  A forward difference passes when it does
    not exceed the tail bound; grid points where the tail bound exceeds
    the observed decrease are inconclusive.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size < 2 or np.any(t <= 0) or np.any(np.diff(t) <= 0):
        raise InvalidArgument("t grid must be positive and strictly ascending with at least two points")
    if (delta is None) == (sigma is None):
        raise InvalidArgument("give exactly one of delta or sigma")
    if len(spectrum) == 0:
        raise InvalidArgument("empty spectrum")
    if delta is not None:
        a, shift = d / 2.0, float(delta)
    else:
        a, shift = d / (2.0 * sigma), 0.0
    lam = spectrum.values
    Z = np.exp(-np.outer(t, lam)).sum(axis=1)
    pref = t**a * np.exp(-shift * t)
    F = pref * Z
    cutoff = float(lam[-1])
    notes = []
    if cutoff > 0:
        c = _growth_constant(spectrum, d)
        s = d / 2.0 + 1.0
        tail_z = c * t ** (-d / 2.0) * special.gamma(s) * special.gammaincc(s, t * cutoff)
        tail = pref * tail_z
        notes.append(f"tail: c t^(-d/2) Gamma(d/2+1, t L) with c = {c:.6g}, L = {cutoff:.6g}")
    else:
        tail = np.full_like(t, np.inf)
        notes.append("cutoff <= 0: tail cannot be bounded")
    dF = np.diff(F)
    allow = np.maximum(tail[:-1], tail[1:]) + 64 * EPS * np.abs(F[:-1])
    excess = dF - allow
    worst = float(np.max(excess))
    violated = bool(np.any(excess > 0))
    conclusive = int(np.sum(allow < np.abs(dF)))
    if violated:
        status = "fail"
    elif conclusive == 0:
        status = INCONCLUSIVE
    else:
        status = "pass"
    if conclusive < dF.size:
        notes.append(f"{dF.size - conclusive} of {dF.size} steps dominated by the tail bound")
    return PartitionCheck(t=t, values=F, exponent=a, delta=shift, tail=tail, monotone=not violated,
                          status=status, conclusive=conclusive, worst_excess=worst, cutoff=cutoff,
                          notes=notes)


def partition_report(check: PartitionCheck, d: int, variant: str, case: str = "") -> BoundReport:
    bound = f"partition-{variant}"
    params = {"d": d, "exponent": check.exponent, "delta": check.delta, "cutoff": check.cutoff,
              "conclusive_steps": check.conclusive, "t_min": float(check.t[0]), "t_max": float(check.t[-1])}
    if check.status == INCONCLUSIVE:
        return BoundReport(bound, check.worst_excess, 0.0, status=INCONCLUSIVE, case=case,
                           params=params, notes=list(check.notes))
    return BoundReport(bound, check.worst_excess, 0.0, case=case, params=params, notes=list(check.notes))


# --------------------------------------------------------------------------
# continuum identities on curves (converge at O(ds^2))


def frenet_identity(geom: CurveGeometry, H, phi, dphi, kappa=None, case: str = "") -> BoundReport:
    """``sum_m ||[H, X_m] phi||^2`` against ``4 int (phi'^2 + kappa^2 phi^2 / 4) ds``.

    ``phi`` and ``dphi`` are callables of arc length.  The right side is
    computed by adaptive quadrature, using ``kappa`` (callable) when given and
    a periodic spline through the curvature samples otherwise.  The
    discretization tolerance is ``(max kappa^2 + rhs/||phi||^2) ds^2`` times
    the right side.
    """
    from scipy.integrate import quad
    from scipy.interpolate import CubicSpline

    from .operators import position_operators

    if kappa is None:
        s = np.append(geom.s, geom.length) if geom.closed else geom.s
        k = np.append(geom.kappa, geom.kappa[0]) if geom.closed else geom.kappa
        kappa = CubicSpline(s, k, bc_type="periodic" if geom.closed else "not-a-knot")
    X = position_operators(geom)
    f = np.asarray(phi(geom.s), dtype=float) * np.ones(geom.n)
    lhs = 0.0
    for c in X.components:
        v = np.asarray(commutator(H, c) @ f).ravel()
        lhs += float(np.sum(v * v) * geom.ds)
    integrand = lambda s: dphi(s) ** 2 + 0.25 * float(kappa(s)) ** 2 * phi(s) ** 2  # noqa: E731
    rhs = 4.0 * quad(integrand, 0.0, geom.length, limit=400, epsabs=0.0, epsrel=1e-10)[0]
    norm = quad(lambda s: phi(s) ** 2, 0.0, geom.length, limit=400)[0]
    kmax = float(np.max(np.abs(geom.kappa)))
    tol = EXACT_RTOL * (1 + abs(rhs)) + (kmax**2 + rhs / norm) * geom.ds**2 * abs(rhs)
    return BoundReport("frenet-identity", lhs, rhs, relation="==", tolerance=tol,
                       tol_class="discretization", case=case,
                       params={"N": geom.n, "residual": lhs - rhs})


def momentum_form_check(geom: CurveGeometry, P: DiscreteVectorOp, u, case: str = "") -> BoundReport:
    """``||P u||^2`` against the discrete form ``<u, H_{1/4} u>``.

    ``u`` is a grid function; both sides use the curve's ``ds`` weights.
    """
    from .operators import PotentialSpec, assemble_curve_hamiltonian

    u = np.asarray(u, dtype=float)
    ds = geom.ds
    lhs = sum(float(np.sum(np.asarray(m @ u).ravel() ** 2)) for m in P.matrices()) * ds
    Hq = assemble_curve_hamiltonian(geom, PotentialSpec.hg(0.25))
    rhs = float(u @ Hq.matvec(u)) * ds
    norm = float(u @ u) * ds
    kmax = float(np.max(np.abs(geom.kappa)))
    tol = EXACT_RTOL * (1 + abs(rhs)) + (kmax**2 + abs(rhs) / norm) * ds * ds * abs(rhs)
    return BoundReport("momentum-form", lhs, rhs, relation="==", tolerance=tol,
                       tol_class="discretization", case=case,
                       params={"N": geom.n, "residual": lhs - rhs})
