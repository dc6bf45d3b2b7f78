"""Sampled geometries: plane curves, surfaces of revolution, round spheres.

All grids are uniform in arc length.  Curves carry curvature samples and,
after Frenet reconstruction, a unit frame and an embedding.  Surfaces of
revolution carry the profile, both principal curvatures and the
``r * ds`` quadrature weights used by the per-mode operators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DegenerateProfile, InconsistentCurvature, InvalidArgument, NotArclength

MIN_NODES = 16
ARCLENGTH_TOL = 1e-4

BOUNDARY_KINDS = ("periodic", "dirichlet", "poles")


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CurveGeometry:
    """Arc-length sampled plane curve.

    ``s`` holds the nodes: ``i*ds`` for ``i < N`` on closed curves, the
    interior nodes ``i*ds, 1 <= i <= N`` on open ones (Dirichlet ends).
    """

    length: float
    closed: bool
    s: np.ndarray
    kappa: np.ndarray
    tangent: np.ndarray | None = None
    normal: np.ndarray | None = None
    positions: np.ndarray | None = None
    closure_residual: float | None = None
    winding: int | None = None
    name: str = "curve"

    dim = 1

    @property
    def n(self) -> int:
        return len(self.s)

    @property
    def ds(self) -> float:
        return self.length / (self.n if self.closed else self.n + 1)

    @property
    def boundary(self) -> str:
        return "periodic" if self.closed else "dirichlet"

    @property
    def h(self) -> np.ndarray:
        """Mean-curvature sum; for a curve this is the curvature itself."""
        return self.kappa

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.n, self.ds)


@dataclass(frozen=True, eq=False)
class RevolutionGeometry:
    """Surface swept by rotating the profile ``(r(s), z(s))`` about the z axis.

    ``boundary`` is ``"poles"`` (profile meets the axis at both ends; nodes
    are staggered by ``ds/2``), ``"dirichlet"`` (open tube with clamped
    rims) or ``"periodic"`` (closed profile, e.g. a torus).  ``r_face``
    holds the radius on the cell faces between nodes; on a pole face it is
    exactly zero, which closes the flux without a boundary condition.
    """

    length: float
    boundary: str
    s: np.ndarray
    r: np.ndarray
    z: np.ndarray
    r_face: np.ndarray
    kappa1: np.ndarray
    kappa2: np.ndarray
    h: np.ndarray
    weights: np.ndarray
    arclength_residual: float
    name: str = "revolution"

    dim = 2

    @property
    def n(self) -> int:
        return len(self.s)

    @property
    def ds(self) -> float:
        return _spacing(self.length, self.n, self.boundary)

    @property
    def measure(self) -> float:
        """Weighted total measure, i.e. surface area / (2 pi)."""
        return float(self.weights.sum())


@dataclass(frozen=True)
class SphereGeometry:
    """Round sphere S^d of the given radius embedded in R^(d+1)."""

    dim: int = 2
    radius: float = 1.0
    name: str = field(default="sphere")

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise InvalidArgument(f"sphere dimension must be a positive integer, got {self.dim}")
        if not self.radius > 0:
            raise InvalidArgument(f"sphere radius must be positive, got {self.radius}")

    @property
    def principal_curvatures(self) -> np.ndarray:
        return np.full(self.dim, 1.0 / self.radius)

    @property
    def h(self) -> np.ndarray:
        return np.array([self.dim / self.radius])


def _spacing(length, n, boundary):
    return length / (n + 1) if boundary == "dirichlet" else length / n


def _check_grid(length, n):
    if not (length > 0 and math.isfinite(length)):
        raise InvalidArgument(f"length must be positive and finite, got {length}")
    if int(n) != n or n < MIN_NODES:
        raise InvalidArgument(f"grid size must be an integer >= {MIN_NODES}, got {n}")


def node_grid(length: float, n: int, boundary: str) -> np.ndarray:
    """Arc-length nodes for a uniform grid with the given boundary kind."""
    if boundary not in BOUNDARY_KINDS:
        raise InvalidArgument(f"unknown boundary kind {boundary!r}")
    ds = _spacing(length, n, boundary)
    i = np.arange(n, dtype=float)
    if boundary == "periodic":
        return i * ds
    if boundary == "dirichlet":
        return (i + 1.0) * ds
    return (i + 0.5) * ds


# --------------------------------------------------------------------------
# curves


def _as_callable(f, length, n, closed):
    """Turn curvature samples on the node grid into an interpolant."""
    if callable(f):
        return f
    vals = np.asarray(f, dtype=float)
    if vals.ndim == 0:
        c = float(vals)
        return lambda s: np.full(np.shape(s), c)
    if vals.shape != (n,):
        raise InvalidArgument(f"curvature samples must have length N={n}, got {vals.shape}")
    s = node_grid(length, n, "periodic" if closed else "dirichlet")
    if closed:
        spline = CubicSpline(np.append(s, length), np.append(vals, vals[0]), bc_type="periodic")
    else:
        spline = CubicSpline(s, vals, extrapolate=True)
    return spline


def curve_from_curvature(
    kappa: Callable | Sequence[float] | float,
    length: float,
    closed: bool,
    n: int,
    name: str = "curve",
) -> CurveGeometry:
    """Reconstruct a plane curve from its signed curvature.

    The Frenet system t' = kappa n, n' = -kappa t, X' = t is integrated in
    its angle form (theta' = kappa, X' = (cos theta, sin theta)) with fixed
    step classical RK4 starting from X = 0, t = e_x.  The frame is exactly
    orthonormal to roundoff.  For closed curves the wraparound state is
    compared with the start: the endpoint miss is ``closure_residual`` and
    must stay within ``10 * ds``; the turning number must be an integer to
    the same tolerance.
    """
    _check_grid(length, n)
    kfun = _as_callable(kappa, length, n, closed)
    steps = n if closed else n + 1
    h = length / steps
    # curvature on the half-step lattice used by the RK4 stages
    khalf = np.asarray(kfun(np.arange(2 * steps + 1) * (0.5 * h)), dtype=float)
    if khalf.shape != (2 * steps + 1,) or not np.all(np.isfinite(khalf)):
        raise InvalidArgument("curvature must evaluate to finite values on [0, L]")

    theta = np.empty(steps + 1)
    xy = np.empty((steps + 1, 2))
    th, x, y = 0.0, 0.0, 0.0
    theta[0], xy[0] = th, (x, y)
    for i in range(steps):
        k0, km, k1 = khalf[2 * i], khalf[2 * i + 1], khalf[2 * i + 2]
        t1 = th
        t2 = th + 0.5 * h * k0
        t3 = th + 0.5 * h * km
        t4 = th + h * km
        th = th + h * (k0 + 4.0 * km + k1) / 6.0
        c1, c2, c3, c4 = math.cos(t1), math.cos(t2), math.cos(t3), math.cos(t4)
        s1, s2, s3, s4 = math.sin(t1), math.sin(t2), math.sin(t3), math.sin(t4)
        x += h * (c1 + 2.0 * c2 + 2.0 * c3 + c4) / 6.0
        y += h * (s1 + 2.0 * s2 + 2.0 * s3 + s4) / 6.0
        theta[i + 1] = th
        xy[i + 1] = (x, y)

    closure = None
    winding = None
    if closed:
        turn = theta[-1] / (2.0 * math.pi)
        winding = int(round(turn))
        closure = float(np.hypot(*(xy[-1] - xy[0])))
        if abs(theta[-1] - 2.0 * math.pi * winding) > 10.0 * h:
            raise InconsistentCurvature(
                f"total curvature {theta[-1]:.6g} is not a multiple of 2*pi (tangent does not close)"
            )
        if closure > 10.0 * h:
            raise InconsistentCurvature(
                f"reconstructed endpoint misses the start by {closure:.3g} > 10*ds = {10 * h:.3g}"
            )
        keep = slice(0, n)
    else:
        keep = slice(1, n + 1)

    s = node_grid(length, n, "periodic" if closed else "dirichlet")
    th_nodes = theta[keep]
    tangent = np.column_stack([np.cos(th_nodes), np.sin(th_nodes)])
    normal = np.column_stack([-np.sin(th_nodes), np.cos(th_nodes)])
    return CurveGeometry(
        length=float(length),
        closed=bool(closed),
        s=_frozen(s),
        kappa=_frozen(khalf[0::2][keep]),
        tangent=_frozen(tangent),
        normal=_frozen(normal),
        positions=_frozen(xy[keep]),
        closure_residual=closure,
        winding=winding,
        name=name,
    )


def fit_circle(geom: CurveGeometry) -> np.ndarray:
    """Best-fit circle ``(cx, cy, radius)`` by algebraic least squares."""
    if geom.positions is None:
        raise InvalidArgument("curve has no embedding")
    x, y = geom.positions.T
    A = np.column_stack([x, y, np.ones_like(x)])
    b = x * x + y * y
    (a0, a1, a2), *_ = np.linalg.lstsq(A, b, rcond=None)
    cx, cy = a0 / 2, a1 / 2
    return np.array([cx, cy, math.sqrt(a2 + cx * cx + cy * cy)])


# --------------------------------------------------------------------------
# surfaces of revolution


def _derivatives(f, ds, boundary):
    """Centered first and second differences with second-order one-sided ends."""
    if boundary == "periodic":
        fp = (np.roll(f, -1) - np.roll(f, 1)) / (2 * ds)
        fpp = (np.roll(f, -1) - 2 * f + np.roll(f, 1)) / ds**2
        return fp, fpp
    fp = np.gradient(f, ds, edge_order=2)
    fpp = np.empty_like(f)
    fpp[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / ds**2
    fpp[0] = (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / ds**2
    fpp[-1] = (2 * f[-1] - 5 * f[-2] + 4 * f[-3] - f[-4]) / ds**2
    return fp, fpp


def revolution_from_profile(
    r: Callable | Sequence[float],
    z: Callable | Sequence[float],
    length: float,
    n: int,
    boundary: str = "poles",
    derivatives: tuple[Callable, Callable, Callable, Callable] | None = None,
    name: str = "revolution",
) -> RevolutionGeometry:
    """Sample a surface of revolution and its principal curvatures.

    ``r`` and ``z`` are arc-length parameterized profile functions on
    ``[0, length]`` (or samples on the node grid).  The principal
    curvatures are ``kappa1 = r' z'' - z' r''`` along the profile and
    ``kappa2 = z' / r`` around the axis.  Profile derivatives come from
    ``derivatives = (dr, dz, d2r, d2z)`` when supplied, otherwise from
    centered differences of the samples.
    """
    _check_grid(length, n)
    if boundary not in BOUNDARY_KINDS:
        raise InvalidArgument(f"unknown boundary kind {boundary!r}")
    ds = _spacing(length, n, boundary)
    s = node_grid(length, n, boundary)
    if boundary == "periodic":
        faces = s + 0.5 * ds
    else:
        faces = s[0] - 0.5 * ds + ds * np.arange(n + 1)

    def sample(f, where):
        if callable(f):
            return np.asarray(f(where), dtype=float) * np.ones_like(where)
        vals = np.asarray(f, dtype=float)
        if vals.shape != (n,):
            raise InvalidArgument(f"profile samples must have length N={n}, got {vals.shape}")
        return vals.copy()

    rs, zs = sample(r, s), sample(z, s)
    if callable(r):
        rf = sample(r, faces)
    elif boundary == "periodic":
        rf = 0.5 * (rs + np.roll(rs, -1))
    else:
        rf = np.empty(n + 1)
        rf[1:-1] = 0.5 * (rs[1:] + rs[:-1])
        rf[0], rf[-1] = rs[0], rs[-1]
    if boundary == "poles":
        rf[0] = rf[-1] = 0.0

    bad = np.flatnonzero(~(rs > 0))
    if bad.size:
        i = int(bad[0])
        raise DegenerateProfile(f"profile radius r={rs[i]:.3g} <= 0 at interior node s={s[i]:.6g}")
    if np.any(rf[1:-1] < 0) if boundary != "periodic" else np.any(rf <= 0):
        raise DegenerateProfile("profile radius is not positive on an interior face")

    if derivatives is not None:
        dr, dz, d2r, d2z = (np.asarray(f(s), dtype=float) * np.ones_like(s) for f in derivatives)
    else:
        dr, d2r = _derivatives(rs, ds, boundary)
        dz, d2z = _derivatives(zs, ds, boundary)

    residual = float(np.max(np.abs(dr * dr + dz * dz - 1.0)))
    if residual > ARCLENGTH_TOL:
        raise NotArclength(f"profile is not arc-length parameterized: max |r'^2+z'^2-1| = {residual:.3g}")

    k1 = dr * d2z - dz * d2r
    k2 = dz / rs
    return RevolutionGeometry(
        length=float(length),
        boundary=boundary,
        s=_frozen(s),
        r=_frozen(rs),
        z=_frozen(zs),
        r_face=_frozen(rf),
        kappa1=_frozen(k1),
        kappa2=_frozen(k2),
        h=_frozen(k1 + k2),
        weights=_frozen(rs * ds),
        arclength_residual=residual,
        name=name,
    )


def delta_sup(h, v) -> float:
    """Grid maximum of ``h**2/4 - V``.

    This is a lower estimate of the supremum over the manifold; refine the
    grid when a certified value is needed.
    """
    h = np.asarray(h, dtype=float)
    v = np.asarray(v, dtype=float)
    if h.size == 0:
        raise InvalidArgument("delta_sup needs at least one sample")
    h, v = np.broadcast_arrays(h, v)
    return float(np.max(0.25 * h * h - v))
