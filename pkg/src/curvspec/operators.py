"""Finite-difference Hamiltonians, position/momentum operators, commutators.

Curves use the plain second-order stencil.  Surfaces of revolution are
separated into angular Fourier modes; each mode is a flux-form
Sturm-Liouville operator that is symmetric in the ``r ds`` weighted inner
product and is stored in plain symmetric form after the diagonal
similarity ``D^{-1/2} K D^{-1/2}``, ``D = diag(r)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import InvalidArgument, NeedsEmbedding
from .geometry import CurveGeometry, RevolutionGeometry


@dataclass(frozen=True, eq=False)
class TridiagonalOperator:
    """Symmetric tridiagonal matrix, optionally with periodic corner entries.

    ``corner`` is the common value of the (0, N-1) and (N-1, 0) entries.
    ``weights`` is the quadrature measure of the inner product in which the
    underlying differential operator is symmetric; the matrix itself is the
    plain-symmetric representative, so eigenvectors ``y`` of the matrix map
    to weighted-normalized grid functions via ``u = y / sqrt(weights)``.
    """

    diag: np.ndarray
    offdiag: np.ndarray
    weights: np.ndarray
    corner: float | None = None
    boundary: str = "dirichlet"
    ds: float = 1.0
    source: str = ""
    mode: int | None = None
    potential: np.ndarray | None = None

    def __post_init__(self):
        n = len(self.diag)
        if len(self.offdiag) != n - 1 or len(self.weights) != n:
            raise InvalidArgument("inconsistent tridiagonal array lengths")
        if not np.all(np.asarray(self.weights) > 0):
            raise InvalidArgument("weights must be strictly positive")

    @property
    def n(self) -> int:
        return len(self.diag)

    @property
    def periodic(self) -> bool:
        return self.corner is not None

    def sparse(self) -> sp.csr_matrix:
        n = self.n
        m = sp.diags([self.offdiag, self.diag, self.offdiag], [-1, 0, 1], shape=(n, n), format="lil")
        if self.corner is not None:
            m[0, n - 1] += self.corner
            m[n - 1, 0] += self.corner
        return m.tocsr()

    def dense(self) -> np.ndarray:
        return self.sparse().toarray()

    def matvec(self, x):
        x = np.asarray(x, dtype=float)
        col = (slice(None),) + (None,) * (x.ndim - 1)
        y = self.diag[col] * x
        y[:-1] += self.offdiag[col] * x[1:]
        y[1:] += self.offdiag[col] * x[:-1]
        if self.corner is not None:
            y[0] += self.corner * x[-1]
            y[-1] += self.corner * x[0]
        return y

    def norm_bound(self) -> float:
        """Gershgorin bound on the spectral norm."""
        a = np.abs(self.diag).copy()
        a[:-1] += np.abs(self.offdiag)
        a[1:] += np.abs(self.offdiag)
        if self.corner is not None:
            a[0] += abs(self.corner)
            a[-1] += abs(self.corner)
        return float(a.max())

    def shifted(self, c: float) -> "TridiagonalOperator":
        pot = None if self.potential is None else self.potential + c
        return TridiagonalOperator(
            self.diag + c, self.offdiag, self.weights, self.corner, self.boundary,
            self.ds, self.source, self.mode, pot,
        )

    def to_json(self) -> str:
        doc = {
            "diag": self.diag.tolist(),
            "offdiag": self.offdiag.tolist(),
            "corner": self.corner,
            "weights": self.weights.tolist(),
            "boundary": self.boundary,
            "ds": self.ds,
            "source": self.source,
            "mode": self.mode,
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "TridiagonalOperator":
        doc = json.loads(text)
        return cls(
            diag=np.asarray(doc["diag"], dtype=float),
            offdiag=np.asarray(doc["offdiag"], dtype=float),
            weights=np.asarray(doc["weights"], dtype=float),
            corner=doc.get("corner"),
            boundary=doc.get("boundary", "dirichlet"),
            ds=doc.get("ds", 1.0),
            source=doc.get("source", ""),
            mode=doc.get("mode"),
        )


@dataclass(frozen=True)
class PotentialSpec:
    """Potential energy on a grid.

    ``kind="mean-curvature-squared"`` realizes ``g * h**2`` (the H_g family);
    ``kind="samples"`` uses explicit values.  ``shift`` is added in both
    cases.
    """

    kind: str = "mean-curvature-squared"
    g: float = 0.0
    samples: Sequence[float] | None = None
    shift: float = 0.0

    def __post_init__(self):
        if self.kind not in ("samples", "mean-curvature-squared"):
            raise InvalidArgument(f"unknown potential kind {self.kind!r}")
        if self.kind == "samples" and self.samples is None:
            raise InvalidArgument("explicit potential needs samples")

    @classmethod
    def hg(cls, g: float) -> "PotentialSpec":
        return cls("mean-curvature-squared", g=float(g))

    @classmethod
    def constant(cls, c: float) -> "PotentialSpec":
        return cls("mean-curvature-squared", g=0.0, shift=float(c))

    @property
    def is_hg(self) -> bool:
        return self.kind == "mean-curvature-squared" and self.shift == 0.0

    def realize(self, geom) -> np.ndarray:
        n = geom.n
        if self.kind == "mean-curvature-squared":
            h = np.asarray(geom.h, dtype=float)
            v = self.g * h * h
        else:
            v = np.asarray(self.samples, dtype=float)
            if v.ndim == 0:
                v = np.full(n, float(v))
        if v.shape != (n,):
            raise InvalidArgument(f"potential has {v.size} samples, grid has {n}")
        return v + self.shift if self.shift else v


def _potential(geom, V):
    if isinstance(V, PotentialSpec):
        return V.realize(geom)
    v = np.asarray(V, dtype=float)
    if v.ndim == 0:
        return np.full(geom.n, float(v))
    if v.shape != (geom.n,):
        raise InvalidArgument(f"potential has {v.size} samples, grid has {geom.n}")
    return v


def assemble_curve_hamiltonian(geom: CurveGeometry, V=0.0) -> TridiagonalOperator:
    """Central-difference ``-d^2/ds^2 + V``; Dirichlet ends or periodic wrap."""
    v = _potential(geom, V)
    ds = geom.ds
    inv = 1.0 / (ds * ds)
    n = geom.n
    return TridiagonalOperator(
        diag=2.0 * inv + v,
        offdiag=np.full(n - 1, -inv),
        weights=np.full(n, ds),
        corner=-inv if geom.closed else None,
        boundary=geom.boundary,
        ds=ds,
        source=geom.name,
        potential=v,
    )


def mode_stiffness(geom: RevolutionGeometry, v, m: int):
    """Flux-form (unsymmetrized) arrays of ``r * H_m``: diag, offdiag, corner."""
    ds2 = geom.ds ** 2
    r, rf = geom.r, geom.r_face
    if geom.boundary == "periodic":
        left, right = np.roll(rf, 1), rf
        corner = -rf[-1] / ds2
        off = -rf[:-1] / ds2
    else:
        left, right = rf[:-1], rf[1:]
        corner = None
        off = -rf[1:-1] / ds2
    diag = (left + right) / ds2 + r * v + (m * m) / r
    return diag, off, corner


def assemble_mode_hamiltonian(geom: RevolutionGeometry, V=0.0, m: int = 0) -> TridiagonalOperator:
    """Operator ``-(1/r)(r u')' + m^2/r^2 + V`` for angular mode ``m``.

    Returned in plain symmetric form; ``weights = r ds``.
    """
    if int(m) != m or m < 0:
        raise InvalidArgument(f"mode must be a nonnegative integer, got {m}")
    m = int(m)
    v = _potential(geom, V)
    kd, ko, kc = mode_stiffness(geom, v, m)
    r = geom.r
    sq = np.sqrt(r)
    corner = None if kc is None else kc / (sq[-1] * sq[0])
    return TridiagonalOperator(
        diag=kd / r,
        offdiag=ko / (sq[:-1] * sq[1:]),
        weights=np.asarray(geom.weights),
        corner=corner,
        boundary=geom.boundary,
        ds=geom.ds,
        source=geom.name,
        mode=m,
        potential=v,
    )


@dataclass(frozen=True, eq=False)
class DiscreteVectorOp:
    """R^nu-valued operator stored as one matrix per ambient coordinate.

    Position components are kept as 1-D diagonals; momentum components as
    sparse matrices.
    """

    components: list = field(default_factory=list)
    kind: str = "position"

    @property
    def nu(self) -> int:
        return len(self.components)

    def matrices(self) -> list:
        if self.kind == "position":
            return [sp.diags(c, 0, format="csr") for c in self.components]
        return list(self.components)

    def apply(self, x) -> list:
        """Apply every component to ``x`` (vector or matrix of columns)."""
        x = np.asarray(x, dtype=float)
        if self.kind == "position":
            return [(c[:, None] * x if x.ndim == 2 else c * x) for c in self.components]
        return [m @ x for m in self.components]


def position_operators(geom: CurveGeometry) -> DiscreteVectorOp:
    """Ambient coordinates restricted to the curve, as diagonal operators."""
    if getattr(geom, "positions", None) is None:
        raise NeedsEmbedding("geometry has no reconstructed embedding")
    pos = np.asarray(geom.positions)
    return DiscreteVectorOp([pos[:, k].copy() for k in range(pos.shape[1])], "position")


def _as_matrix(a):
    if isinstance(a, TridiagonalOperator):
        return a.sparse()
    if sp.issparse(a):
        return a.tocsr()
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        return sp.diags(a, 0, format="csr")
    return a


def commutator(a, b):
    """``[A, B] = AB - BA``.

    Accepts dense arrays, scipy sparse matrices, :class:`TridiagonalOperator`
    or 1-D arrays (read as diagonal matrices).  The result is sparse when
    both inputs are.
    """
    A, B = _as_matrix(a), _as_matrix(b)
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise InvalidArgument(f"commutator needs equal square shapes, got {A.shape} and {B.shape}")
    out = A @ B - B @ A
    return out.tocsr() if sp.issparse(out) else np.asarray(out)


def double_commutator(g, h):
    """``[G, [H, G]]``."""
    return commutator(g, commutator(h, g))


def momentum_operator(H: TridiagonalOperator, X: DiscreteVectorOp) -> DiscreteVectorOp:
    """Discrete momentum ``P_m = -(1/2)[H, X_m]``, one sparse matrix per coordinate."""
    if X.kind != "position":
        raise InvalidArgument("momentum_operator expects a position operator")
    n = H.n
    comps = []
    for c in X.components:
        if len(c) != n:
            raise InvalidArgument(f"position has {len(c)} nodes, operator has {n}")
        comps.append((-0.5 * commutator(H, c)).tocsr())
    return DiscreteVectorOp(comps, "momentum")
