"""Eigenpairs of tridiagonal operators and merged spectra with multiplicities.

Tridiagonal problems go through LAPACK's Sturm-sequence bisection
(``stebz``) and inverse iteration with cluster reorthogonalization
(``stein``) via :func:`scipy.linalg.eigh_tridiagonal`; every eigenvalue
is then certified by an independent Sturm count.  Periodic operators are
reduced by Householder tridiagonalization (``sytrd``) first.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import InvalidArgument, SizeExceeded, SolverFailure
from .operators import TridiagonalOperator

DENSE_CAP = 4096
CERT_RTOL = 1e-10


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray
    residual: float
    mode: int | None = None


@dataclass(frozen=True, eq=False)
class EigenBasis:
    """Eigenpairs of one operator.

    ``vectors`` are orthonormal columns of the plain symmetric matrix;
    ``functions`` are the same eigenvectors as grid functions normalized in
    the weighted inner product.
    """

    values: np.ndarray
    vectors: np.ndarray
    weights: np.ndarray
    residuals: np.ndarray
    mode: int | None = None

    @property
    def functions(self) -> np.ndarray:
        return self.vectors / np.sqrt(self.weights)[:, None]

    @property
    def complete(self) -> bool:
        return self.vectors.shape[1] == self.vectors.shape[0]

    def pairs(self) -> list[EigenPair]:
        f = self.functions
        return [
            EigenPair(float(self.values[i]), f[:, i].copy(), float(self.residuals[i]), self.mode)
            for i in range(len(self.values))
        ]


def sturm_count(diag, offdiag, shifts) -> np.ndarray:
    """Number of eigenvalues of the tridiagonal matrix strictly below each shift.

    Counts negative pivots of the LDL^T factorization of ``T - shift*I``.
    """
    d = np.asarray(diag, dtype=float)
    e2 = np.asarray(offdiag, dtype=float) ** 2
    mu = np.atleast_1d(np.asarray(shifts, dtype=float))
    scale = max(float(np.abs(d).max(initial=0.0)), float(np.sqrt(e2.max(initial=0.0))), 1.0)
    pivmin = np.finfo(float).tiny * 1e3 * scale
    q = d[0] - mu
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0).astype(int)
    for i in range(1, len(d)):
        q = (d[i] - mu) - e2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return count


def negative_inertia(matrix, shift: float = 0.0) -> int:
    """Negative inertia of a dense symmetric ``A - shift*I`` from its LDL^T factorization."""
    a = np.asarray(matrix, dtype=float) - shift * np.eye(len(matrix))
    _, dblk, _ = linalg.ldl(a)
    return int(np.sum(np.linalg.eigvalsh(dblk) < 0))


def _residuals(T, values, vectors):
    return np.linalg.norm(T.matvec(vectors) - vectors * values[None, :], axis=0)


def _certify(diag, offdiag, values, tol):
    """Each returned eigenvalue must sit at its own Sturm index within ``tol``."""
    k = len(values)
    idx = np.arange(k)
    below = sturm_count(diag, offdiag, values - tol)
    upto = sturm_count(diag, offdiag, values + tol)
    bad = np.flatnonzero((below > idx) | (upto < idx + 1))
    return bad


def _tridiagonal_eigs(d, e, k):
    attempts = []
    for driver in ("stebz", "stemr"):
        try:
            w, v = linalg.eigh_tridiagonal(
                d, e, select="i", select_range=(0, k - 1), lapack_driver=driver
            )
            return w, v, attempts
        except (linalg.LinAlgError, ValueError) as exc:
            attempts.append(f"{driver}: {exc}")
    try:
        full = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        w, v = linalg.eigh(full, subset_by_index=(0, k - 1))
        return w, v, attempts
    except linalg.LinAlgError as exc:
        attempts.append(f"dense: {exc}")
    raise SolverFailure("tridiagonal eigensolver did not converge", {"attempts": attempts, "n": len(d)})


def _check_k(T, k):
    n = T.n
    if k is None:
        return n
    if int(k) != k or k < 1 or k > n:
        raise InvalidArgument(f"requested {k} eigenpairs from an operator of dimension {n}")
    return int(k)


def eigenbasis(T: TridiagonalOperator, k: int | None = None, dense_cap: int = DENSE_CAP) -> EigenBasis:
    """The ``k`` lowest eigenpairs (all of them when ``k`` is None)."""
    k = _check_k(T, k)
    if T.periodic:
        return _solve_corner(T, k, dense_cap)
    w, v, _ = _tridiagonal_eigs(T.diag, T.offdiag, k)
    tol = CERT_RTOL * T.norm_bound()
    bad = _certify(T.diag, T.offdiag, w, tol)
    if bad.size:
        raise SolverFailure(
            "eigenvalues failed Sturm-count certification",
            {"indices": bad.tolist(), "values": w[bad].tolist(), "tol": tol},
        )
    return EigenBasis(w, v, np.asarray(T.weights), _residuals(T, w, v), T.mode)


def _householder_tridiagonal(a, block: int = 64):
    """Symmetric ``a = Q T Q^T``; returns T's diagonals and a function applying Q."""
    lwork, _ = linalg.lapack.dsytrd_lwork(len(a), lower=1)
    c, d, e, tau, info = linalg.lapack.dsytrd(a, lower=1, lwork=max(int(lwork), 1))
    if info != 0:
        raise SolverFailure("Householder tridiagonalization failed", {"info": int(info)})

    n = len(a)
    nref = max(n - 1, 0)
    # Reflector i is I - tau_i v_i v_i^T with v_i = e_{i+1} + c[i+2:, i].
    V = np.tril(c, -1)[:, :nref].copy()
    V[np.arange(1, nref + 1), np.arange(nref)] = 1.0
    blocks = []
    for b0 in range(0, nref, block):
        b1 = min(b0 + block, nref)
        Vb = V[:, b0:b1]
        tb = tau[b0:b1]
        T = np.zeros((b1 - b0, b1 - b0))
        VtV = Vb.T @ Vb
        for j in range(b1 - b0):
            T[j, j] = tb[j]
            if j:
                T[:j, j] = -tb[j] * (T[:j, :j] @ VtV[:j, j])
        blocks.append((Vb, T))

    def apply_q(y):
        """``Q y`` with Q = H_0 H_1 ... H_{n-2}, applied blockwise (compact WY)."""
        y = np.array(y, dtype=float)
        for Vb, T in reversed(blocks):
            y -= Vb @ (T @ (Vb.T @ y))
        return y

    return d, e, apply_q


def _solve_corner(T, k, dense_cap):
    if T.n > dense_cap:
        raise SizeExceeded(f"periodic operator of size {T.n} exceeds the dense cap {dense_cap}")
    d, e, apply_q = _householder_tridiagonal(T.dense())
    w, y, _ = _tridiagonal_eigs(d, e, k)
    tol = CERT_RTOL * T.norm_bound()
    bad = _certify(d, e, w, tol)
    if bad.size:
        raise SolverFailure(
            "eigenvalues failed Sturm-count certification",
            {"indices": bad.tolist(), "values": w[bad].tolist(), "tol": tol},
        )
    v = apply_q(y)
    return EigenBasis(w, v, np.asarray(T.weights), _residuals(T, w, v), T.mode)


def solve_symmetric_tridiagonal(T: TridiagonalOperator, k: int) -> list[EigenPair]:
    """``k`` smallest eigenpairs of a plain tridiagonal operator."""
    if T.periodic:
        raise InvalidArgument("operator has corner entries; use solve_with_corner")
    return eigenbasis(T, k).pairs()


def solve_with_corner(T: TridiagonalOperator, k: int, dense_cap: int = DENSE_CAP) -> list[EigenPair]:
    """``k`` smallest eigenpairs of a tridiagonal-plus-corner operator."""
    if not T.periodic:
        raise InvalidArgument("operator has no corner entries; use solve_symmetric_tridiagonal")
    return _solve_corner(T, _check_k(T, k), dense_cap).pairs()


# --------------------------------------------------------------------------
# spectra


def default_tolerance(values) -> float:
    values = np.asarray(values, dtype=float)
    top = float(np.abs(values).max()) if values.size else 0.0
    return 1e-9 * (1.0 + top)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalue list together with its level structure.

    ``values`` is the expanded list (each eigenvalue repeated by
    multiplicity, 1-based position ``k`` is lambda_k).  Levels are maximal
    runs of values within ``tol`` of their neighbour; ``levels`` holds the
    first value of each run.  ``ds`` is the grid spacing of a numerical
    spectrum (``None`` for closed-form spectra) and sets the
    discretization tolerance of the bound checks.
    """

    values: np.ndarray
    tol: float
    source: str = "numerical"
    modes: np.ndarray | None = None
    residuals: np.ndarray | None = None
    ds: float | None = None
    _starts: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.size and np.any(np.diff(v) < 0):
            raise InvalidArgument("spectrum values must be ascending")
        starts = np.flatnonzero(np.concatenate([[True], np.diff(v) > self.tol])) if v.size else np.array([], int)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "_starts", starts)

    @classmethod
    def from_values(cls, values, tol=None, source="numerical", modes=None, residuals=None, ds=None):
        values = np.asarray(values, dtype=float)
        order = np.argsort(values, kind="stable")
        values = values[order]
        modes = None if modes is None else np.asarray(modes)[order]
        residuals = None if residuals is None else np.asarray(residuals, dtype=float)[order]
        if tol is None:
            tol = default_tolerance(values)
        return cls(values, float(tol), source, modes, residuals, ds)

    @classmethod
    def from_levels(cls, levels, multiplicities, source="analytic", tol=None):
        levels = np.asarray(levels, dtype=float)
        mult = np.asarray(multiplicities, dtype=int)
        if np.any(mult < 1):
            raise InvalidArgument("multiplicities must be positive")
        if tol is None:
            tol = default_tolerance(levels)
        return cls(np.repeat(levels, mult), float(tol), source)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def levels(self) -> np.ndarray:
        return self.values[self._starts]

    @property
    def multiplicities(self) -> np.ndarray:
        return np.diff(np.append(self._starts, len(self.values)))

    def lam(self, k: int) -> float:
        """lambda_k with 1-based indexing."""
        if not 1 <= k <= len(self.values):
            raise InvalidArgument(f"lambda_{k} outside the computed spectrum of length {len(self.values)}")
        return float(self.values[k - 1])

    def separated(self, n: int) -> bool:
        """True when lambda_{n+1} != lambda_n after degeneracy merging."""
        if not 1 <= n < len(self.values):
            return False
        return bool(np.isin(n, self._starts))

    def valid_gaps(self, n_max: int | None = None) -> list[int]:
        top = len(self.values) - 1 if n_max is None else min(n_max, len(self.values) - 1)
        return [n for n in range(1, top + 1) if self.separated(n)]

    def mean(self, n: int) -> float:
        return float(np.mean(self.values[:n]))

    def mean_square(self, n: int) -> float:
        return float(np.mean(self.values[:n] ** 2))

    def truncated(self, count: int) -> "Spectrum":
        """First ``count`` values; a level cut in the middle is dropped entirely."""
        count = min(count, len(self.values))
        ends = np.append(self._starts[1:], len(self.values))
        keep = ends[ends <= count]
        cut = int(keep[-1]) if keep.size else 0
        return Spectrum(
            self.values[:cut], self.tol, self.source,
            None if self.modes is None else self.modes[:cut],
            None if self.residuals is None else self.residuals[:cut],
            self.ds,
        )

    def scaled(self, factor: float) -> "Spectrum":
        ds = None if self.ds is None else self.ds / np.sqrt(abs(factor))
        return Spectrum(self.values * factor, self.tol * abs(factor), self.source, self.modes, self.residuals, ds)

    def to_csv(self, fh=None) -> str:
        """One row per level: index (1-based), lambda, multiplicity, mode, residual."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "lambda", "multiplicity", "mode", "residual"])
        ends = np.append(self._starts[1:], len(self.values))
        for a, b in zip(self._starts, ends):
            mode = ""
            if self.modes is not None:
                ms = set(self.modes[a:b].tolist())
                if len(ms) == 1:
                    mode = str(ms.pop())
            res = "" if self.residuals is None else f"{float(np.max(self.residuals[a:b])):.12g}"
            w.writerow([int(a) + 1, f"{self.values[a]:.12g}", int(b - a), mode, res])
        text = buf.getvalue()
        if fh is not None:
            fh.write(text)
        return text


def merge_mode_spectra(per_mode, tol=None, ds=None) -> Spectrum:
    """Merge per-mode eigenvalue lists of a surface of revolution.

    ``per_mode`` is a sequence of ``(m, values)`` or ``(m, values,
    residuals)``.  Modes ``m >= 1`` carry the cos/sin pair and enter with
    multiplicity two.
    """
    vals, modes, res = [], [], []
    for item in per_mode:
        m, v = item[0], np.asarray(item[1], dtype=float)
        r = np.asarray(item[2], dtype=float) if len(item) > 2 else np.zeros_like(v)
        if v.size > 1 and np.any(np.diff(v) < 0):
            raise InvalidArgument(f"mode {m} eigenvalues are not ascending")
        rep = 1 if m == 0 else 2
        vals.append(np.repeat(v, rep))
        modes.append(np.full(v.size * rep, m))
        res.append(np.repeat(r, rep))
    if not vals:
        return Spectrum(np.array([]), 0.0)
    return Spectrum.from_values(
        np.concatenate(vals), tol=tol, modes=np.concatenate(modes), residuals=np.concatenate(res), ds=ds
    )
