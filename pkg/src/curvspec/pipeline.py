"""Geometry -> operator -> spectrum plumbing shared by the scenarios and the CLI."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigensolve import DENSE_CAP, EigenBasis, Spectrum, eigenbasis, merge_mode_spectra
from .errors import InvalidArgument
from .geometry import CurveGeometry, RevolutionGeometry
from .operators import TridiagonalOperator, assemble_curve_hamiltonian, assemble_mode_hamiltonian


@dataclass(frozen=True, eq=False)
class CurveProblem:
    geom: CurveGeometry
    H: TridiagonalOperator
    basis: EigenBasis
    spectrum: Spectrum


@dataclass(frozen=True, eq=False)
class RevolutionProblem:
    geom: RevolutionGeometry
    operators: dict
    bases: dict
    spectrum: Spectrum
    cutoff: float


def solve_curve(geom: CurveGeometry, V=0.0, k: int | None = None, dense_cap: int = DENSE_CAP) -> CurveProblem:
    """Assemble and solve ``-d^2/ds^2 + V``; ``k=None`` gives the full basis."""
    H = assemble_curve_hamiltonian(geom, V)
    basis = eigenbasis(H, k, dense_cap)
    spec = Spectrum.from_values(basis.values, residuals=basis.residuals, ds=geom.ds)
    if k is not None and k < H.n:
        # the partner of a degenerate top value may be missing
        top = basis.values[-1] - spec.tol
        spec = spec.truncated(int(np.searchsorted(spec.values, top, side="right")))
    return CurveProblem(geom, H, basis, spec)


def solve_revolution(geom: RevolutionGeometry, V=0.0, k: int = 40, mode_cap: int = 8,
                     dense_cap: int = DENSE_CAP) -> RevolutionProblem:
    """Per-mode solves for ``m = 0..mode_cap`` merged into one spectrum.

    Since ``H_m = H_0 + m^2/r^2`` the modes above the cap only contribute
    eigenvalues ``>= lambda_1(H_0) + (mode_cap + 1)^2 / max(r)^2``, and each
    mode is complete below its ``k``-th value.  The merged spectrum keeps
    only values below both limits, cut at a level boundary.
    """
    if mode_cap < 0:
        raise InvalidArgument("mode cap must be nonnegative")
    k = min(k, geom.n)
    ops, bases, per_mode = {}, {}, []
    limit = np.inf
    for m in range(mode_cap + 1):
        H = assemble_mode_hamiltonian(geom, V, m)
        b = eigenbasis(H, k, dense_cap)
        ops[m], bases[m] = H, b
        per_mode.append((m, b.values, b.residuals))
        if k < geom.n:
            limit = min(limit, float(b.values[-1]))
    rmax = float(np.max(geom.r))
    limit = min(limit, float(bases[0].values[0]) + (mode_cap + 1) ** 2 / rmax**2)
    merged = merge_mode_spectra(per_mode, ds=geom.ds)
    count = int(np.searchsorted(merged.values, limit, side="left"))
    spec = merged.truncated(count)
    return RevolutionProblem(geom, ops, bases, spec, limit)
