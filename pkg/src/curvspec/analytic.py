"""Closed-form spectra used as exact oracles: circle, interval, round sphere."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, pi

import numpy as np

from .eigensolve import Spectrum
from .errors import InvalidArgument


@dataclass(frozen=True)
class AnalyticSpectrumSpec:
    family: str
    length: float | None = None
    g: float = 0.0
    dim: int = 2
    radius: float = 1.0
    level_cap: int = 20

    def __post_init__(self):
        if self.family not in ("circle", "interval", "sphere"):
            raise InvalidArgument(f"unknown analytic family {self.family!r}")
        if self.level_cap < 1:
            raise InvalidArgument("level cap must be >= 1")

    def spectrum(self) -> Spectrum:
        if self.family == "circle":
            return circle_spectrum(self.length, self.g, self.level_cap)
        if self.family == "interval":
            return interval_spectrum(self.length, self.level_cap)
        return sphere_spectrum(self.dim, self.g, self.radius, self.level_cap)


def circle_spectrum(length: float, g: float = 0.0, level_cap: int = 20) -> Spectrum:
    """``-d^2/ds^2 + g kappa^2`` on a circle of circumference ``length``.

    Levels ``k = 0..level_cap`` have value ``(2 pi k / L)^2 + g (2 pi / L)^2``;
    multiplicity 1 for ``k = 0`` and 2 otherwise.
    """
    if not length > 0:
        raise InvalidArgument("circle length must be positive")
    k = np.arange(level_cap + 1, dtype=float)
    q = 2.0 * pi / length
    levels = (q * k) ** 2 + g * q * q
    mult = np.where(k == 0, 1, 2)
    return Spectrum.from_levels(levels, mult)


def harmonic_multiplicity(dim: int, level: int) -> int:
    """Dimension of degree-``level`` spherical harmonics on S^dim."""
    if level == 0:
        return 1
    if dim == 1:
        return 2
    return comb(level + dim, dim) - comb(level + dim - 2, dim)


def sphere_spectrum(dim: int = 2, g: float = 0.0, radius: float = 1.0, level_cap: int = 20) -> Spectrum:
    """``-Delta + g h^2`` on the round sphere S^dim of the given radius.

    ``h = dim / radius``; level ``l`` has value
    ``l (l + dim - 1) / radius^2 + g dim^2 / radius^2``.
    """
    if int(dim) != dim or dim < 1:
        raise InvalidArgument("sphere dimension must be a positive integer")
    if not radius > 0:
        raise InvalidArgument("sphere radius must be positive")
    ls = np.arange(level_cap + 1)
    levels = (ls * (ls + dim - 1) + g * dim * dim) / radius**2
    mult = [harmonic_multiplicity(dim, int(l)) for l in ls]
    return Spectrum.from_levels(levels.astype(float), mult)


def interval_spectrum(length: float, level_cap: int = 20) -> Spectrum:
    """Dirichlet Laplacian on ``[0, length]``: ``(k pi / L)^2``, ``k >= 1``."""
    if not length > 0:
        raise InvalidArgument("interval length must be positive")
    k = np.arange(1, level_cap + 1, dtype=float)
    return Spectrum.from_levels((k * pi / length) ** 2, np.ones(level_cap, dtype=int))


def fd_interval_eigenvalues(length: float, n: int) -> np.ndarray:
    """Eigenvalues of the n-point central-difference Dirichlet Laplacian."""
    ds = length / (n + 1)
    k = np.arange(1, n + 1)
    return (2.0 / ds**2) * (1.0 - np.cos(k * pi * ds / length))
