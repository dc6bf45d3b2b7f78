"""Registry of built-in curvature profiles and surface profiles, and JSON ingestion."""

from __future__ import annotations

import math

import numpy as np

from .errors import InvalidArgument
from .geometry import SphereGeometry, curve_from_curvature, revolution_from_profile

TWO_PI = 2.0 * math.pi


# --------------------------------------------------------------------------
# curvature functions kappa(s) on [0, L]


def constant_kappa(length, value=None, winding=1):
    """Constant curvature; defaults to the circle ``2 pi winding / L``."""
    c = TWO_PI * winding / length if value is None else float(value)
    return lambda s: np.full(np.shape(s), c)


def sinusoidal_kappa(length, amplitude=0.5, frequency=2, phase=0.0, base=None, winding=1):
    """``base + amplitude * sin(2 pi frequency s / L + phase)``.

    An even ``frequency`` keeps a closed curve closed.
    """
    b = TWO_PI * winding / length if base is None else float(base)
    w = TWO_PI * frequency / length
    return lambda s: b + amplitude * np.sin(w * np.asarray(s, dtype=float) + phase)


def random_kappa(length, seed=0, modes=3, amplitude=0.5):
    """Seeded random closed-curve curvature.

    ``2 pi / L`` plus zero-mean harmonics of period ``L/2`` with
    coefficients decaying like ``1/j^2``.  The half-period symmetry makes
    the tangent angle advance by exactly ``pi`` over each half, so the
    curve closes for every draw.  ``amplitude`` is relative to ``2 pi / L``.
    """
    rng = np.random.default_rng(seed)
    j = np.arange(1, modes + 1)
    a = rng.normal(size=modes) / j**2
    b = rng.normal(size=modes) / j**2
    scale = amplitude * TWO_PI / length
    w = 2.0 * TWO_PI * j / length

    def kappa(s):
        s = np.asarray(s, dtype=float)
        ph = np.multiply.outer(s, w)
        return TWO_PI / length + scale * (np.cos(ph) @ a + np.sin(ph) @ b)

    return kappa


CURVATURES = {
    "constant": constant_kappa,
    "sinusoidal": sinusoidal_kappa,
    "random": random_kappa,
}


# --------------------------------------------------------------------------
# surface profiles: (r, z, derivatives, length, boundary)


def sphere_profile(radius=1.0):
    p = float(radius)
    r = lambda s: p * np.sin(np.asarray(s) / p)  # noqa: E731
    z = lambda s: -p * np.cos(np.asarray(s) / p)  # noqa: E731
    dr = lambda s: np.cos(np.asarray(s) / p)  # noqa: E731
    dz = lambda s: np.sin(np.asarray(s) / p)  # noqa: E731
    d2r = lambda s: -np.sin(np.asarray(s) / p) / p  # noqa: E731
    d2z = lambda s: np.cos(np.asarray(s) / p) / p  # noqa: E731
    return r, z, (dr, dz, d2r, d2z), math.pi * p, "poles"


def torus_profile(R=3.0, a=1.0):
    """Tube of radius ``a`` around a circle of radius ``R`` (``R > a``)."""
    if not R > a > 0:
        raise InvalidArgument(f"torus needs R > a > 0, got R={R}, a={a}")
    r = lambda s: R + a * np.cos(np.asarray(s) / a)  # noqa: E731
    z = lambda s: a * np.sin(np.asarray(s) / a)  # noqa: E731
    dr = lambda s: -np.sin(np.asarray(s) / a)  # noqa: E731
    dz = lambda s: np.cos(np.asarray(s) / a)  # noqa: E731
    d2r = lambda s: -np.cos(np.asarray(s) / a) / a  # noqa: E731
    d2z = lambda s: -np.sin(np.asarray(s) / a) / a  # noqa: E731
    return r, z, (dr, dz, d2r, d2z), TWO_PI * a, "periodic"


def cylinder_profile(radius=1.0, length=1.0):
    p = float(radius)
    r = lambda s: np.full(np.shape(s), p)  # noqa: E731
    z = lambda s: np.asarray(s, dtype=float)  # noqa: E731
    zero = lambda s: np.zeros(np.shape(s))  # noqa: E731
    one = lambda s: np.ones(np.shape(s))  # noqa: E731
    return r, z, (zero, one, zero, zero), float(length), "dirichlet"


PROFILES = {
    "sphere": sphere_profile,
    "torus": torus_profile,
    "cylinder": cylinder_profile,
}


def registry() -> dict:
    return {"kappa": sorted(CURVATURES) + ["samples"], "profile": sorted(PROFILES) + ["samples"]}


# --------------------------------------------------------------------------
# JSON ingestion


def _expr(doc, key):
    e = doc.get(key)
    if not isinstance(e, dict) or "expr-id" not in e:
        raise InvalidArgument(f"geometry needs a {key!r} object with an 'expr-id'")
    params = e.get("params", {}) or {}
    if not isinstance(params, dict):
        raise InvalidArgument(f"{key}.params must be an object")
    return e["expr-id"], params


def geometry_from_json(doc: dict, n: int | None = None):
    """Build a geometry from ``{"kind", "closed", "L", "N", "kappa" | "profile"}``.

    ``n`` overrides the document's ``N`` (used by refinement studies).
    """
    kind = doc.get("kind")
    if kind == "sphere":
        return SphereGeometry(int(doc.get("d", 2)), float(doc.get("radius", 1.0)))
    N = int(n if n is not None else doc.get("N", 256))
    if kind == "curve":
        closed = bool(doc.get("closed", True))
        L = float(doc.get("L", 1.0))
        eid, params = _expr(doc, "kappa")
        if eid == "samples":
            kappa = np.asarray(params.get("values"), dtype=float)
        elif eid in CURVATURES:
            try:
                kappa = CURVATURES[eid](L, **params)
            except TypeError as exc:
                raise InvalidArgument(f"kappa {eid!r}: {exc}") from None
        else:
            raise InvalidArgument(f"unknown curvature expr-id {eid!r}")
        return curve_from_curvature(kappa, L, closed, N, name=doc.get("name", eid))
    if kind == "revolution":
        eid, params = _expr(doc, "profile")
        if eid == "samples":
            L = float(doc["L"])
            return revolution_from_profile(
                np.asarray(params["r"], dtype=float), np.asarray(params["z"], dtype=float), L, N,
                boundary=params.get("boundary", "poles"), name=doc.get("name", eid),
            )
        if eid not in PROFILES:
            raise InvalidArgument(f"unknown profile expr-id {eid!r}")
        try:
            r, z, der, L, boundary = PROFILES[eid](**params)
        except TypeError as exc:
            raise InvalidArgument(f"profile {eid!r}: {exc}") from None
        return revolution_from_profile(r, z, L, N, boundary=boundary, derivatives=der,
                                       name=doc.get("name", eid))
    raise InvalidArgument(f"unknown geometry kind {kind!r}")
