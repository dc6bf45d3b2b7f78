"""Scenario documents: parsing, built-in registry, evaluation and refinement studies.

A scenario is a JSON object with a list of ``cases``; a document without
``cases`` is read as a single case.  Each case names a geometry (see
:func:`curvspec.library.geometry_from_json`) or an analytic spectrum, a
potential, solver settings and the bound groups to evaluate.
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import bounds
from .analytic import AnalyticSpectrumSpec
from .convergence import observed_order, richardson_order
from .eigensolve import DENSE_CAP, eigenbasis
from .errors import CurvspecError, InvalidArgument, ScenarioError
from .geometry import CurveGeometry, RevolutionGeometry, SphereGeometry, delta_sup
from .library import CURVATURES, geometry_from_json
from .operators import PotentialSpec, momentum_operator, position_operators
from .pipeline import solve_curve, solve_revolution
from .report import BoundReport

BOUND_GROUPS = (
    "ratio",
    "gap-delta",
    "curve-gap",
    "hypersurface-gap",
    "hile-protter",
    "yang",
    "gap-interval",
    "partition",
    "identities",
    "sum-rules",
    "frenet-identity",
    "canonical-commutation",
)

# accuracy window for heat-trace checks on numerical spectra: keep values
# whose central-difference relative error (about lambda ds^2 / 12) is tiny
PARTITION_ACCURACY = 0.01


@dataclass
class Case:
    name: str
    geometry: dict | None = None
    analytic: dict | None = None
    potential: dict = field(default_factory=lambda: {"kind": "zero"})
    solver: dict = field(default_factory=dict)
    bounds: list = field(default_factory=list)
    n_max: int = 30
    t_grid: dict | None = None
    n_values: list | None = None


@dataclass
class Scenario:
    name: str
    cases: list
    description: str = ""
    seed: int | None = None
    n_list: list | None = None


# --------------------------------------------------------------------------
# parsing


def _need(cond, msg, where):
    if not cond:
        raise ScenarioError(msg, where)


def parse_scenario(doc) -> Scenario:
    """Validate a scenario document and return a :class:`Scenario`."""
    _need(isinstance(doc, dict), "scenario must be a JSON object", "$")
    raw_cases = doc.get("cases")
    if raw_cases is None:
        raw_cases = [doc]
    _need(isinstance(raw_cases, list), "'cases' must be a list", "$.cases")
    cases = []
    for i, c in enumerate(raw_cases):
        where = f"$.cases[{i}]"
        _need(isinstance(c, dict), "case must be an object", where)
        has_geom, has_an = "geometry" in c, "analytic" in c
        _need(has_geom != has_an, "case needs exactly one of 'geometry' or 'analytic'", where)
        if has_geom:
            g = c["geometry"]
            _need(isinstance(g, dict), "geometry must be an object", where + ".geometry")
            _need(g.get("kind") in ("curve", "revolution", "sphere"),
                  "geometry.kind must be curve, revolution or sphere", where + ".geometry.kind")
            if "N" in g:
                _need(isinstance(g["N"], int) and g["N"] >= 16, "N must be an integer >= 16",
                      where + ".geometry.N")
        else:
            a = c["analytic"]
            _need(isinstance(a, dict) and a.get("family") in ("circle", "interval", "sphere"),
                  "analytic.family must be circle, interval or sphere", where + ".analytic.family")
        sel = c.get("bounds", [])
        if sel == "all":
            sel = list(BOUND_GROUPS)
        _need(isinstance(sel, list), "bounds must be a list or \"all\"", where + ".bounds")
        for j, b in enumerate(sel):
            _need(b in BOUND_GROUPS, f"unknown bound group {b!r}", f"{where}.bounds[{j}]")
        pot = c.get("potential", {"kind": "zero"})
        _need(isinstance(pot, dict) and pot.get("kind") in ("zero", "hg", "constant", "samples"),
              "potential.kind must be zero, hg, constant or samples", where + ".potential")
        if pot.get("kind") == "hg":
            _need(isinstance(pot.get("g"), (int, float)), "hg potential needs a numeric g", where + ".potential.g")
        n_max = c.get("n_max", 30)
        _need(isinstance(n_max, int) and n_max >= 1, "n_max must be a positive integer", where + ".n_max")
        solver = c.get("solver", {})
        _need(isinstance(solver, dict), "solver must be an object", where + ".solver")
        nl = solver.get("N_list")
        if nl is not None:
            _need(isinstance(nl, list) and all(isinstance(x, int) and x >= 16 for x in nl)
                  and all(a < b for a, b in zip(nl, nl[1:])),
                  "N_list must be ascending integers >= 16", where + ".solver.N_list")
        cases.append(Case(
            name=str(c.get("name", f"case{i}")),
            geometry=copy.deepcopy(c.get("geometry")),
            analytic=copy.deepcopy(c.get("analytic")),
            potential=dict(pot),
            solver=dict(solver),
            bounds=list(sel),
            n_max=n_max,
            t_grid=c.get("t_grid"),
            n_values=c.get("n_values"),
        ))
    names = [c.name for c in cases]
    _need(len(set(names)) == len(names), "case names must be unique", "$.cases")
    seed = doc.get("seed")
    _need(seed is None or (isinstance(seed, int) and seed >= 0), "seed must be a nonnegative integer", "$.seed")
    return Scenario(str(doc.get("name", "scenario")), cases, str(doc.get("description", "")), seed)


def load_scenario(path) -> Scenario:
    """Read a scenario file or a built-in name."""
    if path in BUILTINS:
        return parse_scenario(BUILTINS[path]())
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc.strerror}", str(path)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    return parse_scenario(doc)


def schema() -> dict:
    return json.loads(resources.files("curvspec").joinpath("schemas/scenario.schema.json").read_text())


# --------------------------------------------------------------------------
# built-in scenarios


def _curve(kappa, n, L=1.0, closed=True, name=None):
    d = {"kind": "curve", "closed": closed, "L": L, "N": n, "kappa": kappa}
    if name:
        d["name"] = name
    return d


def _circle(n):
    return _curve({"expr-id": "constant", "params": {}}, n)


SHARP_BOUNDS = ["ratio", "gap-delta", "curve-gap", "hile-protter", "yang", "gap-interval", "partition"]
INEQUALITIES = ["ratio", "gap-delta", "curve-gap", "hypersurface-gap", "hile-protter", "yang",
                "gap-interval", "partition"]


def _circle_sharp():
    return {
        "name": "circle-sharp",
        "description": "unit-length circle, g = 1/4: ratio and curve gap bounds attain equality",
        "cases": [{
            "name": "circle-g0.25",
            "geometry": _circle(1024),
            "potential": {"kind": "hg", "g": 0.25},
            "solver": {"k": 64},
            "bounds": SHARP_BOUNDS + ["identities"],
        }],
    }


def _sphere_yang():
    return {
        "name": "sphere-yang",
        "description": "analytic S^2 spectrum, g = 1/4: gap intervals exact at n = m^2, m = 1..10",
        "cases": [{
            "name": "sphere-analytic-g0.25",
            "analytic": {"family": "sphere", "d": 2, "g": 0.25, "level_cap": 40},
            "potential": {"kind": "hg", "g": 0.25},
            "bounds": ["ratio", "gap-delta", "hypersurface-gap", "hile-protter", "yang", "gap-interval",
                       "partition"],
            "n_values": [m * m for m in range(1, 11)],
            "t_grid": {"min": 0.05, "max": 10.0, "count": 200},
        }],
    }


def _torus_inequalities():
    torus = {"kind": "revolution", "N": 512, "profile": {"expr-id": "torus", "params": {"R": 3.0, "a": 1.0}}}
    sphere = {"kind": "revolution", "N": 512, "profile": {"expr-id": "sphere", "params": {"radius": 1.0}}}
    cases = []
    for g in (0.1, 0.25, 1.0):
        cases.append({"name": f"circle-g{g}", "geometry": _circle(1024), "potential": {"kind": "hg", "g": g},
                      "solver": {"k": 64}, "bounds": INEQUALITIES + ["identities"]})
        cases.append({"name": f"sphere-analytic-g{g}", "analytic": {"family": "sphere", "d": 2, "g": g},
                      "potential": {"kind": "hg", "g": g}, "bounds": INEQUALITIES})
        cases.append({"name": f"sphere-numerical-g{g}", "geometry": sphere,
                      "potential": {"kind": "hg", "g": g}, "solver": {"k": 40, "mode_cap": 10},
                      "bounds": INEQUALITIES + ["identities"]})
    for label, pot in (("V0", {"kind": "zero"}), ("hg0.25", {"kind": "hg", "g": 0.25})):
        cases.append({"name": f"torus-{label}", "geometry": torus, "potential": pot,
                      "solver": {"k": 40, "mode_cap": 16}, "bounds": INEQUALITIES + ["identities"]})
    gs = (0.1, 0.25, 1.0)
    for i in range(20):
        kappa = {"expr-id": "random", "params": {"seed_offset": i, "modes": 3, "amplitude": 0.5}}
        cases.append({"name": f"random-{i:02d}", "geometry": _curve(kappa, 1024),
                      "potential": {"kind": "hg", "g": gs[i % 3]}, "solver": {"k": 64},
                      "bounds": INEQUALITIES + ["identities"]})
    return {"name": "torus-inequalities",
            "description": "inequality suite: circles, spheres, torus (V = 0 and h^2/4), 20 random closed curves",
            "cases": cases}


def _sphere_numerical():
    return {
        "name": "sphere-numerical",
        "description": "unit sphere by separation of variables, N = 1024 per mode, modes m <= 8, g = 1/4",
        "cases": [{
            "name": "sphere-numerical-g0.25",
            "geometry": {"kind": "revolution", "N": 1024, "profile": {"expr-id": "sphere", "params": {}}},
            "potential": {"kind": "hg", "g": 0.25},
            "solver": {"k": 40, "mode_cap": 8},
            "bounds": ["ratio", "gap-delta", "hypersurface-gap", "hile-protter", "yang", "partition",
                       "identities"],
        }],
    }


def _interval_baseline():
    return {
        "name": "interval-baseline",
        "description": "flat Dirichlet interval of length pi: canonical commutation and gap lemma",
        "cases": [{
            "name": "interval",
            "geometry": _curve({"expr-id": "constant", "params": {"value": 0.0}}, 1023, L=math.pi,
                               closed=False),
            "potential": {"kind": "zero"},
            "solver": {"k": 40},
            "bounds": ["curve-gap", "gap-delta", "hile-protter", "yang", "gap-interval", "identities",
                       "canonical-commutation"],
        }],
    }


def _circle_converge():
    return {
        "name": "circle-converge",
        "description": "circle g = 1/4 and a random closed curve under refinement N = 256, 512, 1024",
        "cases": [
            {"name": "circle-g0.25", "geometry": _circle(256), "potential": {"kind": "hg", "g": 0.25},
             "solver": {"N_list": [256, 512, 1024]},
             "bounds": ["sum-rules", "frenet-identity"]},
            {"name": "circle-g0.25-shift", "geometry": _circle(256),
             "potential": {"kind": "hg", "g": 0.25, "shift": 3.0},
             "solver": {"N_list": [256, 512, 1024]}, "bounds": []},
            {"name": "random-00", "geometry": _curve({"expr-id": "random", "params": {"seed_offset": 0}}, 256),
             "potential": {"kind": "zero"}, "solver": {"N_list": [256, 512, 1024]},
             "bounds": ["sum-rules", "frenet-identity"]},
            {"name": "interval", "geometry": _curve({"expr-id": "constant", "params": {"value": 0.0}}, 255,
                                                     L=math.pi, closed=False),
             "potential": {"kind": "zero"}, "solver": {"N_list": [255, 511, 1023]}, "bounds": []},
        ],
    }


BUILTINS = {
    "circle-sharp": _circle_sharp,
    "sphere-yang": _sphere_yang,
    "torus-inequalities": _torus_inequalities,
    "sphere-numerical": _sphere_numerical,
    "interval-baseline": _interval_baseline,
    "circle-converge": _circle_converge,
}


def list_scenarios() -> list[tuple[str, str]]:
    return [(name, BUILTINS[name]()["description"]) for name in sorted(BUILTINS)]


# --------------------------------------------------------------------------
# evaluation


@dataclass
class Context:
    """Everything the bound evaluators need for one case."""

    name: str
    d: int
    spectrum: object
    g: float | None = None
    delta: float | None = None
    geom: object = None
    H: object = None
    basis: object = None
    mode_ops: dict | None = None
    mode_bases: dict | None = None


def _resolve_seeds(geom_doc, seed):
    doc = copy.deepcopy(geom_doc)
    k = doc.get("kappa")
    if isinstance(k, dict) and k.get("expr-id") == "random":
        params = dict(k.get("params", {}))
        off = params.pop("seed_offset", None)
        if off is not None:
            params["seed"] = int(seed) + int(off)
        params.setdefault("seed", int(seed))
        k["params"] = params
    elif isinstance(k, dict) and k.get("expr-id") not in (None, "samples") and k.get("expr-id") not in CURVATURES:
        raise InvalidArgument(f"unknown curvature expr-id {k.get('expr-id')!r}")
    return doc


def _potential(pot) -> tuple[object, float | None]:
    kind = pot.get("kind", "zero")
    shift = float(pot.get("shift", 0.0))
    if kind == "hg":
        g = float(pot["g"])
        return PotentialSpec("mean-curvature-squared", g=g, shift=shift), (g if shift == 0 else None)
    if kind == "constant":
        return PotentialSpec.constant(float(pot.get("value", 0.0)) + shift), None
    if kind == "samples":
        return PotentialSpec("samples", samples=pot["values"], shift=shift), None
    return PotentialSpec.constant(shift), (0.0 if shift == 0 else None)


def build_context(case: Case, seed: int = 0, dense_cap: int = DENSE_CAP, n: int | None = None) -> Context:
    """Solve the case's eigenproblem (or build its analytic spectrum)."""
    V, g = _potential(case.potential)
    s = case.solver
    if case.analytic is not None:
        a = case.analytic
        fam = a["family"]
        gval = float(case.potential.get("g", 0.0)) if case.potential.get("kind") == "hg" else 0.0
        if fam == "sphere":
            d, rad = int(a.get("d", 2)), float(a.get("radius", 1.0))
            spec = AnalyticSpectrumSpec("sphere", g=gval, dim=d, radius=rad,
                                        level_cap=int(a.get("level_cap", 20))).spectrum()
            h = d / rad
            return Context(case.name, d, spec, g=gval, delta=(0.25 - gval) * h * h,
                           geom=SphereGeometry(d, rad))
        L = float(a.get("L", 1.0))
        if fam == "circle":
            spec = AnalyticSpectrumSpec("circle", length=L, g=gval, level_cap=int(a.get("level_cap", 20))).spectrum()
            k = 2 * math.pi / L
            return Context(case.name, 1, spec, g=gval, delta=(0.25 - gval) * k * k)
        spec = AnalyticSpectrumSpec("interval", length=L, level_cap=int(a.get("level_cap", 20))).spectrum()
        return Context(case.name, 1, spec, g=None, delta=0.0)

    gdoc = _resolve_seeds(case.geometry, seed)
    geom = geometry_from_json(gdoc, n=n)
    if isinstance(geom, SphereGeometry):
        raise InvalidArgument("sphere geometries are analytic; use an 'analytic' case")
    v = V.realize(geom)
    delta = delta_sup(geom.h, v)
    if isinstance(geom, CurveGeometry):
        full = "sum-rules" in case.bounds
        k = None if full else min(int(s.get("k", 64)), geom.n)
        prob = solve_curve(geom, V, k=k, dense_cap=int(s.get("dense_cap", dense_cap)))
        return Context(case.name, 1, prob.spectrum, g=g, delta=delta, geom=geom, H=prob.H, basis=prob.basis)
    prob = solve_revolution(geom, V, k=int(s.get("k", 40)), mode_cap=int(s.get("mode_cap", 8)),
                            dense_cap=int(s.get("dense_cap", dense_cap)))
    return Context(case.name, 2, prob.spectrum, g=g, delta=delta, geom=geom,
                   mode_ops=prob.operators, mode_bases=prob.bases)


def _n_range(ctx, case):
    if case.n_values is not None:
        return [int(n) for n in case.n_values if 1 <= int(n) < len(ctx.spectrum)]
    return list(range(1, min(case.n_max, len(ctx.spectrum) - 1) + 1))


def default_t_grid(spectrum, delta=None, sigma=None, count=80):
    """Geometric t grid where truncation and discretization are both resolved.

    Starts at ``40 / L`` (tail below ``e^{-40}`` relative to the cutoff
    ``L``) and ends where the slowest decay ``lambda_1 + delta`` (or
    ``lambda_1``) has run through thirty e-folds.
    """
    lam = spectrum.values
    top = float(lam[-1])
    rate = float(lam[0]) + (delta or 0.0) if delta is not None else float(lam[0])
    t_lo = 40.0 / top
    t_hi = 30.0 / rate if rate > 0 else 100.0 * t_lo
    t_hi = max(t_hi, 4.0 * t_lo)
    return np.geomspace(t_lo, t_hi, count)


def _partition_spectrum(ctx):
    spec = ctx.spectrum
    if spec.ds is None:
        return spec
    cap = PARTITION_ACCURACY / spec.ds**2
    return spec.truncated(int(np.searchsorted(spec.values, cap, side="right")))


def _phi(L):
    w = 2 * math.pi / L

    def phi(s):
        return 1.0 + 0.3 * np.cos(w * s) + 0.2 * np.sin(3 * w * s)

    def dphi(s):
        return -0.3 * w * np.sin(w * s) + 0.6 * w * np.cos(3 * w * s)

    return phi, dphi


def _evaluate_group(group, ctx: Context, case: Case) -> list[BoundReport]:
    spec, d, g, delta = ctx.spectrum, ctx.d, ctx.g, ctx.delta
    sigma = bounds.sigma_of(g) if g is not None and g > 0 else None
    name = ctx.name
    out = []
    if group == "ratio":
        if g is None:
            return [BoundReport.skipped("ratio", "potential is not of the form g h^2", "not-applicable")]
        out += bounds.ratio_bounds(spec, d, g, case=name)
    elif group == "gap-delta":
        if delta is None:
            return []
        out.append(bounds.gap_delta(spec, d, delta, case=name))
    elif group == "curve-gap":
        if not isinstance(ctx.geom, CurveGeometry):
            return []
        out.append(bounds.gap_bound_curve(ctx.basis.functions[:, 0], ctx.geom, spec, case=name))
    elif group == "hypersurface-gap":
        if isinstance(ctx.geom, SphereGeometry):
            out.append(bounds.gap_bound_hypersurface(None, ctx.geom, spec, d, case=name))
        elif isinstance(ctx.geom, RevolutionGeometry):
            u1 = ctx.mode_bases[0].functions[:, 0]
            out.append(bounds.gap_bound_hypersurface(u1, ctx.geom, spec, d, case=name))
    elif group in ("hile-protter", "yang"):
        fn = bounds.hile_protter_check if group == "hile-protter" else bounds.yang_check
        for n in _n_range(ctx, case):
            if delta is not None:
                out.append(fn(spec, n, d, delta=delta, case=name))
            if sigma is not None and spec.lam(1) > 0:
                out.append(fn(spec, n, d, sigma=sigma, case=name))
    elif group == "gap-interval":
        for n in _n_range(ctx, case):
            out += bounds.gap_interval_checks(spec, n, d, g=g if sigma else None, delta=delta, case=name)
    elif group == "partition":
        pspec = _partition_spectrum(ctx)
        variants = []
        if delta is not None:
            variants.append(("delta", {"delta": delta}))
        if sigma is not None:
            variants.append(("sigma", {"sigma": sigma}))
        for label, kw in variants:
            if case.t_grid:
                tg = np.geomspace(case.t_grid["min"], case.t_grid["max"], int(case.t_grid.get("count", 80))) \
                    if case.t_grid.get("spacing", "linear") == "geometric" else \
                    np.linspace(case.t_grid["min"], case.t_grid["max"], int(case.t_grid.get("count", 80)))
            else:
                tg = default_t_grid(pspec, **kw)
            chk = bounds.partition_monotonicity(pspec, d, tg, **kw)
            out.append(bounds.partition_report(chk, d, label, case=name))
    elif group == "identities":
        out += _identity_reports(ctx)
    elif group == "sum-rules":
        out += _sum_rule_reports(ctx)
    elif group == "frenet-identity":
        if isinstance(ctx.geom, CurveGeometry) and ctx.geom.closed:
            phi, dphi = _phi(ctx.geom.length)
            out.append(bounds.frenet_identity(ctx.geom, ctx.H, phi, dphi, case=name))
    elif group == "canonical-commutation":
        if isinstance(ctx.geom, CurveGeometry) and not ctx.geom.closed:
            X = position_operators(ctx.geom)
            out.append(bounds.canonical_commutation_check(ctx.H, X.components[0], case=name))
    return out


def _identity_reports(ctx):
    """Matrix identities and the abstract gap lemma on every assembled operator."""
    out = []
    if isinstance(ctx.geom, CurveGeometry):
        X = position_operators(ctx.geom)
        ops = [("", ctx.H, ctx.basis, X.components)]
    elif isinstance(ctx.geom, RevolutionGeometry):
        # any diagonal G works for the matrix statements; use the height z
        ops = [(f"-m{m}", H, ctx.mode_bases[m], [np.asarray(ctx.geom.z)]) for m, H in ctx.mode_ops.items()]
    else:
        return out
    for suffix, H, basis, G in ops:
        case = ctx.name + suffix
        out += bounds.commutator_identities(H, G, basis, case=case)
        local = _basis_spectrum(basis)
        out.append(bounds.commutator_gap_bound(H, G, basis.vectors[:, 0], local, case=case))
    return out


def _basis_spectrum(basis):
    from .eigensolve import Spectrum

    return Spectrum.from_values(basis.values, source="numerical")


def _sum_rule_reports(ctx):
    if not isinstance(ctx.geom, CurveGeometry) or ctx.basis is None or not ctx.basis.complete:
        return []
    X = position_operators(ctx.geom)
    P = momentum_operator(ctx.H, X)
    k2 = float(np.max(np.asarray(ctx.geom.kappa) ** 2))
    out = []
    for j in range(1, 4):
        out += bounds.sum_rule_residual(ctx.H, ctx.basis, P, j, 1, X=X if j == 1 else None,
                                        curvature_scale=k2, case=ctx.name)
    out += bounds.trace_sum_rule_check(ctx.basis, P, 1, t=1.0 / max(float(ctx.spectrum.lam(2)), 1.0),
                                       ds=ctx.geom.ds, curvature_scale=k2, case=ctx.name)
    out.append(bounds.momentum_form_check(ctx.geom, P, ctx.basis.functions[:, 0], case=ctx.name))
    return out


def evaluate_case(case: Case, seed: int = 0, dense_cap: int = DENSE_CAP) -> list[BoundReport]:
    if not case.bounds:
        return []
    ctx = build_context(case, seed, dense_cap)
    out = []
    for group in case.bounds:
        out += _evaluate_group(group, ctx, case)
    for r in out:
        if not r.case:
            r.case = case.name
    return out


def run_scenario(sc: Scenario, seed: int = 0, dense_cap: int = DENSE_CAP) -> list[BoundReport]:
    seed = sc.seed if sc.seed is not None else seed
    reports = []
    for case in sc.cases:
        reports += evaluate_case(case, seed, dense_cap)
    return reports


def exit_status(reports) -> int:
    """0 when everything decided holds, 2 on any failure, 3 when only inconclusive remain."""
    statuses = {r.status for r in reports}
    if "fail" in statuses:
        return 2
    if "inconclusive" in statuses:
        return 3
    return 0


# --------------------------------------------------------------------------
# refinement studies


@dataclass
class OrderRow:
    case: str
    quantity: str
    n: list
    ds: list
    values: list
    order: float
    method: str
    note: str = ""


def _reference(case, ctxs):
    """Exact eigenvalues when the case is a circle or a flat interval."""
    geom = ctxs[0].geom
    if not isinstance(geom, CurveGeometry) or np.ptp(geom.kappa) != 0:
        return None
    pot = case.potential
    kind = pot.get("kind", "zero")
    shift = float(pot.get("shift", 0.0)) + (float(pot.get("value", 0.0)) if kind == "constant" else 0.0)
    if kind not in ("zero", "hg", "constant"):
        return None
    if geom.closed:
        g = float(pot.get("g", 0.0)) if kind == "hg" else 0.0
        return AnalyticSpectrumSpec("circle", length=geom.length, g=g, level_cap=8).spectrum().values + shift
    if geom.kappa[0] == 0:
        return AnalyticSpectrumSpec("interval", length=geom.length, level_cap=8).spectrum().values + shift
    return None


def converge_case(case: Case, seed: int = 0, dense_cap: int = DENSE_CAP) -> list[OrderRow]:
    """Orders for eigenvalues, the gap and (when selected) the sum rule and Frenet identity."""
    ns = case.solver.get("N_list")
    if not ns or len(ns) < 3:
        raise ScenarioError("converge needs an N_list with at least three entries", f"{case.name}.solver.N_list")
    ctxs = [build_context(case, seed, dense_cap, n=n) for n in ns]
    hs = [c.geom.ds for c in ctxs]
    rows = []
    ref = _reference(case, ctxs)
    nq = 3
    for i in range(nq):
        vals = [c.spectrum.lam(i + 1) for c in ctxs]
        q = f"lambda_{i + 1}"
        if ref is not None:
            err = [v - ref[i] for v in vals]
            if max(abs(e) for e in err) <= 1e-9 * (1 + abs(ref[i])):
                rows.append(OrderRow(case.name, q, ns, hs, vals, math.nan, "exact",
                                     "discrete value equals the exact one at every N"))
            else:
                rows.append(OrderRow(case.name, q, ns, hs, vals, observed_order(hs, err), "known-limit"))
        elif np.ptp(vals) <= 1e-9 * (1 + abs(vals[-1])):
            rows.append(OrderRow(case.name, q, ns, hs, vals, math.nan, "exact",
                                 "value does not change under refinement"))
        else:
            rows.append(OrderRow(case.name, q, ns, hs, vals, richardson_order(hs[-3:], vals[-3:]), "richardson"))
    gaps = [c.spectrum.lam(2) - c.spectrum.lam(1) for c in ctxs]
    rows.append(OrderRow(case.name, "gap", ns, hs, gaps, richardson_order(hs[-3:], gaps[-3:]), "richardson"))
    if "sum-rules" in case.bounds:
        dev = []
        for c in ctxs:
            X = position_operators(c.geom)
            P = momentum_operator(c.H, X)
            dev.append(bounds.sum_rule_value(c.basis, P, 1, 1) - 1.0)
        rows.append(OrderRow(case.name, "sum-rule-deviation", ns, hs, dev, observed_order(hs, dev), "known-limit"))
    if "frenet-identity" in case.bounds and ctxs[0].geom.closed:
        phi, dphi = _phi(ctxs[0].geom.length)
        res = [bounds.frenet_identity(c.geom, c.H, phi, dphi).params["residual"] for c in ctxs]
        rows.append(OrderRow(case.name, "frenet-identity-residual", ns, hs, res, observed_order(hs, res),
                             "known-limit"))
    return rows


def converge_scenario(sc: Scenario, seed: int = 0, dense_cap: int = DENSE_CAP) -> list[OrderRow]:
    seed = sc.seed if sc.seed is not None else seed
    rows = []
    for case in sc.cases:
        if case.solver.get("N_list"):
            rows += converge_case(case, seed, dense_cap)
    return rows


def orders_to_csv(rows, header: dict | None = None) -> str:
    import csv
    import io

    buf = io.StringIO()
    if header:
        buf.write("# " + " ".join(f"{k}={header[k]}" for k in sorted(header)) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["case", "quantity", "N", "ds", "value", "order", "method", "note"])
    for r in rows:
        for i, (n, h, v) in enumerate(zip(r.n, r.ds, r.values)):
            last = i == len(r.n) - 1
            order = f"{r.order:.12g}" if last and not math.isnan(r.order) else ""
            w.writerow([r.case, r.quantity, n, f"{h:.12g}", f"{v:.12g}", order,
                        r.method if last else "", r.note if last else ""])
    return buf.getvalue()


__all__ = [
    "BOUND_GROUPS", "BUILTINS", "Case", "Scenario", "CurvspecError", "build_context", "converge_case",
    "converge_scenario", "evaluate_case", "exit_status", "list_scenarios", "load_scenario",
    "orders_to_csv", "parse_scenario", "run_scenario", "schema",
]
