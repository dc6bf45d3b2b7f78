"""Report records and their JSON / CSV serialization."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

SCHEMA_VERSION = "1"
CSV_COLUMNS = ["bound_id", "n", "lhs", "rhs", "slack", "holds", "status", "case"]

# status values
PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"
INCONCLUSIVE = "inconclusive"
NOT_APPLICABLE = "not-applicable"
INFORMATIONAL = "informational"


@dataclass
class BoundReport:
    """Outcome of one inequality (``relation="<="``) or identity (``"=="``).

    ``slack = rhs - lhs``.  An inequality holds when ``slack >= -tolerance``,
    an identity when ``|slack| <= tolerance``.  Reports whose ``tol_class``
    is ``"informational"`` never count as failures.
    """

    bound: str
    lhs: float
    rhs: float
    relation: str = "<="
    tolerance: float = 0.0
    tol_class: str = "exact"
    params: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    case: str = ""
    status: str = ""

    def __post_init__(self):
        if not self.status:
            self.status = self._judge()

    def _judge(self) -> str:
        if not (math.isfinite(self.lhs) and math.isfinite(self.rhs)):
            return FAIL
        ok = self.holds
        if self.tol_class == INFORMATIONAL:
            return INFORMATIONAL
        return PASS if ok else FAIL

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def holds(self) -> bool | None:
        if self.status in (SKIPPED, NOT_APPLICABLE, INCONCLUSIVE):
            return None
        s = self.slack
        if not math.isfinite(s):
            return False
        if self.relation == "==":
            return bool(abs(s) <= self.tolerance)
        return bool(s >= -self.tolerance)

    @property
    def n(self):
        return self.params.get("n")

    @classmethod
    def skipped(cls, bound, reason, status=SKIPPED, **params):
        return cls(bound, math.nan, math.nan, status=status, params=params, notes=[reason])

    def to_dict(self) -> dict:
        d = asdict(self)
        d["slack"] = self.slack
        d["holds"] = self.holds
        return _clean(d)


@dataclass
class GapInterval:
    """Interval ``[center - half_width, center + half_width]`` bracketing a gap."""

    n: int
    center: float
    half_width: float
    lambda_bar: float
    lambda_sq_bar: float
    variant: str
    discriminant: float = math.nan
    coefficients: tuple | None = None
    notes: list = field(default_factory=list)

    @property
    def vacuous(self) -> bool:
        return not self.half_width >= 0

    @property
    def lower(self) -> float:
        return self.center - self.half_width

    @property
    def upper(self) -> float:
        return self.center + self.half_width

    def contains(self, a: float, b: float, tol: float = 0.0) -> bool:
        return (not self.vacuous) and self.lower <= a + tol and b <= self.upper + tol

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(lower=self.lower, upper=self.upper, vacuous=self.vacuous)
        return _clean(d)


@dataclass
class PartitionCheck:
    t: np.ndarray
    values: np.ndarray
    exponent: float
    delta: float
    tail: np.ndarray
    monotone: bool
    status: str
    conclusive: int
    worst_excess: float
    cutoff: float
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return _clean(asdict(self))


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def _ordered(reports):
    return sorted(
        reports,
        key=lambda r: (r.case, r.bound, -1 if r.n is None else int(r.n)),
    )


def reports_to_json(reports, header: dict | None = None) -> str:
    """Canonically ordered JSON document (floats round-trip exactly)."""
    doc = {"schema": SCHEMA_VERSION}
    doc.update(_clean(header or {}))
    doc["reports"] = [r.to_dict() for r in _ordered(reports)]
    return json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n"


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    return "" if math.isnan(x) else f"{x:.12g}"


def reports_to_csv(reports, header: dict | None = None) -> str:
    """Flat CSV with a ``#``-prefixed header line recording run metadata."""
    buf = io.StringIO()
    if header:
        meta = " ".join(f"{k}={header[k]}" for k in sorted(header))
        buf.write(f"# {meta}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in _ordered(reports):
        w.writerow([
            r.bound, _fmt(r.n), _fmt(r.lhs), _fmt(r.rhs), _fmt(r.slack),
            _fmt(r.holds), r.status, r.case,
        ])
    return buf.getvalue()


def summarize(reports) -> dict:
    counts = {}
    for r in reports:
        counts[r.status] = counts.get(r.status, 0) + 1
    return counts
