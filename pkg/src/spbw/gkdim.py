"""Growth of the extension along its generator frame, and the final verdict
that combines every pipeline check.

The frame spans 1, the coefficient variables and the generators; the
dimension table counts normal monomials of bounded total degree by direct
enumeration so the closed form stays available as an independent oracle in
the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import log

from .coefficients import apply_endo, apply_sder
from .core import Presentation
from .errors import UnsupportedPresentationError

CERTIFIED = "certified-smooth"
NOT_CERTIFIED = "not-certified"
FAILED = "failed"


@dataclass
class FiltrationTable:
    dims: list  # dims[m] = dimension of the span of monomials of degree <= m

    def __post_init__(self):
        if not self.dims or self.dims[0] != 1:
            raise ValueError("a filtration table starts at dimension 1")
        if any(b < a for a, b in zip(self.dims, self.dims[1:])):
            raise ValueError("filtration dimensions must be non-decreasing")


def check_filtration_compatible(P: Presentation):
    """Every relation tail must stay within the degree of its leading word,
    so the frame powers are spanned by low-degree normal monomials."""
    ring = P.ring
    for i in range(P.n):
        for j in range(ring.nvars):
            if apply_endo(P.sigma[i], ring.var(j)).total_degree() > 1:
                raise UnsupportedPresentationError(
                    f"sigma of {P.names[i]} raises the degree of {ring.coeff_vars[j]}"
                )
            if apply_sder(P.delta[i], ring.var(j)).total_degree() > 2:
                raise UnsupportedPresentationError(
                    f"delta of {P.names[i]} overshoots the degree of the pair "
                    f"{P.names[i]}*{ring.coeff_vars[j]}"
                )
    for (i, j), rel in P.relations.items():
        label = f"({P.names[j]},{P.names[i]})"
        if rel.d.total_degree() > 0:
            raise UnsupportedPresentationError(
                f"leading coefficient of relation {label} has positive degree"
            )
        if rel.r0.total_degree() > 2:
            raise UnsupportedPresentationError(f"constant tail of relation {label} too large")
        for k, rk in enumerate(rel.rk):
            if rk.total_degree() > 1:
                raise UnsupportedPresentationError(
                    f"linear tail r{k + 1} of relation {label} too large"
                )


def filtration_dims(P: Presentation, m_max: int) -> FiltrationTable:
    """Count normal monomials of total degree <= m by enumeration."""
    check_filtration_compatible(P)
    nsyms = P.ring.nvars + P.n
    counts = [0] * (m_max + 1)
    for e in _tuples_bounded(nsyms, m_max):
        counts[sum(e)] += 1
    dims = []
    running = 0
    for m in range(m_max + 1):
        running += counts[m]
        dims.append(running)
    return FiltrationTable(dims)


def _tuples_bounded(nvars: int, total: int):
    if nvars == 0:
        yield ()
        return
    def rec(prefix, remaining, slots):
        if slots == 1:
            for v in range(remaining + 1):
                yield prefix + (v,)
            return
        for v in range(remaining + 1):
            yield from rec(prefix + (v,), remaining - v, slots - 1)
    yield from rec((), total, nvars)


@dataclass
class GkDiagnostics:
    difference_degree: int | None
    slope_estimate: int | None
    slope_raw: float
    ambiguous: bool
    note: str = "desk-scale estimate"


def gk_estimate(table: FiltrationTable) -> tuple:
    """Integer growth exponent from the dimension table.

    Two detectors must agree: the order at which finite differences of the
    table stabilize at a nonzero constant, and the rounded log-log slope at
    the tail.  Disagreement is flagged, not resolved.
    """
    dims = table.dims
    if len(dims) - 1 < 8:
        raise ValueError("gk_estimate needs the table up to degree 8 at least")

    diff_degree = None
    seq = list(dims)
    for order in range(len(dims)):
        tail = seq
        if len(tail) < 2:
            break
        if all(v == tail[0] for v in tail):
            if tail[0] != 0:
                diff_degree = order
            break
        seq = [b - a for a, b in zip(seq, seq[1:])]

    m = len(dims) - 1
    if dims[m] == dims[m - 1]:
        slope_raw = 0.0
    else:
        slope_raw = (log(dims[m]) - log(dims[m - 1])) / (log(m) - log(m - 1))
    slope = round(slope_raw)

    ambiguous = diff_degree is None or slope != diff_degree
    estimate = diff_degree if not ambiguous else None
    return estimate, GkDiagnostics(diff_degree, slope, slope_raw, ambiguous)


# -- verdict ----------------------------------------------------------------------


@dataclass
class CheckRecord:
    name: str
    status: str  # pass | fail | skipped | error
    witnesses: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class SmoothnessReport:
    """Structured result of the whole pipeline with the combined verdict."""

    checks: list
    calculus_dimension: int | None
    gk_estimate: int | None
    verdict: str
    failed_check: str | None = None
    failing: list = field(default_factory=list)

    def check(self, name: str) -> CheckRecord | None:
        for rec in self.checks:
            if rec.name == name:
                return rec
        return None


HARD_CHECKS = ("pbw-consistency", "compatibility")


def smoothness_verdict(checks, calculus_dimension, gk) -> SmoothnessReport:
    """Combine the per-stage records: certified only when every check passed
    and the calculus dimension equals the growth estimate."""
    failing = [rec.name for rec in checks if rec.status == "fail" or rec.status == "error"]
    hard = next((name for name in HARD_CHECKS if name in failing), None)
    dimension_match = (
        calculus_dimension is not None and gk is not None and calculus_dimension == gk
    )
    if not dimension_match and "gk-dimension-match" not in failing:
        failing.append("gk-dimension-match")
    if hard is not None:
        verdict = FAILED
    elif not failing and all(rec.status in ("pass", "skipped") for rec in checks):
        verdict = CERTIFIED
    else:
        verdict = NOT_CERTIFIED
    return SmoothnessReport(
        checks=list(checks),
        calculus_dimension=calculus_dimension,
        gk_estimate=gk,
        verdict=verdict,
        failed_check=hard,
        failing=failing,
    )
