"""Stage orchestration: from a parsed document to a full report.

The smoothness pipeline runs the checks in dependency order and
short-circuits on the two hard failures (an inconsistent presentation, an
incompatible differential); everything downstream is then reported as
skipped.  All sampling is seeded from the document options so runs are
reproducible.
"""

from __future__ import annotations

import random
import time

from .calculus import CalculusSpec, DGen, build_calculus, theorem_spec
from .dsl import PresentationDoc, build_presentation
from .errors import CompatibilityError, ConfigError, NotAVolumeFormError, SpbwError, UnsupportedPresentationError
from .extended import AlgebraEndo, auto_inverse, hypothesis_check
from .gkdim import CheckRecord, filtration_dims, gk_estimate, smoothness_verdict
from .report import Report

STAGES = (
    "pbw-consistency",
    "hypotheses",
    "compatibility",
    "d-squared",
    "connectedness",
    "volume",
    "integrability",
    "divergence-leibniz",
    "flatness",
    "gk-estimate",
)


def calculus_spec_from_doc(doc: PresentationDoc, P) -> CalculusSpec:
    """Materialize the calculus block: construct every twist (verifying it
    respects the relations), fill missing inverses mechanically."""
    cal = doc.calculus
    if cal is None:
        raise ConfigError("document has no calculus block")
    if cal.mode == "theorem":
        return theorem_spec(P)
    dgens = []
    for name in cal.dgen_names:
        cimgs = cal.twist_coeff[name]
        gimgs = cal.twist_gen[name]
        if name in cal.itwist_coeff:
            inv_images = (cal.itwist_coeff[name], cal.itwist_gen[name])
        else:
            inv_images = auto_inverse(P, cimgs, gimgs)
            if inv_images is None:
                raise ConfigError(
                    f"twist for d({name}) is not mechanically invertible; add an itwist line"
                )
        inverse = AlgebraEndo(P, inv_images[0], inv_images[1], check=False)
        twist = AlgebraEndo(P, cimgs, gimgs, inverse=inverse)
        dgens.append(DGen(name, cal.potentials[name], twist))
    return CalculusSpec(dgens=dgens, wedge_signs=dict(cal.wedge), mode="flat")


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def run_smooth(doc: PresentationDoc) -> Report:
    """The full pipeline over one document."""
    opts = doc.options
    rng = random.Random(opts["seed"])
    P = build_presentation(doc)
    checks = []
    skipped_from = None
    calculus = None
    N = None
    gk = None

    def record(name, fn):
        nonlocal skipped_from
        if skipped_from is not None:
            checks.append(CheckRecord(name=name, status="skipped"))
            return None
        with _Timer() as t:
            try:
                rec = fn()
            except (CompatibilityError, NotAVolumeFormError, ConfigError,
                    UnsupportedPresentationError) as exc:
                rec = CheckRecord(name=name, status="error", witnesses=[str(exc)])
        rec.name = name
        rec.seconds = t.seconds
        checks.append(rec)
        return rec

    # 1: the presentation itself
    def stage_pbw():
        audit = P.pbw_consistency_check(opts["pbw_degree"])
        if audit.ok:
            return CheckRecord("", "pass")
        return CheckRecord("", "fail",
                           witnesses=[f"word {audit.rendered} reduces two ways",
                                      f"leftmost: {P.render(audit.left)}",
                                      f"rightmost: {P.render(audit.right)}"])
    rec = record("pbw-consistency", stage_pbw)
    if rec is not None and not rec.passed:
        skipped_from = "pbw-consistency"

    # 2: hypothesis blocks (informational unless the mode requires them)
    def stage_hypotheses():
        rep = hypothesis_check(P)
        mode = doc.calculus.mode if doc.calculus else None
        needed_ok = rep.theorem_ok if mode == "theorem" else True
        data = {
            "lift_block": rep.proposition_ok,
            "plain_twist_block": rep.theorem_ok,
        }
        return CheckRecord("", "pass" if needed_ok else "fail",
                           witnesses=[] if needed_ok else rep.failures[:4], data=data)
    record("hypotheses", stage_hypotheses)

    # 3: calculus construction (compatibility residuals)
    def stage_compat():
        nonlocal calculus, N
        if doc.calculus is None:
            raise ConfigError("document has no calculus block")
        spec = calculus_spec_from_doc(doc, P)
        calculus = build_calculus(P, spec)
        N = calculus.N
        return CheckRecord("", "pass", data={"dimension": calculus.N})
    rec = record("compatibility", stage_compat)
    if rec is not None and rec.status != "pass" and skipped_from is None:
        skipped_from = "compatibility"

    # 4..9: calculus checks
    def stage_dsq():
        out = calculus.d_squared_check(opts["dsq_degree"])
        return CheckRecord("", "pass" if out.ok else "fail", witnesses=out.witnesses,
                           data={"bound": opts["dsq_degree"]})
    record("d-squared", stage_dsq)

    def stage_conn():
        out = calculus.connectedness_check(opts["conn_degree"])
        return CheckRecord("", "pass" if out.ok else "fail", witnesses=out.witnesses, data=out.data)
    record("connectedness", stage_conn)

    def stage_volume():
        vol = calculus.volume()
        data = {}
        status = "pass"
        if vol.matches_sigma_composition is not None:
            data["matches_sigma_composition"] = vol.matches_sigma_composition
            if not vol.matches_sigma_composition:
                status = "fail"
        return CheckRecord("", status, data=data)
    record("volume", stage_volume)

    def stage_integrability():
        out = calculus.integrability_check(opts["samples"], opts["sample_degree"], rng)
        return CheckRecord("", "pass" if out.ok else "fail", witnesses=out.witnesses,
                           data={"samples": opts["samples"], "degree": opts["sample_degree"]})
    record("integrability", stage_integrability)

    def stage_divergence():
        out = calculus.divergence_leibniz_check(opts["samples"], opts["sample_degree"], rng)
        return CheckRecord("", "pass" if out.ok else "fail", witnesses=out.witnesses,
                           data={"samples": opts["samples"]})
    record("divergence-leibniz", stage_divergence)

    def stage_flatness():
        out = calculus.flatness_check()
        return CheckRecord("", "pass" if out.ok else "fail", witnesses=out.witnesses, data=out.data)
    record("flatness", stage_flatness)

    # 10: growth
    def stage_gk():
        nonlocal gk
        table = filtration_dims(P, opts["gk_degree"])
        est, diag = gk_estimate(table)
        gk = est
        data = {
            "difference_degree": diag.difference_degree,
            "slope_estimate": diag.slope_estimate,
            "ambiguous": diag.ambiguous,
            "note": diag.note,
        }
        status = "pass" if est is not None else "fail"
        return CheckRecord("", status, data=data,
                           witnesses=[] if est is not None else ["growth detectors disagree"])
    record("gk-estimate", stage_gk)

    rep = smoothness_verdict(checks, N, gk)
    mode = doc.calculus.mode if doc.calculus else None
    return Report.from_smoothness(doc.name, mode, opts, rep)


# -- single commands --------------------------------------------------------------


def run_check_pbw(doc: PresentationDoc):
    P = build_presentation(doc)
    return P, P.pbw_consistency_check(doc.options["pbw_degree"])


def run_check_hypotheses(doc: PresentationDoc):
    P = build_presentation(doc)
    return P, hypothesis_check(P)


def run_calculus_check(doc: PresentationDoc):
    if doc.calculus is None:
        raise ConfigError("document has no calculus block")
    P = build_presentation(doc)
    spec = calculus_spec_from_doc(doc, P)
    return build_calculus(P, spec)


def run_gkdim(doc: PresentationDoc, m_max: int | None = None):
    P = build_presentation(doc)
    table = filtration_dims(P, m_max if m_max is not None else doc.options["gk_degree"])
    return table, gk_estimate(table)
