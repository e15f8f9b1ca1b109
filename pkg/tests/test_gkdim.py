from math import comb

import pytest

from spbw.coefficients import CoeffRing, CoeffSigmaDerivation
from spbw.core import Presentation
from spbw.errors import UnsupportedPresentationError
from spbw.gkdim import (
    CERTIFIED,
    FAILED,
    NOT_CERTIFIED,
    CheckRecord,
    FiltrationTable,
    filtration_dims,
    gk_estimate,
    smoothness_verdict,
)


def test_filtration_dims_weyl(weyl):
    table = filtration_dims(weyl, 8)
    assert table.dims[:4] == [1, 3, 6, 10]


def test_filtration_dims_match_closed_form(weyl, jordan, qplane):
    for P in (weyl, jordan, qplane):
        M = P.ring.nvars + P.n
        table = filtration_dims(P, 10)
        assert table.dims == [comb(m + M, M) for m in range(11)]


def test_filtration_dims_scalars_only():
    ring = CoeffRing()
    P = Presentation(ring, (), (), (), {})
    table = filtration_dims(P, 9)
    assert table.dims == [1] * 10


def test_filtration_jordan_v3(jordan):
    assert filtration_dims(jordan, 8).dims[3] == 10


def test_filtration_incompatible_rejected():
    # delta(t) = t^3 overshoots the degree of x*t
    ring = CoeffRing(coeff_vars=("t",))
    t = ring.var(0)
    sigma = ring.identity_endo()
    delta = CoeffSigmaDerivation((t * t * t,), sigma)
    P = Presentation(ring, ("x",), (sigma,), (delta,), {})
    with pytest.raises(UnsupportedPresentationError):
        filtration_dims(P, 8)


def test_gk_estimate_weyl(weyl):
    est, diag = gk_estimate(filtration_dims(weyl, 12))
    assert est == 2 and not diag.ambiguous


def test_gk_estimate_three_symbols():
    table = FiltrationTable([comb(m + 3, 3) for m in range(13)])
    est, diag = gk_estimate(table)
    assert est == 3
    assert diag.difference_degree == 3 and diag.slope_estimate == 3


def test_gk_estimate_constant_table():
    est, diag = gk_estimate(FiltrationTable([1] * 12))
    assert est == 0 and not diag.ambiguous


def test_gk_estimate_needs_depth(weyl):
    with pytest.raises(ValueError):
        gk_estimate(FiltrationTable([1, 3, 6, 10]))


def _records(**statuses):
    return [CheckRecord(name=k, status=v) for k, v in statuses.items()]


def test_verdict_certified():
    checks = _records(**{"pbw-consistency": "pass", "compatibility": "pass", "connectedness": "pass"})
    rep = smoothness_verdict(checks, 2, 2)
    assert rep.verdict == CERTIFIED and not rep.failing


def test_verdict_dimension_mismatch():
    checks = _records(**{"pbw-consistency": "pass", "compatibility": "pass", "connectedness": "fail"})
    rep = smoothness_verdict(checks, 1, 2)
    assert rep.verdict == NOT_CERTIFIED
    assert "gk-dimension-match" in rep.failing and "connectedness" in rep.failing


def test_verdict_hard_failure():
    checks = _records(**{"pbw-consistency": "fail", "compatibility": "skipped"})
    rep = smoothness_verdict(checks, None, None)
    assert rep.verdict == FAILED and rep.failed_check == "pbw-consistency"


def test_verdict_monotone():
    base = {"pbw-consistency": "pass", "compatibility": "pass", "d-squared": "pass",
            "connectedness": "pass", "integrability": "pass"}
    assert smoothness_verdict(_records(**base), 2, 2).verdict == CERTIFIED
    for name in base:
        flipped = dict(base)
        flipped[name] = "fail"
        rep = smoothness_verdict(_records(**flipped), 2, 2)
        assert rep.verdict != CERTIFIED
