import pytest

from spbw.coefficients import (
    CoeffEndo,
    CoeffRing,
    CoeffSigmaDerivation,
    apply_endo,
    apply_sder,
    commutation_audit,
    derivative,
    divmod_univariate,
)


@pytest.fixture
def ring_qt():
    return CoeffRing(params=("q",), coeff_vars=("t",))


def random_coeff(ring, rng, degree=3):
    out = ring.zero()
    for _ in range(rng.randint(1, 3)):
        e = [0] * ring.nvars
        for _ in range(rng.randint(0, degree)):
            if ring.nvars:
                e[rng.randrange(ring.nvars)] += 1
        out = out + ring.monomial(e, rng.choice([-2, -1, 1, 2, 3]))
    return out


def test_ring_arithmetic_basics(ring_qt):
    t = ring_qt.var(0)
    assert t * (t + ring_qt.one()) == t * t + t
    assert (t - t).is_zero()
    five = ring_qt.const(5)
    assert five * ring_qt.one() == five


def test_apply_endo_scaling(ring_qt):
    q = ring_qt.param("q")
    sigma = CoeffEndo((ring_qt.var(0).scale(q),))
    t2 = ring_qt.var(0) * ring_qt.var(0)
    expected = t2.scale(q * q)
    assert apply_endo(sigma, t2) == expected


def test_apply_endo_fixes_scalars(ring_qt):
    sigma = CoeffEndo((ring_qt.var(0).scale(ring_qt.param("q")),))
    assert apply_endo(sigma, ring_qt.const(5)) == ring_qt.const(5)


def test_apply_endo_shift(ring_qt):
    # t -> t + 1 applied to t^2 gives t^2 + 2t + 1
    sigma = CoeffEndo((ring_qt.var(0) + ring_qt.one(),))
    t = ring_qt.var(0)
    assert apply_endo(sigma, t * t) == t * t + t.scale(ring_qt.scalar(2)) + ring_qt.one()


def test_apply_sder_jordan(ring_qt):
    t = ring_qt.var(0)
    sigma = ring_qt.identity_endo()
    delta = CoeffSigmaDerivation((t * t,), sigma)
    assert apply_sder(delta, t * t) == (t * t * t).scale(ring_qt.scalar(2))
    assert apply_sder(delta, ring_qt.const(7)).is_zero()


def test_apply_sder_weyl_powers(ring_qt):
    t = ring_qt.var(0)
    delta = CoeffSigmaDerivation((ring_qt.one(),), ring_qt.identity_endo())
    assert apply_sder(delta, t * t * t) == (t * t).scale(ring_qt.scalar(3))


def test_endo_multiplicative_on_random_pairs(ring_qt, rng):
    q = ring_qt.param("q")
    sigma = CoeffEndo((ring_qt.var(0).scale(q) + ring_qt.one(),))
    for _ in range(100):
        p, g = random_coeff(ring_qt, rng), random_coeff(ring_qt, rng)
        assert apply_endo(sigma, p * g) == apply_endo(sigma, p) * apply_endo(sigma, g)


def test_sder_twisted_leibniz_on_random_pairs(ring_qt, rng):
    q = ring_qt.param("q")
    sigma = CoeffEndo((ring_qt.var(0).scale(q),))
    delta = CoeffSigmaDerivation((ring_qt.one(),), sigma)
    for _ in range(100):
        p, g = random_coeff(ring_qt, rng), random_coeff(ring_qt, rng)
        lhs = apply_sder(delta, p * g)
        rhs = apply_endo(sigma, p) * apply_sder(delta, g) + apply_sder(delta, p) * g
        assert lhs == rhs


def test_inverse_round_trip(ring_qt, rng):
    q = ring_qt.param("q")
    sigma = CoeffEndo((ring_qt.var(0).scale(q),), (ring_qt.var(0).scale(q.inverse()),))
    inv = sigma.inverse()
    for _ in range(50):
        p = random_coeff(ring_qt, rng)
        assert apply_endo(inv, apply_endo(sigma, p)) == p


def test_bad_inverse_rejected(ring_qt):
    q = ring_qt.param("q")
    with pytest.raises(ValueError):
        CoeffEndo((ring_qt.var(0).scale(q),), (ring_qt.var(0),))


def test_commutation_audit_scaling_vs_scaled_delta(ring_qt):
    # sigma(t) = q t with delta(t) = t commutes; with delta(t) = 1 it does not
    q = ring_qt.param("q")
    sigma = CoeffEndo((ring_qt.var(0).scale(q),))
    good = CoeffSigmaDerivation((ring_qt.var(0),), sigma)
    bad = CoeffSigmaDerivation((ring_qt.one(),), sigma)
    assert commutation_audit([sigma], [good]).ok
    audit = commutation_audit([sigma], [bad])
    assert not audit.ok
    assert ("sigma-delta", 0) in audit.failures()


def test_commutation_audit_identity_always_commutes(ring_qt):
    sigma = ring_qt.identity_endo()
    delta = CoeffSigmaDerivation((ring_qt.var(0) * ring_qt.var(0),), sigma)
    audit = commutation_audit([sigma, sigma], [delta, delta])
    assert all(audit.sigma_sigma.values()) and all(audit.delta_sigma.values())


def test_derivative_and_divmod(ring_qt):
    t = ring_qt.var(0)
    p = t * t * t + t.scale(ring_qt.scalar(2))
    assert derivative(p) == (t * t).scale(ring_qt.scalar(3)) + ring_qt.const(2)
    q, r = divmod_univariate(t * t - ring_qt.one(), t - ring_qt.one())
    assert r.is_zero()
    assert q == t + ring_qt.one()
