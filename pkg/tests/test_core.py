import pytest

from spbw.coefficients import CoeffRing
from spbw.core import Presentation, Relation
from spbw.errors import HypothesisError

from conftest import commuting_relation, random_skew, trivial_maps


@pytest.fixture
def qaffine3():
    ring = CoeffRing(params=("q12", "q13", "q23"))
    sigma, delta = trivial_maps(ring, 3)
    zero3 = tuple(ring.zero() for _ in range(3))
    rels = {
        (i, j): Relation(ring.const(ring.param(f"q{i + 1}{j + 1}")), ring.zero(), zero3)
        for i in range(3)
        for j in range(i + 1, 3)
    }
    return Presentation(ring, ("x1", "x2", "x3"), sigma, delta, rels)


@pytest.fixture
def weyl_poly3():
    """Weyl pair plus a third generator commuting with everything."""
    ring = CoeffRing()
    sigma, delta = trivial_maps(ring, 3)
    zero3 = tuple(ring.zero() for _ in range(3))
    rels = {
        (0, 1): Relation(ring.one(), ring.const(-1), zero3),
        (0, 2): commuting_relation(ring, 3, 0, 2),
        (1, 2): commuting_relation(ring, 3, 1, 2),
    }
    return Presentation(ring, ("x1", "x2", "x3"), sigma, delta, rels)


@pytest.fixture
def broken3():
    """Genuinely non-confluent triple: the two reduction orders of x3 x2 x1
    differ by x3."""
    ring = CoeffRing()
    sigma, delta = trivial_maps(ring, 3)
    z = ring.zero()
    rels = {
        (0, 1): Relation(ring.one(), z, (z, z, ring.one())),   # x2 x1 = x1 x2 + x3
        (0, 2): Relation(ring.one(), z, (ring.one(), z, z)),   # x3 x1 = x1 x3 + x1
        (1, 2): commuting_relation(ring, 3, 1, 2),             # x3 x2 = x2 x3
    }
    return Presentation(ring, ("x1", "x2", "x3"), sigma, delta, rels)


# -- normalize ---------------------------------------------------------------


def test_normalize_weyl_swap(weyl):
    got = weyl.normalize([(1, [1, 0])])
    expected = weyl.monomial((1, 1)) + weyl.const(-1)
    assert got == expected


def test_normalize_ordered_word_is_identity(weyl):
    assert weyl.normalize([(1, [0, 1])]) == weyl.monomial((1, 1))


def test_normalize_jordan_coefficient_push(jordan):
    t = jordan.ring.var(0)
    got = jordan.normalize([(1, [0, t * t])])
    expected = jordan.monomial((1,), t * t) + jordan.from_coeff((t * t * t).scale(jordan.ring.scalar(2)))
    assert got == expected


def test_normalize_matches_small_step_oracle(weyl, jordan, qplane):
    t = jordan.ring.var(0)
    cases = [
        (weyl, [1, 0, 0]),
        (weyl, [1, 1, 0]),
        (jordan, [0, t, 0, t]),
        (qplane, [1, 1, 0]),
    ]
    for P, word in cases:
        assert P.normalize([(1, word)]) == P.normalize_atoms(word)


# -- multiply -----------------------------------------------------------------


def test_multiply_unital(weyl, rng):
    f = random_skew(weyl, rng)
    assert weyl.multiply(f, weyl.one()) == f
    assert weyl.multiply(weyl.one(), f) == f


def test_multiply_weyl_example(weyl):
    x1, x2 = weyl.gen(0), weyl.gen(1)
    got = weyl.multiply(x2, weyl.multiply(x1, x1))
    expected = weyl.monomial((2, 1)) + weyl.monomial((1, 0), weyl.ring.const(-2))
    assert got == expected


def test_multiply_qplane_example(qplane):
    q = qplane.ring.param("q")
    got = qplane.multiply(qplane.monomial((0, 2)), qplane.gen(0))
    assert got == qplane.monomial((1, 2), qplane.ring.const(q * q))


def test_multiply_matches_oracle_on_random_words(weyl, qplane, jordan, rng):
    for P in (weyl, qplane, jordan):
        for _ in range(40):
            length = rng.randint(1, 5)
            word = []
            for _ in range(length):
                if P.ring.nvars and rng.random() < 0.3:
                    word.append(P.ring.var(rng.randrange(P.ring.nvars)))
                else:
                    word.append(rng.randrange(P.n))
            assert P.normalize([(1, word)]) == P.normalize_atoms(word)


def test_multiply_associative(weyl, qplane, jordan, rng):
    for P in (weyl, qplane, jordan):
        for _ in range(30):
            f, g, h = (random_skew(P, rng, degree=3, max_terms=2) for _ in range(3))
            assert P.multiply(P.multiply(f, g), h) == P.multiply(f, P.multiply(g, h))


def test_normalize_idempotent(weyl, jordan, rng):
    for P in (weyl, jordan):
        f = random_skew(P, rng)
        terms = [(c, list(_expand_expo(e))) for e, c in f.terms.items()]
        assert P.normalize(terms) == f


def _expand_expo(e):
    out = []
    for i, k in enumerate(e):
        out.extend([i] * k)
    return out


# -- power commutation ---------------------------------------------------------


def test_power_commute_m0_identity(jordan):
    t = jordan.ring.var(0)
    assert jordan.power_commute_closed(0, 0, t) == jordan.from_coeff(t)


def test_power_commute_weyl_ore(weyl_ore):
    t = weyl_ore.ring.var(0)
    got = weyl_ore.power_commute_closed(0, 2, t)
    expected = weyl_ore.monomial((2,), t) + weyl_ore.monomial((1,), weyl_ore.ring.const(2))
    assert got == expected


def test_power_commute_jordan(jordan):
    t = jordan.ring.var(0)
    two = jordan.ring.scalar(2)
    got = jordan.power_commute_closed(0, 2, t)
    expected = (
        jordan.monomial((2,), t)
        + jordan.monomial((1,), (t * t).scale(two))
        + jordan.from_coeff((t * t * t).scale(two))
    )
    assert got == expected


def test_power_commute_closed_matches_normalize(jordan, weyl_ore, qplane_ore):
    for P in (jordan, weyl_ore, qplane_ore):
        t = P.ring.var(0)
        for m in range(9):
            for d in range(4):
                r = t ** d
                assert P.power_commute_closed(0, m, r) == P.normalize([(1, [0] * m + [r])])


def test_power_commute_closed_hypothesis_error():
    from spbw.coefficients import CoeffEndo, CoeffSigmaDerivation

    ring = CoeffRing(params=("q",), coeff_vars=("t",))
    sigma = CoeffEndo((ring.var(0).scale(ring.param("q")),))
    delta = CoeffSigmaDerivation((ring.one(),), sigma)  # does not commute with sigma
    P = Presentation(ring, ("x",), (sigma,), (delta,), {})
    with pytest.raises(HypothesisError):
        P.power_commute_closed(0, 2, ring.var(0))


def test_power_commute_generic_m1(qplane_ore):
    t = qplane_ore.ring.var(0)
    q = qplane_ore.ring.param("q")
    got = qplane_ore.power_commute_generic(0, 1, t)
    assert got == qplane_ore.monomial((1,), t.scale(q))


def test_power_commute_generic_delta_zero(qplane_ore):
    t = qplane_ore.ring.var(0)
    q = qplane_ore.ring.param("q")
    got = qplane_ore.power_commute_generic(0, 3, t)
    assert got == qplane_ore.monomial((3,), t.scale(q * q * q))


def test_power_commute_generic_shift_case():
    # sigma(t) = q t, delta(t) = 1: the four length-2 compositions
    from spbw.coefficients import CoeffEndo, CoeffSigmaDerivation

    ring = CoeffRing(params=("q",), coeff_vars=("t",))
    q = ring.param("q")
    sigma = CoeffEndo((ring.var(0).scale(q),))
    delta = CoeffSigmaDerivation((ring.one(),), sigma)
    P = Presentation(ring, ("x",), (sigma,), (delta,), {})
    t = ring.var(0)
    got = P.power_commute_generic(0, 2, t)
    expected = P.monomial((2,), t.scale(q * q)) + P.monomial((1,), ring.const(q + ring.sone()))
    assert got == expected
    assert got == P.normalize([(1, [0, 0, t])])


def test_power_commute_generic_matches_normalize(jordan, weyl_ore, qplane_ore):
    for P in (jordan, weyl_ore, qplane_ore):
        t = P.ring.var(0)
        for m in range(7):
            assert P.power_commute_generic(0, m, t * t) == P.normalize([(1, [0] * m + [t * t])])


# -- consistency check -----------------------------------------------------------


def test_pbw_check_passes_qaffine3(qaffine3):
    assert qaffine3.pbw_consistency_check().ok


def test_pbw_check_passes_weyl_poly3(weyl_poly3):
    assert weyl_poly3.pbw_consistency_check().ok


def test_pbw_check_fails_broken(broken3):
    audit = broken3.pbw_consistency_check()
    assert not audit.ok
    assert audit.witness_word == (2, 1, 0)
    diff = audit.left - audit.right
    assert diff == broken3.gen(2) or diff == -broken3.gen(2)


def test_pbw_check_pair_coefficient_words(jordan, qplane_ore):
    assert jordan.pbw_consistency_check().ok
    assert qplane_ore.pbw_consistency_check().ok


def test_strategy_independence_on_random_words(weyl, qplane, rng):
    for P in (weyl, qplane):
        for _ in range(60):
            word = [rng.randrange(P.n) for _ in range(rng.randint(1, 5))]
            left = P.normalize_atoms(word, "leftmost")
            right = P.normalize_atoms(word, "rightmost")
            assert left == right


# -- degree ----------------------------------------------------------------------


def test_degree_exp(weyl):
    f = weyl.monomial((2, 1))
    deg = weyl.degree_exp(f)
    assert deg.degree == 3 and deg.exponents == frozenset({(2, 1)})
    assert weyl.degree_exp(weyl.const(5)).degree == 0
    assert weyl.degree_exp(weyl.zero()).degree is None
    swapped = weyl.normalize([(1, [1, 0])])
    assert weyl.degree_exp(swapped).degree == 2


def test_render(weyl, jordan):
    f = weyl.monomial((1, 1)) + weyl.const(-1)
    assert weyl.render(f) == "x1*x2 - 1"
    t = jordan.ring.var(0)
    g = jordan.monomial((1,), t * t) + jordan.from_coeff(t)
    assert jordan.render(g) == "t^2*x + t"
