"""Shared fixtures: hand-built presentations used across the test suite."""

from __future__ import annotations

import random

import pytest

from spbw.coefficients import CoeffEndo, CoeffRing, CoeffSigmaDerivation
from spbw.core import Presentation, Relation


def commuting_relation(ring, n, i, j):
    return Relation(ring.one(), ring.zero(), tuple(ring.zero() for _ in range(n)))


def trivial_maps(ring, n):
    sig = ring.identity_endo()
    return tuple(sig for _ in range(n)), tuple(ring.zero_derivation(sig) for _ in range(n))


@pytest.fixture
def weyl():
    """Two generators over the rationals with x2 x1 = x1 x2 - 1."""
    ring = CoeffRing()
    sigma, delta = trivial_maps(ring, 2)
    rel = Relation(ring.one(), ring.const(-1), (ring.zero(), ring.zero()))
    return Presentation(ring, ("x1", "x2"), sigma, delta, {(0, 1): rel})


@pytest.fixture
def poly2():
    ring = CoeffRing()
    sigma, delta = trivial_maps(ring, 2)
    return Presentation(ring, ("x1", "x2"), sigma, delta, {(0, 1): commuting_relation(ring, 2, 0, 1)})


@pytest.fixture
def qplane():
    """Quantum plane: x2 x1 = q x1 x2 over the field extended by q."""
    ring = CoeffRing(params=("q",))
    sigma, delta = trivial_maps(ring, 2)
    rel = Relation(ring.const(ring.param("q")), ring.zero(), (ring.zero(), ring.zero()))
    return Presentation(ring, ("x1", "x2"), sigma, delta, {(0, 1): rel})


@pytest.fixture
def jordan():
    """Jordan plane as a one-generator extension of F[t]: x t = t x + t^2."""
    ring = CoeffRing(coeff_vars=("t",))
    sigma = ring.identity_endo()
    delta = CoeffSigmaDerivation((ring.var(0) * ring.var(0),), sigma)
    return Presentation(ring, ("x",), (sigma,), (delta,), {})


@pytest.fixture
def weyl_ore():
    """Weyl algebra as a one-generator extension of F[t]: x t = t x + 1."""
    ring = CoeffRing(coeff_vars=("t",))
    sigma = ring.identity_endo()
    delta = CoeffSigmaDerivation((ring.one(),), sigma)
    return Presentation(ring, ("x",), (sigma,), (delta,), {})


@pytest.fixture
def qplane_ore():
    """Quantum plane as a one-generator extension of F[t]: x t = q t x."""
    ring = CoeffRing(params=("q",), coeff_vars=("t",))
    q = ring.param("q")
    sigma = CoeffEndo((ring.var(0).scale(q),), (ring.var(0).scale(q.inverse()),))
    delta = CoeffSigmaDerivation((ring.zero(),), sigma)
    return Presentation(ring, ("x",), (sigma,), (delta,), {})


@pytest.fixture
def rng():
    return random.Random(1729)


from spbw.sampling import random_skew  # noqa: E402  (re-exported for tests)
