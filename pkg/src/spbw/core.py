"""PBW normal-form arithmetic for the skew extension itself.

Elements are stored as maps from ordered generator monomials (exponent
tuples) to left coefficients in the coefficient ring.  Two reduction engines
live here:

* a structured path (:meth:`Presentation.multiply`), which keeps every term
  as ``coefficient * ordered word`` and migrates coefficients left eagerly
  while resolving out-of-order generator pairs from a worklist; and
* a small-step oracle (:meth:`Presentation.normalize_atoms`) that rewrites a
  raw word of generator/coefficient atoms one redex at a time under a
  selectable strategy.  The diamond check compares the two maximal
  strategies of the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import NamedTuple

from .coefficients import (
    CoeffEndo,
    CoeffPoly,
    CoeffRing,
    CoeffSigmaDerivation,
    apply_endo,
    apply_sder,
    commutation_audit,
    render_coeff,
)
from .errors import HypothesisError
from .scalars import Scalar


class SkewPoly:
    """Element in PBW normal form: finite sum of left coefficients times
    ordered generator monomials.  No stored coefficient is zero."""

    __slots__ = ("terms", "ngens")

    def __init__(self, terms: dict, ngens: int):
        self.terms = terms
        self.ngens = ngens

    def _make(self, terms: dict) -> "SkewPoly":
        return SkewPoly(terms, self.ngens)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "SkewPoly") -> "SkewPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = out[e] + c
                if s.is_zero():
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return self._make(out)

    def __neg__(self) -> "SkewPoly":
        return self._make({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "SkewPoly") -> "SkewPoly":
        return self + (-other)

    def scale_left(self, c: CoeffPoly) -> "SkewPoly":
        """Left multiplication by a coefficient (coefficients commute in R)."""
        if c.is_zero():
            return self._make({})
        out = {}
        for e, r in self.terms.items():
            p = c * r
            if not p.is_zero():
                out[e] = p
        return self._make(out)

    def scale(self, s: Scalar) -> "SkewPoly":
        if s.is_zero():
            return self._make({})
        return self._make({e: c.scale(s) for e, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, SkewPoly):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    __hash__ = None

    def __repr__(self):
        gens = tuple(f"x{i + 1}" for i in range(self.ngens))
        body = ", ".join(
            f"{e}: ..." for e in sorted(self.terms)
        )
        return f"SkewPoly({{{body}}})"


class DegreeInfo(NamedTuple):
    degree: object  # int, or None for the zero element (plays minus infinity)
    exponents: frozenset


@dataclass
class Relation:
    """Stored shape of a generator pair relation, for j > i:
    ``x_j x_i = d * x_i x_j + r0 + sum_k rk[k] * x_k``."""

    d: CoeffPoly
    r0: CoeffPoly
    rk: tuple  # one CoeffPoly per generator


@dataclass
class PbwAudit:
    ok: bool
    witness_word: tuple | None = None
    left: "SkewPoly | None" = None
    right: "SkewPoly | None" = None
    rendered: str = ""


class Presentation:
    """Full data of a skew PBW extension: coefficient ring, one
    (endomorphism, twisted derivation) pair per generator, and the pair
    relations.  Immutable after construction; all operations are pure."""

    def __init__(self, ring: CoeffRing, names, sigma, delta, relations):
        self.ring = ring
        self.names = tuple(names)
        self.n = len(self.names)
        self.sigma = tuple(sigma)
        self.delta = tuple(delta)
        self.relations = dict(relations)
        for (i, j), rel in self.relations.items():
            if not (0 <= i < j < self.n):
                raise ValueError(f"relation indices out of order: {(i, j)}")
            if rel.d.is_zero():
                raise ValueError(f"relation ({self.names[j]}, {self.names[i]}) has zero leading coefficient")
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if (i, j) not in self.relations:
                    raise ValueError(f"missing relation for pair ({self.names[j]}, {self.names[i]})")
        self._mono_cache: dict = {}

    # -- embeddings -------------------------------------------------------

    def zero(self) -> SkewPoly:
        return SkewPoly({}, self.n)

    def one(self) -> SkewPoly:
        return self.from_coeff(self.ring.one())

    def from_coeff(self, c: CoeffPoly) -> SkewPoly:
        if c.is_zero():
            return self.zero()
        return SkewPoly({(0,) * self.n: c}, self.n)

    def const(self, value) -> SkewPoly:
        return self.from_coeff(self.ring.const(value))

    def gen(self, i: int) -> SkewPoly:
        e = [0] * self.n
        e[i] = 1
        return SkewPoly({tuple(e): self.ring.one()}, self.n)

    def monomial(self, expo, coeff=None) -> SkewPoly:
        c = self.ring.one() if coeff is None else coeff
        if c.is_zero():
            return self.zero()
        return SkewPoly({tuple(expo): c}, self.n)

    def relation_rhs(self, i: int, j: int) -> SkewPoly:
        """Normal form of x_j x_i, straight from the stored relation."""
        rel = self.relations[(i, j)]
        e = [0] * self.n
        e[i] += 1
        e[j] += 1
        out = self.monomial(e, rel.d) + self.from_coeff(rel.r0)
        for k, rk in enumerate(rel.rk):
            if not rk.is_zero():
                ek = [0] * self.n
                ek[k] = 1
                out = out + self.monomial(ek, rk)
        return out

    # -- structured reduction path -----------------------------------------

    def push_coeff_left(self, word: tuple, r: CoeffPoly):
        """Expand ``x_word * r`` as a sum of ``coefficient * subword`` pairs,
        applying ``x_i r = sigma_i(r) x_i + delta_i(r)`` from the right."""
        if r.is_zero():
            return []
        if not word:
            return [(r, ())]
        head, last = word[:-1], word[-1]
        out = []
        sig = apply_endo(self.sigma[last], r)
        if not sig.is_zero():
            out.extend((c, w + (last,)) for c, w in self.push_coeff_left(head, sig))
        dele = apply_sder(self.delta[last], r)
        if not dele.is_zero():
            out.extend(self.push_coeff_left(head, dele))
        return out

    def _mul_monomials(self, e1: tuple, e2: tuple) -> SkewPoly:
        """Normal form of ``x^e1 * x^e2`` (both already ordered)."""
        key = (e1, e2)
        cached = self._mono_cache.get(key)
        if cached is not None:
            return cached
        word = _expand(e1) + _expand(e2)
        acc = self.zero()
        work = [(self.ring.one(), word)]
        while work:
            coeff, w = work.pop()
            pos = _first_inversion(w)
            if pos is None:
                acc = acc + self.monomial(_pack(w, self.n), coeff)
                continue
            pre, j, i, post = w[:pos], w[pos], w[pos + 1], w[pos + 2:]
            rel = self.relations[(i, j)]
            for c, pre2 in self.push_coeff_left(pre, rel.d):
                work.append((coeff * c, pre2 + (i, j) + post))
            if not rel.r0.is_zero():
                for c, pre2 in self.push_coeff_left(pre, rel.r0):
                    work.append((coeff * c, pre2 + post))
            for k, rk in enumerate(rel.rk):
                if not rk.is_zero():
                    for c, pre2 in self.push_coeff_left(pre, rk):
                        work.append((coeff * c, pre2 + (k,) + post))
        self._mono_cache[key] = acc
        return acc

    def multiply(self, f: SkewPoly, g: SkewPoly) -> SkewPoly:
        """PBW normal form of the product; associative and unital."""
        out = self.zero()
        for e1, c1 in f.terms.items():
            for e2, c2 in g.terms.items():
                moved = self.push_coeff_left(_expand(e1), c2)
                for h, w in moved:
                    part = self._mul_monomials(_pack(w, self.n), e2)
                    out = out + part.scale_left(c1 * h)
        return out

    def power(self, f: SkewPoly, k: int) -> SkewPoly:
        out = self.one()
        for _ in range(k):
            out = self.multiply(out, f)
        return out

    def normalize(self, terms) -> SkewPoly:
        """Normal form of a sum of words.

        ``terms`` is an iterable of ``(coeff, atoms)`` pairs where ``coeff``
        is a CoeffPoly (or int/Scalar) and ``atoms`` is a sequence mixing
        generator indices (int) and CoeffPoly factors, in word order.
        """
        total = self.zero()
        for coeff, atoms in terms:
            if not isinstance(coeff, CoeffPoly):
                coeff = self.ring.const(coeff)
            cur = self.from_coeff(coeff)
            for atom in atoms:
                factor = self.gen(atom) if isinstance(atom, int) else self.from_coeff(atom)
                cur = self.multiply(cur, factor)
            total = total + cur
        return total

    # -- small-step oracle ---------------------------------------------------

    def normalize_atoms(self, atoms, strategy: str = "leftmost") -> SkewPoly:
        """Reduce one word of atoms by single rewrite steps.

        The redex picked at each step is the first (``leftmost``) or last
        (``rightmost``) adjacent pair that is either two coefficients, a
        generator followed by a coefficient, or an out-of-order generator
        pair.  Used as the independent oracle and by the diamond check.
        """
        acc = self.zero()
        work = [tuple(atoms)]
        while work:
            w = work.pop()
            pos = self._find_redex(w, strategy)
            if pos is None:
                acc = acc + self._extract(w)
                continue
            a, b = w[pos], w[pos + 1]
            pre, post = w[:pos], w[pos + 2:]
            if isinstance(a, CoeffPoly) and isinstance(b, CoeffPoly):
                prod = a * b
                if not prod.is_zero():
                    work.append(pre + (prod,) + post)
            elif isinstance(a, int) and isinstance(b, CoeffPoly):
                sig = apply_endo(self.sigma[a], b)
                if not sig.is_zero():
                    work.append(pre + (sig, a) + post)
                dele = apply_sder(self.delta[a], b)
                if not dele.is_zero():
                    work.append(pre + (dele,) + post)
            else:  # out-of-order generator pair
                j, i = a, b
                rel = self.relations[(i, j)]
                work.append(pre + (rel.d, i, j) + post)
                if not rel.r0.is_zero():
                    work.append(pre + (rel.r0,) + post)
                for k, rk in enumerate(rel.rk):
                    if not rk.is_zero():
                        work.append(pre + (rk, k) + post)
        return acc

    @staticmethod
    def _find_redex(w, strategy):
        rng = range(len(w) - 1)
        if strategy == "rightmost":
            rng = reversed(rng)
        elif strategy != "leftmost":
            raise ValueError(f"unknown strategy: {strategy}")
        for p in rng:
            a, b = w[p], w[p + 1]
            if isinstance(a, CoeffPoly):
                if isinstance(b, CoeffPoly):
                    return p
            elif isinstance(b, CoeffPoly) or a > b:
                return p
        return None

    def _extract(self, w) -> SkewPoly:
        coeff = self.ring.one()
        gens = []
        for atom in w:
            if isinstance(atom, CoeffPoly):
                coeff = coeff * atom
            else:
                gens.append(atom)
        return self.monomial(_pack(tuple(gens), self.n), coeff)

    # -- power commutation ---------------------------------------------------

    def power_commute_closed(self, i: int, m: int, r: CoeffPoly) -> SkewPoly:
        """Closed binomial form of ``x_i^m * r``; requires that sigma_i and
        delta_i commute."""
        audit = commutation_audit([self.sigma[i]], [self.delta[i]])
        if not audit.ok:
            raise HypothesisError(
                f"sigma and delta of generator {self.names[i]} do not commute"
            )
        out = self.zero()
        for k in range(m + 1):
            img = r
            for _ in range(k):
                img = apply_sder(self.delta[i], img)
            for _ in range(m - k):
                img = apply_endo(self.sigma[i], img)
            if img.is_zero():
                continue
            e = [0] * self.n
            e[i] = m - k
            out = out + self.monomial(e, img.scale(self.ring.scalar(comb(m, k))))
        return out

    def power_commute_generic(self, i: int, m: int, r: CoeffPoly) -> SkewPoly:
        """Expand ``x_i^m * r`` by enumerating every interleaving of the
        sigma and delta applications; needs no commutation hypothesis."""
        out = self.zero()
        # (composition applied so far, number of deltas used) with multiplicity
        layer = [(r, 0)]
        for _ in range(m):
            nxt = []
            for value, drops in layer:
                nxt.append((apply_endo(self.sigma[i], value), drops))
                nxt.append((apply_sder(self.delta[i], value), drops + 1))
            layer = [(v, d) for v, d in nxt if not v.is_zero()]
        for value, drops in layer:
            e = [0] * self.n
            e[i] = m - drops
            out = out + self.monomial(e, value)
        return out

    # -- consistency -----------------------------------------------------------

    def pbw_consistency_check(self, degree_bound: int = 3) -> PbwAudit:
        """Compare the two maximal reduction strategies on every overlap word.

        Checks all strictly descending generator words of length 3 up to the
        bound, and every pair word followed by each coefficient variable.  A
        pass is desk-scale evidence of freeness, not a proof.
        """
        words = []
        max_len = min(degree_bound, self.n)
        for length in range(3, max_len + 1):
            words.extend(_descending_words(self.n, length))
        for j in range(self.n):
            for i in range(j):
                for v in range(self.ring.nvars):
                    words.append((j, i, self.ring.var(v)))
        for word in words:
            left = self.normalize_atoms(word, "leftmost")
            right = self.normalize_atoms(word, "rightmost")
            if left != right:
                return PbwAudit(
                    ok=False,
                    witness_word=tuple(word),
                    left=left,
                    right=right,
                    rendered=self.render_word(word),
                )
        return PbwAudit(ok=True)

    # -- degree -------------------------------------------------------------

    @staticmethod
    def degree_exp(f: SkewPoly) -> DegreeInfo:
        """Total generator degree and the exponents attaining it; the zero
        element reports degree None (minus infinity)."""
        if f.is_zero():
            return DegreeInfo(None, frozenset())
        deg = max(sum(e) for e in f.terms)
        return DegreeInfo(deg, frozenset(e for e in f.terms if sum(e) == deg))

    # -- rendering ------------------------------------------------------------

    def render(self, f: SkewPoly) -> str:
        if f.is_zero():
            return "0"
        parts = []
        for e in sorted(f.terms, key=lambda e: (sum(e), e), reverse=True):
            c = f.terms[e]
            factors = []
            for name, k in zip(self.names, e):
                if k == 1:
                    factors.append(name)
                elif k:
                    factors.append(f"{name}^{k}")
            cs = render_coeff(c, self.ring.params, self.ring.coeff_vars)
            if not factors:
                term = cs
            elif cs == "1":
                term = "*".join(factors)
            elif cs == "-1":
                term = "-" + "*".join(factors)
            else:
                if " + " in cs or " - " in cs:
                    cs = f"({cs})"
                term = cs + "*" + "*".join(factors)
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += " - " + term[1:] if term.startswith("-") else " + " + term
        return out

    def render_word(self, atoms) -> str:
        bits = []
        for atom in atoms:
            if isinstance(atom, int):
                bits.append(self.names[atom])
            else:
                bits.append(f"({self.ring.render(atom)})")
        return "*".join(bits)


def _expand(e: tuple) -> tuple:
    out = []
    for i, k in enumerate(e):
        out.extend([i] * k)
    return tuple(out)


def _pack(word: tuple, n: int) -> tuple:
    e = [0] * n
    for i in word:
        e[i] += 1
    return tuple(e)


def _first_inversion(w: tuple):
    for p in range(len(w) - 1):
        if w[p] > w[p + 1]:
            return p
    return None


def _descending_words(n: int, length: int):
    from itertools import combinations

    for combo in combinations(range(n), length):
        yield tuple(reversed(combo))
