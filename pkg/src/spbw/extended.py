"""Lifts of coefficient maps to the whole extension, and the hypothesis
package they require.

An :class:`AlgebraEndo` is given by images of every coefficient variable and
every generator; construction verifies that every defining relation of the
presentation is respected, so the same type serves coefficientwise lifts,
volume twists and user-supplied calculus twists uniformly.  An
:class:`ExtendedDerivation` acts coefficientwise on normal forms and kills
generator monomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .coefficients import CoeffSigmaDerivation, apply_endo, apply_sder, commutation_audit
from .core import Presentation, SkewPoly
from .errors import HypothesisError
from .linalg import solve
from .scalars import Scalar


class AlgebraEndo:
    """Endomorphism of the extension, determined by symbol images.

    ``coeff_images`` and ``gen_images`` are SkewPoly images of the
    coefficient variables and generators.  Unless ``check=False``, the
    constructor verifies that the images commute where the symbols do and
    that every defining relation maps to zero; when an inverse is supplied
    the round trip on every symbol is verified as well.
    """

    def __init__(self, P: Presentation, coeff_images, gen_images, inverse=None, check=True):
        self.P = P
        self.coeff_images = tuple(coeff_images)
        self.gen_images = tuple(gen_images)
        self.inverse = inverse
        self._power_memo: dict = {}
        if check:
            self._check_relations()
            if inverse is not None:
                self._check_inverse()

    # -- construction checks -------------------------------------------------

    def _check_relations(self):
        P = self.P
        for a in range(P.ring.nvars):
            for b in range(a + 1, P.ring.nvars):
                lhs = P.multiply(self.coeff_images[a], self.coeff_images[b])
                rhs = P.multiply(self.coeff_images[b], self.coeff_images[a])
                if lhs != rhs:
                    raise ValueError(
                        f"images of commuting variables {P.ring.coeff_vars[a]}, "
                        f"{P.ring.coeff_vars[b]} do not commute"
                    )
        for i in range(P.n):
            for j in range(P.ring.nvars):
                lhs = P.multiply(self.gen_images[i], self.coeff_images[j])
                sig = self.apply(P.from_coeff(apply_endo(P.sigma[i], P.ring.var(j))))
                dele = self.apply(P.from_coeff(apply_sder(P.delta[i], P.ring.var(j))))
                rhs = P.multiply(sig, self.gen_images[i]) + dele
                if lhs != rhs:
                    raise ValueError(
                        f"relation {P.names[i]}*{P.ring.coeff_vars[j]} not respected"
                    )
        for (i, j), _rel in P.relations.items():
            lhs = P.multiply(self.gen_images[j], self.gen_images[i])
            rhs = self.apply(P.relation_rhs(i, j))
            if lhs != rhs:
                raise ValueError(f"relation {P.names[j]}*{P.names[i]} not respected")

    def _check_inverse(self):
        P = self.P
        for j in range(P.ring.nvars):
            if self.inverse.apply(self.coeff_images[j]) != P.from_coeff(P.ring.var(j)):
                raise ValueError(f"inverse does not undo {P.ring.coeff_vars[j]}")
        for i in range(P.n):
            if self.inverse.apply(self.gen_images[i]) != P.gen(i):
                raise ValueError(f"inverse does not undo {P.names[i]}")

    # -- action ------------------------------------------------------------

    def apply(self, f: SkewPoly) -> SkewPoly:
        P = self.P
        out = P.zero()
        for e, c in f.terms.items():
            term = self._subst_coeff(c)
            for i, k in enumerate(e):
                if k:
                    term = P.multiply(term, self._power("g", i, k))
            out = out + term
        return out

    def _subst_coeff(self, c) -> SkewPoly:
        P = self.P
        out = P.zero()
        for e, s in c.terms.items():
            term = P.const(s)
            for j, k in enumerate(e):
                if k:
                    term = P.multiply(term, self._power("c", j, k))
            out = out + term
        return out

    def _power(self, kind, idx, k):
        key = (kind, idx, k)
        if key not in self._power_memo:
            base = self.coeff_images[idx] if kind == "c" else self.gen_images[idx]
            if k == 1:
                self._power_memo[key] = base
            else:
                self._power_memo[key] = self.P.multiply(self._power(kind, idx, k - 1), base)
        return self._power_memo[key]

    # -- composition --------------------------------------------------------

    def compose(self, other: "AlgebraEndo") -> "AlgebraEndo":
        """self after other; composes inverses in the opposite order when
        both are present."""
        inv = None
        if self.inverse is not None and other.inverse is not None:
            inv = AlgebraEndo(
                self.P,
                [other.inverse.apply(img) for img in self.inverse.coeff_images],
                [other.inverse.apply(img) for img in self.inverse.gen_images],
                check=False,
            )
        return AlgebraEndo(
            self.P,
            [self.apply(img) for img in other.coeff_images],
            [self.apply(img) for img in other.gen_images],
            inverse=inv,
            check=False,
        )

    def images_equal(self, other: "AlgebraEndo") -> bool:
        return all(a == b for a, b in zip(self.coeff_images, other.coeff_images)) and all(
            a == b for a, b in zip(self.gen_images, other.gen_images)
        )

    @staticmethod
    def identity(P: Presentation) -> "AlgebraEndo":
        cimgs, gimgs = identity_images(P)
        endo = AlgebraEndo(P, cimgs, gimgs, check=False)
        endo.inverse = AlgebraEndo(P, cimgs, gimgs, check=False)
        return endo

    def is_identity(self) -> bool:
        cimgs, gimgs = identity_images(self.P)
        return self.images_equal(AlgebraEndo(self.P, cimgs, gimgs, check=False))


def identity_images(P: Presentation):
    return (
        tuple(P.from_coeff(P.ring.var(j)) for j in range(P.ring.nvars)),
        tuple(P.gen(i) for i in range(P.n)),
    )


def frame_affine_inverse(P: Presentation, coeff_images, gen_images):
    """Invert a map whose symbol images are affine in the symbol frame
    (constant plus linear combination of the variables and generators).

    Returns (coeff_images, gen_images) of the inverse, or None when an image
    is not frame-affine or the linear part is singular.
    """
    m, n = P.ring.nvars, P.n
    size = m + n
    nparams = P.ring.nparams
    zero = Scalar.const(nparams, 0)
    matrix = [[zero] * size for _ in range(size)]
    consts = [zero] * size
    images = list(coeff_images) + list(gen_images)
    for row, img in enumerate(images):
        for e, c in img.terms.items():
            xdeg = sum(e)
            for tvec, s in c.terms.items():
                tdeg = sum(tvec)
                if xdeg + tdeg > 1:
                    return None
                if xdeg == 0 and tdeg == 0:
                    consts[row] = consts[row] + s
                elif tdeg == 1:
                    col = tvec.index(1)
                    matrix[row][col] = matrix[row][col] + s
                else:
                    col = m + e.index(1)
                    matrix[row][col] = matrix[row][col] + s
    one = Scalar.const(nparams, 1)
    unit_cols = []
    for k in range(size):
        col = [zero] * size
        col[k] = one
        unit_cols.append(col)
    inv_cols = solve([list(r) for r in matrix], unit_cols, nparams)
    if inv_cols is None:
        return None

    def symbol(k):
        return P.from_coeff(P.ring.var(k)) if k < m else P.gen(k - m)

    def build(srow):
        # inverse sends symbol srow to sum_k B[srow][k] (symbol_k - const_k)
        # with B = A^{-1}; inv_cols[k][srow] is B[srow][k]
        out = P.zero()
        for k in range(size):
            a = inv_cols[k][srow]
            if a.is_zero():
                continue
            out = out + (symbol(k) - P.const(consts[k])).scale(a)
        return out

    return (
        tuple(build(j) for j in range(m)),
        tuple(build(m + i) for i in range(n)),
    )


def triangular_inverse(P: Presentation, coeff_images, gen_images):
    """Invert a map that fixes every coefficient variable and sends each
    generator to ``a*x_i + lower`` with ``lower`` free of x_i and of later
    generators.  Covers shear twists whose lower part is not frame-affine."""
    m, n = P.ring.nvars, P.n
    cid, gid = identity_images(P)
    if any(img != cid[j] for j, img in enumerate(coeff_images)):
        return None
    inv_gens = list(gid)
    for i in range(n):
        img = gen_images[i]
        key = tuple(1 if k == i else 0 for k in range(n))
        lin = img.terms.get(key)
        if lin is None or not lin.is_constant():
            return None
        a = lin.constant_value()
        rest = img - P.gen(i).scale_left(lin)
        if any(e[i] or any(e[i + 1:]) for e in rest.terms):
            return None
        inv_gens[i] = (P.gen(i) - rest).scale(a.inverse())
    return tuple(cid), tuple(inv_gens)


def auto_inverse(P: Presentation, coeff_images, gen_images):
    """Try the two mechanical inversion schemes; None when both fail."""
    got = frame_affine_inverse(P, coeff_images, gen_images)
    if got is None:
        got = triangular_inverse(P, coeff_images, gen_images)
    return got


# -- hypothesis package --------------------------------------------------------


@dataclass
class HypothesisReport:
    """Outcome of every commutation and shape condition, split into the
    block required by the coefficientwise lifts (H) and the extra block
    required by the plain-twist calculus construction (T)."""

    h1_sigma_delta_diag: bool
    h2_delta_delta: bool
    h3_delta_sigma: bool
    h4_delta_kills_constants: bool
    t1_relations_trivial: bool
    t2_sigma_sigma: bool
    failures: list = field(default_factory=list)

    @property
    def proposition_ok(self) -> bool:
        return (
            self.h1_sigma_delta_diag
            and self.h2_delta_delta
            and self.h3_delta_sigma
            and self.h4_delta_kills_constants
        )

    @property
    def theorem_ok(self) -> bool:
        return self.proposition_ok and self.t1_relations_trivial and self.t2_sigma_sigma


def hypothesis_check(P: Presentation) -> HypothesisReport:
    """Evaluate the commutation system and relation-shape conditions.

    All findings are data; nothing is raised.
    """
    audit = commutation_audit(P.sigma, P.delta)
    failures = [f"{label} pair {key}" for label, key in audit.failures()]

    h4 = True
    for (i, j), rel in P.relations.items():
        for k in range(P.n):
            pieces = [("d", rel.d), ("r0", rel.r0)] + [
                (f"r{l + 1}", rel.rk[l]) for l in range(P.n)
            ]
            for label, c in pieces:
                if not apply_sder(P.delta[k], c).is_zero():
                    h4 = False
                    failures.append(
                        f"delta_{P.names[k]} does not kill {label} of relation "
                        f"({P.names[j]},{P.names[i]})"
                    )

    t1 = True
    one = P.ring.one()
    for (i, j), rel in P.relations.items():
        if rel.d != one:
            t1 = False
            failures.append(f"d of relation ({P.names[j]},{P.names[i]}) is not 1")
        for l, rk in enumerate(rel.rk):
            if not rk.is_zero():
                t1 = False
                failures.append(
                    f"linear tail r{l + 1} of relation ({P.names[j]},{P.names[i]}) is nonzero"
                )

    return HypothesisReport(
        h1_sigma_delta_diag=all(audit.sigma_delta_diag.values()),
        h2_delta_delta=all(audit.delta_delta.values()),
        h3_delta_sigma=all(audit.delta_sigma.values()),
        h4_delta_kills_constants=h4,
        t1_relations_trivial=t1,
        t2_sigma_sigma=all(audit.sigma_sigma.values()),
        failures=failures,
    )


def _require_h_block(P: Presentation):
    report = hypothesis_check(P)
    if not report.proposition_ok:
        raise HypothesisError(
            "coefficient maps do not satisfy the lifting hypotheses: "
            + "; ".join(report.failures)
        )


# -- lifts ---------------------------------------------------------------------


def extend_sigma(P: Presentation, i: int) -> AlgebraEndo:
    """Lift sigma_i to the extension: coefficientwise on normal forms,
    fixing every generator.  Carries an inverse when sigma_i does."""
    _require_h_block(P)
    cimgs = tuple(P.from_coeff(apply_endo(P.sigma[i], P.ring.var(j))) for j in range(P.ring.nvars))
    _, gimgs = identity_images(P)
    inverse = None
    if P.sigma[i].inverse_images is not None:
        inv_c = tuple(P.from_coeff(img) for img in P.sigma[i].inverse_images)
        inverse = AlgebraEndo(P, inv_c, gimgs, check=False)
    return AlgebraEndo(P, cimgs, gimgs, inverse=inverse)


class ExtendedDerivation:
    """Coefficientwise lift of a twisted derivation: acts on the left
    coefficients of a normal form and kills generator monomials, so
    ``apply(sum r_a x^a) = sum delta(r_a) x^a``.

    ``gen_images`` is structurally fixed to zero for every generator; it is
    stored so audits can report the full map data.
    """

    def __init__(self, P: Presentation, base: CoeffSigmaDerivation, twist: AlgebraEndo):
        self.P = P
        self.base = base
        self.coeff_images = tuple(P.from_coeff(img) for img in base.images)
        self.twist = twist
        self.gen_images = tuple(P.zero() for _ in range(P.n))

    def apply(self, f: SkewPoly) -> SkewPoly:
        P = self.P
        out = P.zero()
        for e, c in f.terms.items():
            img = apply_sder(self.base, c)
            if not img.is_zero():
                out = out + P.monomial(e, img)
        return out


def extend_delta(P: Presentation, i: int) -> ExtendedDerivation:
    """Lift delta_i to the extension, twisted against the lifted sigma_i."""
    _require_h_block(P)
    return ExtendedDerivation(P, P.delta[i], extend_sigma(P, i))


# -- sampled verification --------------------------------------------------------


@dataclass
class LeibnizAudit:
    ok: bool
    checked: int
    witness: tuple | None = None  # (p, s) rendered strings

    def __bool__(self):
        return self.ok


def verify_twisted_leibniz(sig: AlgebraEndo, der: ExtendedDerivation, samples: int, degree: int, rng) -> LeibnizAudit:
    """Check ``delta~(p s) = sigma~(p) delta~(s) + delta~(p) s`` exactly on
    random pairs; reports the first counterexample."""
    from .sampling import random_skew

    P = sig.P
    for count in range(samples):
        p = random_skew(P, rng, degree)
        s = random_skew(P, rng, degree)
        lhs = der.apply(P.multiply(p, s))
        rhs = P.multiply(sig.apply(p), der.apply(s)) + P.multiply(der.apply(p), s)
        if lhs != rhs:
            return LeibnizAudit(False, count + 1, (P.render(p), P.render(s)))
    return LeibnizAudit(True, samples)
