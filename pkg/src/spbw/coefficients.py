"""Exact arithmetic for the coefficient ring: commutative polynomials in the
declared coefficient variables over the scalar field, together with the
endomorphisms and twisted derivations that act on them.

A :class:`CoeffPoly` maps exponent tuples (one entry per coefficient
variable) to nonzero :class:`~spbw.scalars.Scalar` values.  Endomorphisms and
twisted derivations are determined by their images on the variables; a
derivation is extended by the twisted product rule
``delta(f*g) = sigma(f)*delta(g) + delta(f)*g``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .scalars import Scalar, render_scalar


class CoeffRing:
    """Construction context: parameter names and coefficient-variable names.

    Values do not hold a reference to the ring; it is only needed to build
    and render them.
    """

    def __init__(self, params=(), coeff_vars=()):
        self.params = tuple(params)
        self.coeff_vars = tuple(coeff_vars)
        self.nparams = len(self.params)
        self.nvars = len(self.coeff_vars)

    # -- scalar constructors ----------------------------------------------

    def scalar(self, value) -> Scalar:
        if isinstance(value, Scalar):
            return value
        return Scalar.const(self.nparams, value)

    def param(self, name: str) -> Scalar:
        return Scalar.param(self.nparams, self.params.index(name))

    def szero(self) -> Scalar:
        return Scalar.const(self.nparams, 0)

    def sone(self) -> Scalar:
        return Scalar.const(self.nparams, 1)

    # -- polynomial constructors --------------------------------------------

    def zero(self) -> "CoeffPoly":
        return CoeffPoly({}, self.nvars, self.nparams)

    def one(self) -> "CoeffPoly":
        return self.const(1)

    def const(self, value) -> "CoeffPoly":
        s = self.scalar(value)
        if s.is_zero():
            return self.zero()
        return CoeffPoly({(0,) * self.nvars: s}, self.nvars, self.nparams)

    def var(self, j: int) -> "CoeffPoly":
        e = [0] * self.nvars
        e[j] = 1
        return CoeffPoly({tuple(e): self.sone()}, self.nvars, self.nparams)

    def monomial(self, expo, coeff=1) -> "CoeffPoly":
        s = self.scalar(coeff)
        if s.is_zero():
            return self.zero()
        return CoeffPoly({tuple(expo): s}, self.nvars, self.nparams)

    def identity_endo(self) -> "CoeffEndo":
        images = tuple(self.var(j) for j in range(self.nvars))
        return CoeffEndo(images, images)

    def zero_derivation(self, twist: "CoeffEndo") -> "CoeffSigmaDerivation":
        return CoeffSigmaDerivation(tuple(self.zero() for _ in range(self.nvars)), twist)

    def render(self, p: "CoeffPoly") -> str:
        return render_coeff(p, self.params, self.coeff_vars)


class CoeffPoly:
    """Polynomial in the coefficient variables with Scalar coefficients.

    ``terms`` never stores a zero Scalar; the zero polynomial is the empty
    map.  Immutable by convention.
    """

    __slots__ = ("terms", "nvars", "nparams")

    def __init__(self, terms: dict, nvars: int, nparams: int):
        self.terms = terms
        self.nvars = nvars
        self.nparams = nparams

    def _make(self, terms: dict) -> "CoeffPoly":
        return CoeffPoly(terms, self.nvars, self.nparams)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Scalar:
        """The degree-zero coefficient (the whole value if constant)."""
        for e, c in self.terms.items():
            if not any(e):
                return c
        return Scalar.const(self.nparams, 0)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def __add__(self, other: "CoeffPoly") -> "CoeffPoly":
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

    def __neg__(self) -> "CoeffPoly":
        return self._make({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "CoeffPoly") -> "CoeffPoly":
        return self + (-other)

    def __mul__(self, other: "CoeffPoly") -> "CoeffPoly":
        out: dict = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = out[e] + ca * cb if e in out else ca * cb
                if s.is_zero():
                    out.pop(e, None)
                else:
                    out[e] = s
        return self._make(out)

    def scale(self, s: Scalar) -> "CoeffPoly":
        if s.is_zero():
            return self._make({})
        return self._make({e: c * s for e, c in self.terms.items()})

    def __pow__(self, k: int) -> "CoeffPoly":
        out = CoeffPoly({(0,) * self.nvars: Scalar.const(self.nparams, 1)}, self.nvars, self.nparams)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoeffPoly):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[e] == other.terms[e] for e in self.terms)

    __hash__ = None

    def __repr__(self):
        return f"CoeffPoly({render_coeff(self, tuple(f'p{i}' for i in range(self.nparams)), tuple(f't{j}' for j in range(self.nvars)))})"


def derivative(p: CoeffPoly, j: int = 0) -> CoeffPoly:
    """Formal derivative with respect to the j-th coefficient variable."""
    out: dict = {}
    for e, c in p.terms.items():
        if e[j]:
            e2 = list(e)
            e2[j] -= 1
            out[tuple(e2)] = c * Scalar.const(p.nparams, e[j])
    return CoeffPoly(out, p.nvars, p.nparams)


def divmod_univariate(f: CoeffPoly, g: CoeffPoly) -> tuple:
    """Exact long division of univariate polynomials; returns (quot, rem)."""
    if f.nvars != 1 or g.nvars != 1:
        raise ValueError("divmod_univariate needs univariate operands")
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    quot = CoeffPoly({}, 1, f.nparams)
    rem = f
    dg = g.total_degree()
    lead_g = g.terms[(dg,)]
    while not rem.is_zero() and rem.total_degree() >= dg:
        dr = rem.total_degree()
        c = rem.terms[(dr,)] / lead_g
        mono = CoeffPoly({(dr - dg,): c}, 1, f.nparams)
        quot = quot + mono
        rem = rem - mono * g
    return quot, rem


class CoeffEndo:
    """Algebra endomorphism of the coefficient ring, given by variable images.

    Applying it substitutes each variable by its image; scalars are fixed.
    ``inverse_images`` is optional and, when present, is verified to undo the
    substitution on every variable.
    """

    __slots__ = ("images", "inverse_images", "_memo")

    def __init__(self, images, inverse_images=None):
        self.images = tuple(images)
        self.inverse_images = tuple(inverse_images) if inverse_images is not None else None
        self._memo = {}
        if self.inverse_images is not None:
            fwd_then_back = [apply_endo(CoeffEndo(self.inverse_images), img) for img in self.images]
            for j, p in enumerate(fwd_then_back):
                var = _var_poly(self.images, j)
                if p != var:
                    raise ValueError(f"claimed inverse does not undo image of variable {j}")

    def is_identity(self) -> bool:
        return all(img == _var_poly(self.images, j) for j, img in enumerate(self.images))

    def inverse(self) -> "CoeffEndo":
        if self.inverse_images is None:
            raise ValueError("endomorphism has no recorded inverse")
        return CoeffEndo(self.inverse_images, self.images)


def _var_poly(images, j: int) -> CoeffPoly:
    ref = images[j]
    e = [0] * ref.nvars
    e[j] = 1
    return CoeffPoly({tuple(e): Scalar.const(ref.nparams, 1)}, ref.nvars, ref.nparams)


def apply_endo(sigma: CoeffEndo, p: CoeffPoly) -> CoeffPoly:
    """Substitution homomorphism: each variable replaced by its image."""
    out = CoeffPoly({}, p.nvars, p.nparams)
    one = CoeffPoly({(0,) * p.nvars: Scalar.const(p.nparams, 1)}, p.nvars, p.nparams)
    for e, c in p.terms.items():
        term = one.scale(c)
        for j, k in enumerate(e):
            if k:
                term = term * _endo_power(sigma, j, k)
        out = out + term
    return out


def _endo_power(sigma: CoeffEndo, j: int, k: int) -> CoeffPoly:
    memo = sigma._memo
    key = (j, k)
    if key not in memo:
        if k == 1:
            memo[key] = sigma.images[j]
        else:
            memo[key] = _endo_power(sigma, j, k - 1) * sigma.images[j]
    return memo[key]


class CoeffSigmaDerivation:
    """Twisted derivation of the coefficient ring, determined by variable
    images and the endomorphism it twists against."""

    __slots__ = ("images", "twist", "_memo")

    def __init__(self, images, twist: CoeffEndo):
        self.images = tuple(images)
        self.twist = twist
        self._memo = {}

    def is_zero(self) -> bool:
        return all(img.is_zero() for img in self.images)


def apply_sder(delta: CoeffSigmaDerivation, p: CoeffPoly) -> CoeffPoly:
    """Extend ``delta`` from variable images to all of R by the twisted
    product rule; scalars map to zero."""
    out = CoeffPoly({}, p.nvars, p.nparams)
    for e, c in p.terms.items():
        out = out + _sder_monomial(delta, e, p).scale(c)
    return out


def _sder_monomial(delta: CoeffSigmaDerivation, e: tuple, ref: CoeffPoly) -> CoeffPoly:
    if e in delta._memo:
        return delta._memo[e]
    j = next((i for i, k in enumerate(e) if k), None)
    if j is None:
        result = CoeffPoly({}, ref.nvars, ref.nparams)
    else:
        # split the monomial as t_j * rest and apply the product rule
        rest = list(e)
        rest[j] -= 1
        rest = tuple(rest)
        rest_poly = CoeffPoly({rest: Scalar.const(ref.nparams, 1)}, ref.nvars, ref.nparams)
        tj_image = apply_endo(delta.twist, _var_poly_dims(j, ref))
        result = tj_image * _sder_monomial(delta, rest, ref) + delta.images[j] * rest_poly
    delta._memo[e] = result
    return result


def _var_poly_dims(j: int, ref: CoeffPoly) -> CoeffPoly:
    e = [0] * ref.nvars
    e[j] = 1
    return CoeffPoly({tuple(e): Scalar.const(ref.nparams, 1)}, ref.nvars, ref.nparams)


# -- commutation audit ------------------------------------------------------


@dataclass
class CommutationAudit:
    """Per-pair results of the four commutation identities, decided by
    evaluating both compositions on every coefficient variable."""

    sigma_sigma: dict = field(default_factory=dict)   # (i, j) -> bool, i < j
    delta_delta: dict = field(default_factory=dict)   # (i, j) -> bool, i < j
    delta_sigma: dict = field(default_factory=dict)   # (i, j) -> bool, i != j
    sigma_delta_diag: dict = field(default_factory=dict)  # i -> bool

    @property
    def ok(self) -> bool:
        return all(
            all(table.values())
            for table in (self.sigma_sigma, self.delta_delta, self.delta_sigma, self.sigma_delta_diag)
        )

    def failures(self):
        out = []
        for label, table in (
            ("sigma-sigma", self.sigma_sigma),
            ("delta-delta", self.delta_delta),
            ("delta-sigma", self.delta_sigma),
            ("sigma-delta", self.sigma_delta_diag),
        ):
            out.extend((label, key) for key, good in table.items() if not good)
        return out


def commutation_audit(sigmas, deltas) -> CommutationAudit:
    """Check which pairs of coefficient-level maps commute.

    Sufficient on variable images because every map is determined by them.
    Failures are recorded, not raised.
    """
    audit = CommutationAudit()
    n = len(sigmas)
    nvars = len(sigmas[0].images) if sigmas else 0

    def vars_of(ref_endo):
        return [_var_poly(ref_endo.images, j) for j in range(nvars)]

    for i in range(n):
        for j in range(i + 1, n):
            audit.sigma_sigma[(i, j)] = all(
                apply_endo(sigmas[i], apply_endo(sigmas[j], v)) == apply_endo(sigmas[j], apply_endo(sigmas[i], v))
                for v in vars_of(sigmas[i])
            ) if nvars else True
            audit.delta_delta[(i, j)] = all(
                apply_sder(deltas[i], apply_sder(deltas[j], v)) == apply_sder(deltas[j], apply_sder(deltas[i], v))
                for v in vars_of(sigmas[i])
            ) if nvars else True
    for i in range(n):
        for j in range(n):
            if i != j:
                audit.delta_sigma[(i, j)] = all(
                    apply_sder(deltas[i], apply_endo(sigmas[j], v)) == apply_endo(sigmas[j], apply_sder(deltas[i], v))
                    for v in vars_of(sigmas[i])
                ) if nvars else True
    for i in range(n):
        audit.sigma_delta_diag[i] = all(
            apply_endo(sigmas[i], apply_sder(deltas[i], v)) == apply_sder(deltas[i], apply_endo(sigmas[i], v))
            for v in vars_of(sigmas[i])
        ) if nvars else True
    return audit


# -- rendering ----------------------------------------------------------------


def render_coeff(p: CoeffPoly, param_names, var_names) -> str:
    if not p.terms:
        return "0"
    parts = []
    for e in sorted(p.terms, key=lambda e: (sum(e), e), reverse=True):
        c = p.terms[e]
        factors = []
        for name, k in zip(var_names, e):
            if k == 1:
                factors.append(name)
            elif k:
                factors.append(f"{name}^{k}")
        cs = render_scalar(c, param_names)
        if not factors:
            term = cs
        elif cs == "1":
            term = "*".join(factors)
        elif cs == "-1":
            term = "-" + "*".join(factors)
        else:
            if ("+" in cs or (" - " in cs) or cs.startswith("(")) and not (cs.startswith("(") and cs.endswith(")")):
                cs = f"({cs})"
            term = cs + "*" + "*".join(factors)
        parts.append(term)
    out = parts[0]
    for term in parts[1:]:
        out += " - " + term[1:] if term.startswith("-") else " + " + term
    return out
