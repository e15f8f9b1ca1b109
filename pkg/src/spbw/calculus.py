"""The differential graded algebra over a presentation, and every smoothness
check that runs on it.

Forms are stored with right coefficients over a basis of wedges of the
differential generators; the left module structure is carried by one
invertible twist per generator: ``f du_i = du_i nu_i(f)``.  Two modes exist:

* ``theorem``: differentials for the algebra generators only, twists forced
  to the coefficientwise lifts of the sigma maps, plain antisymmetry;
* ``flat``: differentials for the coefficient variables too, user-supplied
  twists, and optional wedge constants generalizing plain antisymmetry.

A differential generator is usually the differential of a single symbol but
may be bound to any invertible frame-linear combination of symbols, which is
what makes diagonalizable mixing twists reachable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .core import Presentation, SkewPoly
from .errors import CompatibilityError, ConfigError, NotAVolumeFormError
from .extended import AlgebraEndo, extend_sigma, hypothesis_check
from .linalg import kernel_basis, solve
from .sampling import random_skew
from .scalars import Scalar

THEOREM_MODE = "theorem"
FLAT_MODE = "flat"


@dataclass
class DGen:
    """One differential generator: a display name, the frame-linear algebra
    element it differentiates, and the invertible twist carrying the left
    module structure of its differential."""

    name: str
    potential: SkewPoly
    twist: AlgebraEndo


@dataclass
class CalculusSpec:
    """Differential generator list, twists, wedge constants and mode."""

    dgens: list
    wedge_signs: dict = field(default_factory=dict)  # (i, j) i<j -> Scalar
    mode: str = FLAT_MODE


class DiffForm:
    """Element of the graded algebra: map from sorted index subsets to right
    coefficients, meaning ``sum du_S * f_S``."""

    __slots__ = ("components", "n")

    def __init__(self, components: dict, n: int):
        self.components = components
        self.n = n

    def _make(self, components) -> "DiffForm":
        return DiffForm(components, self.n)

    def is_zero(self) -> bool:
        return not self.components

    def degrees(self):
        return sorted({len(s) for s in self.components})

    def homogeneous_degree(self):
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("form is not homogeneous")
        return degs[0]

    def __add__(self, other: "DiffForm") -> "DiffForm":
        out = dict(self.components)
        for s, f in other.components.items():
            if s in out:
                g = out[s] + f
                if g.is_zero():
                    del out[s]
                else:
                    out[s] = g
            else:
                out[s] = f
        return self._make(out)

    def __neg__(self) -> "DiffForm":
        return self._make({s: -f for s, f in self.components.items()})

    def __sub__(self, other: "DiffForm") -> "DiffForm":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffForm):
            return NotImplemented
        if self.components.keys() != other.components.keys():
            return False
        return all(self.components[s] == other.components[s] for s in self.components)

    __hash__ = None


class IntegralForm:
    """Right-linear functional on forms of one degree, stored by its values
    on the wedge basis: ``phi(du_S * f) = values[S] * f``."""

    __slots__ = ("degree", "values", "n")

    def __init__(self, degree: int, values: dict, n: int):
        self.degree = degree
        self.values = values
        self.n = n

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegralForm):
            return NotImplemented
        if self.degree != other.degree:
            return False
        if self.values.keys() != other.values.keys():
            return False
        return all(self.values[s] == other.values[s] for s in self.values)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.values


@dataclass
class VolumeData:
    omega: DiffForm
    nu: AlgebraEndo
    matches_sigma_composition: bool | None  # theorem mode only


@dataclass
class CheckOutcome:
    ok: bool
    witnesses: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


class Calculus:
    """Built and compatibility-checked context; all checks are pure."""

    def __init__(self, P: Presentation, spec: CalculusSpec):
        self.P = P
        self.spec = spec
        self.N = len(spec.dgens)
        self.nsyms = P.ring.nvars + P.n
        self._dcoords = None  # per symbol: tuple of N Scalars, or None row
        self._volume = None
        self.integrability_passed = None
        self.compatibility = None

    # -- symbols ------------------------------------------------------------

    def sym_skew(self, s: int) -> SkewPoly:
        P = self.P
        if s < P.ring.nvars:
            return P.from_coeff(P.ring.var(s))
        return P.gen(s - P.ring.nvars)

    def sym_name(self, s: int) -> str:
        P = self.P
        if s < P.ring.nvars:
            return P.ring.coeff_vars[s]
        return P.names[s - P.ring.nvars]

    # -- setup ----------------------------------------------------------------

    def _build_dcoords(self):
        """Invert the frame matrix of the potentials so each covered symbol
        gets its differential as a combination of the du basis."""
        P = self.P
        nparams = P.ring.nparams
        zero = Scalar.const(nparams, 0)
        used = set()
        matrix_rows = []
        for dg in self.spec.dgens:
            row = [zero] * self.nsyms
            for e, c in dg.potential.terms.items():
                xdeg = sum(e)
                for tvec, s in c.terms.items():
                    if xdeg + sum(tvec) != 1:
                        raise ConfigError(
                            f"potential of d({dg.name}) must be frame-linear"
                        )
                    col = tvec.index(1) if sum(tvec) else P.ring.nvars + e.index(1)
                    row[col] = row[col] + s
                    used.add(col)
            matrix_rows.append(row)
        cols = sorted(used)
        if len(cols) != self.N:
            raise ConfigError(
                "differential generators must span as many symbols as there are "
                f"of them (got {len(cols)} symbols for {self.N} generators)"
            )
        square = [[r[c] for c in cols] for r in matrix_rows]
        one = Scalar.const(nparams, 1)
        units = []
        for k in range(self.N):
            col = [zero] * self.N
            col[k] = one
            units.append(col)
        inv_cols = solve(square, units, nparams)
        if inv_cols is None:
            raise ConfigError("differential generator potentials are linearly dependent")
        dcoords = [None] * self.nsyms
        for pos, c in enumerate(cols):
            # symbol c = sum_i B[pos][i] * u_i with B the matrix inverse
            dcoords[c] = tuple(inv_cols[i][pos] for i in range(self.N))
        self._dcoords = dcoords

    # -- twists ------------------------------------------------------------------

    def twist_apply(self, i: int, f: SkewPoly) -> SkewPoly:
        return self.spec.dgens[i].twist.apply(f)

    def twist_apply_set(self, S, f: SkewPoly) -> SkewPoly:
        """nu_S(f): push f through du_S, applying the twists in stored
        (ascending) order."""
        for i in S:
            f = self.twist_apply(i, f)
        return f

    def twist_inv_apply_set(self, S, f: SkewPoly) -> SkewPoly:
        for i in reversed(tuple(S)):
            f = self.spec.dgens[i].twist.inverse.apply(f)
        return f

    def lam(self, i: int, j: int) -> Scalar:
        return self.spec.wedge_signs.get((i, j), Scalar.const(self.P.ring.nparams, 1))

    # -- form constructors ----------------------------------------------------------

    def zero_form(self) -> DiffForm:
        return DiffForm({}, self.N)

    def form(self, S, f: SkewPoly) -> DiffForm:
        if f.is_zero():
            return self.zero_form()
        return DiffForm({tuple(S): f}, self.N)

    def embed(self, f: SkewPoly) -> DiffForm:
        return self.form((), f)

    # -- operations ------------------------------------------------------------------

    def push_left(self, f: SkewPoly, S) -> DiffForm:
        """Rewrite ``f * du_S`` with the coefficient on the right."""
        return self.form(S, self.twist_apply_set(S, f))

    def left_multiply(self, a: SkewPoly, form: DiffForm) -> DiffForm:
        out = self.zero_form()
        for S, f in form.components.items():
            out = out + self.form(S, self.P.multiply(self.twist_apply_set(S, a), f))
        return out

    def right_multiply(self, form: DiffForm, a: SkewPoly) -> DiffForm:
        out = self.zero_form()
        for S, f in form.components.items():
            out = out + self.form(S, self.P.multiply(f, a))
        return out

    def _basis_product(self, S, T):
        """Merge two sorted index sets: None on repeats, else the merged set
        and the scalar factor from the crossings."""
        if set(S) & set(T):
            return None
        factor = Scalar.const(self.P.ring.nparams, 1)
        for s in S:
            for t in T:
                if s > t:
                    factor = factor * (-self.lam(t, s))
        return tuple(sorted(S + T)), factor

    def wedge(self, a: DiffForm, b: DiffForm) -> DiffForm:
        """Graded product: repeated generators annihilate, crossings pick up
        the sign and wedge constants, coefficients pass through twists."""
        out = self.zero_form()
        P = self.P
        for S, f in a.components.items():
            for T, g in b.components.items():
                merged = self._basis_product(S, T)
                if merged is None:
                    continue
                U, factor = merged
                coeff = P.multiply(self.twist_apply_set(T, f), g).scale(factor)
                out = out + self.form(U, coeff)
        return out

    def d0(self, f: SkewPoly) -> DiffForm:
        """Differential of a degree-zero element via the product-rule word
        expansion, normalized to right-coefficient form."""
        out = self.zero_form()
        for e, c in f.terms.items():
            for tvec, s in c.terms.items():
                word = []
                for j, k in enumerate(tvec):
                    word.extend([j] * k)
                for i, k in enumerate(e):
                    word.extend([self.P.ring.nvars + i] * k)
                out = out + self._d_word(word, s)
        return out

    def _d_word(self, word, weight: Scalar) -> DiffForm:
        P = self.P
        out = self.zero_form()
        for p, sym in enumerate(word):
            row = self._dcoords[sym]
            if row is None:
                continue
            pre = self._word_poly(word[:p])
            post = self._word_poly(word[p + 1:])
            for i, coeff in enumerate(row):
                if coeff.is_zero():
                    continue
                moved = P.multiply(self.twist_apply(i, pre), post).scale(coeff * weight)
                out = out + self.form((i,), moved)
        return out

    def _word_poly(self, word) -> SkewPoly:
        P = self.P
        atoms = [s - P.ring.nvars if s >= P.ring.nvars else P.ring.var(s) for s in word]
        return P.normalize([(1, atoms)])

    def differential(self, a: DiffForm) -> DiffForm:
        """Degree-one map: ``d(du_S f) = (-1)^{|S|} du_S ^ d(f)``."""
        out = self.zero_form()
        for S, f in a.components.items():
            part = self.wedge(self.form(S, self.P.one()), self.d0(f))
            if len(S) % 2:
                part = -part
            out = out + part
        return out

    # -- compatibility -----------------------------------------------------------------

    def _check_compatibility(self):
        """d applied along both sides of every defining relation must agree;
        otherwise no product-rule extension of d exists."""
        P = self.P
        failures = []
        m = P.ring.nvars
        for (i, j), _rel in P.relations.items():
            lhs = self._d_word([m + j, m + i], P.ring.sone())
            rhs = self.d0(P.relation_rhs(i, j))
            if lhs != rhs:
                failures.append(
                    (f"{P.names[j]}*{P.names[i]}", self.render_form(lhs - rhs))
                )
        for i in range(P.n):
            for j in range(m):
                lhs = self._d_word([m + i, j], P.ring.sone())
                # x_i t_j normalizes to sigma_i(t_j) x_i + delta_i(t_j)
                rhs = self.d0(P.normalize([(1, [i, P.ring.var(j)])]))
                if lhs != rhs:
                    failures.append(
                        (f"{P.names[i]}*{P.ring.coeff_vars[j]}", self.render_form(lhs - rhs))
                    )
        for a in range(m):
            for b in range(a + 1, m):
                lhs = self._d_word([a, b], P.ring.sone())
                rhs = self._d_word([b, a], P.ring.sone())
                if lhs != rhs:
                    failures.append(
                        (f"{P.ring.coeff_vars[a]}*{P.ring.coeff_vars[b]}", self.render_form(lhs - rhs))
                    )
        if failures:
            rel, residual = failures[0]
            raise CompatibilityError(
                f"differential is incompatible with relation {rel}; residual {residual}",
                relation=rel,
                residual=residual,
            )
        self.compatibility = CheckOutcome(True)

    # -- checks --------------------------------------------------------------------------

    def d_squared_check(self, degree_bound: int) -> CheckOutcome:
        """d(d(m)) = 0 for every normal monomial up to the bound and for the
        basis one-forms carrying those monomials."""
        witnesses = []
        for mono in self._monomials_upto(degree_bound):
            f = self.P.monomial(mono[1], self.P.ring.monomial(mono[0]))
            dd = self.differential(self.d0(f))
            if not dd.is_zero():
                witnesses.append(f"d^2 of {self.P.render(f)} = {self.render_form(dd)}")
            for i in range(self.N):
                form = self.form((i,), f)
                dd1 = self.differential(self.differential(form))
                if not dd1.is_zero():
                    witnesses.append(
                        f"d^2 of {self.render_form(form)} = {self.render_form(dd1)}"
                    )
        return CheckOutcome(not witnesses, witnesses[:5])

    def _monomials_upto(self, bound: int):
        P = self.P
        for beta in _expos(P.ring.nvars, bound):
            for alpha in _expos(P.n, bound - sum(beta)):
                yield (beta, alpha)

    def connectedness_check(self, degree_bound: int) -> CheckOutcome:
        """Exact kernel of d on the span of normal monomials up to the bound;
        connected means dimension one (the constants)."""
        basis = list(self._monomials_upto(degree_bound))
        index = {}
        rows = []
        nparams = self.P.ring.nparams
        zero = Scalar.const(nparams, 0)
        columns = []
        for mono in basis:
            f = self.P.monomial(mono[1], self.P.ring.monomial(mono[0]))
            columns.append(self.d0(f))
        for col, df in enumerate(columns):
            for S, f in df.components.items():
                i = S[0]
                for e, c in f.terms.items():
                    for tvec, s in c.terms.items():
                        key = (i, tvec, e)
                        if key not in index:
                            index[key] = len(rows)
                            rows.append([zero] * len(basis))
                        rows[index[key]][col] = rows[index[key]][col] + s
        kernel = kernel_basis(rows, len(basis), nparams)
        dim = len(kernel)
        witnesses = []
        for vec in kernel[:4]:
            terms = [
                (self.P.render(self.P.monomial(basis[c][1], self.P.ring.monomial(basis[c][0]))), v)
                for c, v in enumerate(vec)
                if not v.is_zero()
            ]
            witnesses.append(" + ".join(f"[{t}]" for t, _ in terms))
        return CheckOutcome(dim == 1, witnesses, {"kernel_dimension": dim, "bound": degree_bound})

    # -- volume -------------------------------------------------------------------------

    def omega(self) -> DiffForm:
        return self.form(tuple(range(self.N)), self.P.one())

    def pi_omega(self, form: DiffForm) -> SkewPoly:
        return form.components.get(tuple(range(self.N)), self.P.zero())

    def volume(self) -> VolumeData:
        """Compute the volume twist by pushing each symbol through the top
        form; verify it is an invertible relation-respecting map."""
        if self._volume is not None:
            return self._volume
        P = self.P
        full = tuple(range(self.N))
        cimgs = []
        gimgs = []
        for s in range(self.nsyms):
            img = self.twist_apply_set(full, self.sym_skew(s))
            if s < P.ring.nvars:
                cimgs.append(img)
            else:
                gimgs.append(img)
        inv_c = []
        inv_g = []
        for s in range(self.nsyms):
            img = self.twist_inv_apply_set(full, self.sym_skew(s))
            if s < P.ring.nvars:
                inv_c.append(img)
            else:
                inv_g.append(img)
        try:
            inverse = AlgebraEndo(P, inv_c, inv_g, check=False)
            nu = AlgebraEndo(P, cimgs, gimgs, inverse=inverse, check=True)
        except ValueError as exc:
            raise NotAVolumeFormError(f"volume twist rejected: {exc}") from exc
        for s in range(self.nsyms):
            a = self.sym_skew(s)
            lhs = self.left_multiply(a, self.omega())
            rhs = self.right_multiply(self.omega(), nu.apply(a))
            if lhs != rhs:
                raise NotAVolumeFormError(
                    f"{self.sym_name(s)} * omega != omega * nu({self.sym_name(s)})"
                )
        matches = None
        if self.spec.mode == THEOREM_MODE:
            comp = extend_sigma(P, 0)
            for i in range(1, P.n):
                comp = comp.compose(extend_sigma(P, i))
            matches = all(
                nu.apply(self.sym_skew(s)) == comp.apply(self.sym_skew(s))
                for s in range(self.nsyms)
            )
        self._volume = VolumeData(self.omega(), nu, matches)
        return self._volume

    # -- integrability ---------------------------------------------------------------------

    def _complement_form(self, S) -> DiffForm:
        """The signed complement with ``complement(S) ^ du_S = omega``."""
        comp = tuple(i for i in range(self.N) if i not in S)
        _, factor = self._basis_product(comp, tuple(S))
        return self.form(comp, self.P.const(factor.inverse()))

    def integrability_check(self, sample_count: int, degree_bound: int, rng) -> CheckOutcome:
        """The two expansion identities over the wedge generators: exactly on
        every basis form, and on sampled coefficient-carrying forms for the
        side involving left coefficients."""
        vol = self.volume()
        witnesses = []
        data = {}
        for k in range(1, self.N):
            gen_sets = list(combinations(range(self.N), k))
            comp_cache = {S: self._complement_form(S) for S in gen_sets}
            # identity on every basis form of degree k
            for S0 in gen_sets:
                target = self.form(S0, self.P.one())
                total = self.zero_form()
                for S in gen_sets:
                    coeff = self.pi_omega(self.wedge(comp_cache[S], target))
                    total = total + self.right_multiply(self.form(S, self.P.one()), coeff)
                if total != target:
                    witnesses.append(f"basis expansion fails for du{list(S0)}")
            # sampled identity with coefficients and the inverse volume twist
            big_sets = list(combinations(range(self.N), self.N - k))
            comp_of_big = {Q: self._complement_form(Q) for Q in big_sets}
            for _ in range(sample_count):
                S0 = gen_sets[rng.randrange(len(gen_sets))]
                f = random_skew(self.P, rng, degree_bound)
                target = self.form(S0, f)
                total = self.zero_form()
                for Q in big_sets:
                    a = vol.nu.inverse.apply(
                        self.pi_omega(self.wedge(target, self.form(Q, self.P.one())))
                    )
                    total = total + self.left_multiply(a, comp_of_big[Q])
                if total != target:
                    witnesses.append(
                        f"coefficient expansion fails for du{list(S0)} * ({self.P.render(f)})"
                    )
                    break
            data[f"k={k}"] = "checked"
        outcome = CheckOutcome(not witnesses, witnesses[:5], data)
        self.integrability_passed = outcome.ok
        return outcome

    # -- integral forms and divergences ---------------------------------------------------------

    def integral_basis(self, degree: int):
        return [self._dual_basis(S) for S in combinations(range(self.N), degree)]

    def _dual_basis(self, S) -> IntegralForm:
        return IntegralForm(len(S), {tuple(S): self.P.one()}, self.N)

    def evaluate(self, phi: IntegralForm, form: DiffForm) -> SkewPoly:
        out = self.P.zero()
        for S, f in form.components.items():
            if len(S) != phi.degree:
                raise ConfigError("form degree does not match the functional")
            v = phi.values.get(S)
            if v is not None:
                out = out + self.P.multiply(v, f)
        return out

    def dual_action(self, phi: IntegralForm, w: DiffForm) -> IntegralForm:
        """Right action of forms on functionals: ``(phi . w)(w') = phi(w ^ w')``."""
        if w.is_zero():
            return IntegralForm(phi.degree, {}, self.N)
        m = w.homogeneous_degree()
        if m is None or phi.degree < m:
            raise ConfigError("dual action needs deg(phi) >= deg(w)")
        values = {}
        for T in combinations(range(self.N), phi.degree - m):
            val = self.evaluate(phi, self.wedge(w, self.form(T, self.P.one())))
            if not val.is_zero():
                values[T] = val
        return IntegralForm(phi.degree - m, values, self.N)

    def theta(self, k: int, form: DiffForm) -> IntegralForm:
        """Transport a k-form to a functional of degree N-k; the alternating
        sign keeps the transported divergence an honest Leibniz map."""
        if form.is_zero():
            return IntegralForm(self.N - k, {}, self.N)
        phi = self.dual_action(self._pi_functional(), form)
        sign = -1 if ((self.N - 1) * k) % 2 else 1
        if sign == 1:
            return phi
        return IntegralForm(phi.degree, {S: -v for S, v in phi.values.items()}, self.N)

    def _pi_functional(self) -> IntegralForm:
        return IntegralForm(self.N, {tuple(range(self.N)): self.P.one()}, self.N)

    def theta_inv(self, k: int, phi: IntegralForm) -> DiffForm:
        """Explicit inverse of the transport on the wedge basis."""
        if phi.degree != self.N - k:
            raise ConfigError("functional degree does not match the transport")
        sign = -1 if ((self.N - 1) * k) % 2 else 1
        out = self.zero_form()
        for S in combinations(range(self.N), k):
            comp = tuple(i for i in range(self.N) if i not in S)
            v = phi.values.get(comp)
            if v is None:
                continue
            _, w = self._basis_product(tuple(S), comp)
            coeff = self.twist_inv_apply_set(comp, v.scale(w.inverse() * self.P.ring.scalar(sign)))
            out = out + self.form(S, coeff)
        return out

    def divergence_chain(self, k: int):
        """The map from functionals of degree N-k to degree N-k-1, computed
        by transporting d; needs the integrability certificate."""
        if not self.integrability_passed:
            raise ConfigError("divergence transport requested without an integrability certificate")
        def nabla(phi: IntegralForm) -> IntegralForm:
            return self.theta(k + 1, self.differential(self.theta_inv(k, phi)))
        return nabla

    def base_divergence(self):
        """The bottom map from degree-one functionals to the algebra."""
        nab = self.divergence_chain(self.N - 1)
        def to_algebra(phi: IntegralForm) -> SkewPoly:
            out = nab(phi)
            return out.values.get((), self.P.zero())
        return to_algebra

    def divergence_leibniz_check(self, samples: int, degree: int, rng) -> CheckOutcome:
        """The product rule of the bottom divergence on sampled pairs."""
        nabla = self.base_divergence()
        witnesses = []
        for _ in range(samples):
            values = {}
            for i in range(self.N):
                f = random_skew(self.P, rng, degree, max_terms=2)
                if not f.is_zero():
                    values[(i,)] = f
            phi = IntegralForm(1, values, self.N)
            a = random_skew(self.P, rng, degree, max_terms=2)
            lhs = nabla(self.dual_action(phi, self.embed(a)))
            rhs = self.P.multiply(nabla(phi), a) + self.evaluate(phi, self.d0(a))
            if lhs != rhs:
                witnesses.append(f"product rule fails at a = {self.P.render(a)}")
                break
        return CheckOutcome(not witnesses, witnesses)

    def flatness_check(self) -> CheckOutcome:
        """Curvature on the dual basis of the two-forms; vacuous below
        dimension two."""
        if self.N < 2:
            return CheckOutcome(True, [], {"vacuous": True})
        nabla1 = self.divergence_chain(self.N - 2)
        nabla0 = self.base_divergence()
        witnesses = []
        for phi in self.integral_basis(2):
            out = nabla0(nabla1(phi))
            if not out.is_zero():
                witnesses.append(f"curvature nonzero on du{list(next(iter(phi.values)))}")
        return CheckOutcome(not witnesses, witnesses)

    # -- rendering --------------------------------------------------------------------------

    def render_form(self, form: DiffForm) -> str:
        if form.is_zero():
            return "0"
        parts = []
        for S in sorted(form.components, key=lambda s: (len(s), s)):
            basis = "".join(f"d({self.spec.dgens[i].name})" for i in S) or "1"
            parts.append(f"{basis}*({self.P.render(form.components[S])})")
        return " + ".join(parts)


def _expos(nvars: int, max_total: int):
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
    yield from rec((), max_total, nvars)


def build_calculus(P: Presentation, spec: CalculusSpec) -> Calculus:
    """Validate the spec, solve the frame coordinates, and verify that the
    differential is compatible with every defining relation."""
    if spec.mode == THEOREM_MODE:
        rep = hypothesis_check(P)
        if not rep.theorem_ok:
            raise ConfigError(
                "plain-twist mode requires trivial pair relations and a fully "
                "commuting system: " + "; ".join(rep.failures)
            )
    for dg in spec.dgens:
        if dg.twist.inverse is None:
            raise ConfigError(f"twist for d({dg.name}) has no inverse")
    calc = Calculus(P, spec)
    calc._build_dcoords()
    if spec.mode == THEOREM_MODE:
        m = P.ring.nvars
        covered = {i for i, row in enumerate(calc._dcoords) if row is not None}
        if covered != set(range(m, m + P.n)):
            raise ConfigError("plain-twist mode differentiates exactly the generators")
    else:
        if any(row is None for row in calc._dcoords):
            raise ConfigError("every symbol needs a differential in flat mode")
    calc._check_compatibility()
    return calc


def theorem_spec(P: Presentation) -> CalculusSpec:
    """The plain-twist calculus: one differential per generator, twists the
    coefficientwise lifts, all wedge constants one."""
    dgens = [DGen(P.names[i], P.gen(i), extend_sigma(P, i)) for i in range(P.n)]
    for dg in dgens:
        if dg.twist.inverse is None:
            raise ConfigError(
                f"sigma of generator {dg.name} carries no inverse; plain-twist "
                "mode needs a bijective extension"
            )
    return CalculusSpec(dgens=dgens, wedge_signs={}, mode=THEOREM_MODE)
