"""Exact arithmetic in number fields presented as Q[x]/(f).

A field is a single simple extension of Q; elements are coordinate vectors
in the power basis of the generator ``theta``.  Nothing in here lets a
floating-point number decide an equality: numeric embeddings only propose
candidates, which are then verified exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence, Union

import mpmath
import sympy

from . import polyq

Rational = Union[int, Fraction]


class DivisionByZero(ZeroDivisionError):
    pass


class ReconstructionInconclusive(ArithmeticError):
    """A numeric candidate could be neither certified nor refuted."""


class NotIrreducible(ValueError):
    pass


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def parse_rational(value) -> Fraction:
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


@dataclass(frozen=True, eq=False)
class NumberField:
    min_poly: tuple[Fraction, ...]
    label: str = ""
    cyclotomic_order: int | None = None
    # Skips the irreducibility search for polynomials known irreducible by
    # theory (cyclotomic polynomials, squarefree norms).
    trusted: bool = dc_field(default=False, repr=False)

    def __post_init__(self):
        f = polyq.to_fractions(self.min_poly)
        if len(f) < 2 or f[-1] != 1:
            raise ValueError("min_poly must be monic of degree >= 1")
        object.__setattr__(self, "min_poly", f)
        if self.cyclotomic_order is not None:
            if self.degree != euler_phi(self.cyclotomic_order):
                raise ValueError("cyclotomic field has the wrong degree")
        if not self.trusted:
            self._check_irreducible()
        if not self.label:
            object.__setattr__(self, "label", f"Q[x]/({poly_to_str(f)})")

    def _check_irreducible(self):
        f = self.min_poly
        d = self.degree
        if d == 1:
            return
        if d <= 3:
            if polyq.rational_roots(f):
                raise NotIrreducible(f"{poly_to_str(f)} has a rational root")
            return
        ints = polyq.integer_primitive(f)
        for p in polyq.first_primes(100):
            if polyq.irreducible_mod_p(ints, p):
                return
        raise NotIrreducible(
            f"no irreducibility certificate mod the first 100 primes for {poly_to_str(f)}"
        )

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        return f"NumberField({self.label})"

    # -- element constructors ----------------------------------------------

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            return self.element(value)
        return self.element([value])

    def element(self, coeffs: Sequence) -> "FieldElement":
        c = [parse_rational(x) for x in coeffs]
        if len(c) > self.degree:
            return FieldElement._reduce(self, tuple(c))
        c += [Fraction(0)] * (self.degree - len(c))
        return FieldElement(self, tuple(c))

    @cached_property
    def zero(self) -> "FieldElement":
        return self.element([0])

    @cached_property
    def one(self) -> "FieldElement":
        return self.element([1])

    @cached_property
    def gen(self) -> "FieldElement":
        return self.element([0, 1])

    def power_basis(self) -> list["FieldElement"]:
        return [self.element([0] * i + [1]) for i in range(self.degree)]

    def root_of_unity(self, order: int, power: int = 1) -> "FieldElement":
        """``zeta_order ** power`` for cyclotomic fields containing it."""
        n = self.cyclotomic_order
        if order in (1, 2) and (n is None or n % order):
            return self.one if power % order == 0 else -self.one
        if n is None or n % order:
            raise ValueError(f"{self.label} has no designated {order}-th root of unity")
        return self.gen ** ((n // order) * power % n)

    @cached_property
    def _sympy_poly(self):
        x = sympy.Symbol("x")
        return sympy.Poly([sympy.Rational(c.numerator, c.denominator)
                           for c in reversed(self.min_poly)], x, domain="QQ")


@dataclass(frozen=True, eq=False)
class FieldElement:
    field: NumberField
    coeffs: tuple[Fraction, ...]

    @staticmethod
    def _reduce(F: NumberField, poly: Sequence) -> "FieldElement":
        _, r = polyq.divmod_(polyq.to_fractions(poly), F.min_poly)
        r = list(r) + [Fraction(0)] * (F.degree - len(r))
        return FieldElement(F, tuple(r))

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.element([other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.field.degree == 1:
            return FieldElement(self.field, (self.coeffs[0] * o.coeffs[0],))
        return FieldElement._reduce(self.field, polyq.mul(polyq.trim(self.coeffs),
                                                          polyq.trim(o.coeffs)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * invert(o)

    def __rtruediv__(self, other):
        return invert(self) * other

    def __pow__(self, k: int):
        if k < 0:
            return invert(self) ** (-k)
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        return poly_to_str(self.coeffs, var="t")

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def evaluate_at(self, z):
        """Image under the embedding theta -> z (any numeric ring)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + mpmath.mpf(c.numerator) / c.denominator
        return acc

    def rational_matrix(self) -> list[list[Fraction]]:
        """Matrix of multiplication by self in the power basis (columns = images)."""
        cols = [(self * b).coeffs for b in self.field.power_basis()]
        d = self.field.degree
        return [[cols[j][i] for j in range(d)] for i in range(d)]


def poly_to_str(coeffs: Sequence, var: str = "x") -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mon = var if i == 1 else f"{var}^{i}"
            terms.append(mon if c == 1 else f"-{mon}" if c == -1 else f"{c}*{mon}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


def make_cyclotomic(n: int) -> NumberField:
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return NumberField((Fraction(-1), Fraction(1)), label="Q(zeta_1)",
                           cyclotomic_order=1, trusted=True)
    labels = {4: "Q(i)"}
    return NumberField(tuple(Fraction(c) for c in polyq.cyclotomic(n)),
                       label=labels.get(n, f"Q(zeta_{n})"), cyclotomic_order=n,
                       trusted=True)


def rationals() -> NumberField:
    return NumberField((Fraction(0), Fraction(1)), label="Q")


def invert(x: FieldElement) -> FieldElement:
    """Inverse via the extended Euclidean algorithm against min_poly."""
    if not x:
        raise DivisionByZero("inverse of zero")
    F = x.field
    a, b = polyq.trim(x.coeffs), F.min_poly
    # invariant: s*x == a (mod f)
    s0, s1 = (Fraction(1),), ()
    r0, r1 = a, b
    while r1:
        q, r = polyq.divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, polyq.sub(s0, polyq.mul(q, s1))
    # r0 is a nonzero constant because f is irreducible
    if len(r0) != 1:
        raise ArithmeticError("min_poly is not irreducible")
    return FieldElement._reduce(F, polyq.scale(s0, 1 / r0[0]))


# --- automorphisms -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FieldAutomorphism:
    field: NumberField
    image_of_generator: FieldElement

    def __post_init__(self):
        img = self.image_of_generator
        if img.field != self.field:
            raise ValueError("image lies in a different field")
        f = self.field.min_poly
        acc = self.field.zero
        for c in reversed(f):
            acc = acc * img + c
        if acc:
            raise ValueError("image of the generator is not a root of min_poly")

    def __call__(self, x: FieldElement) -> FieldElement:
        acc = self.field.zero
        for c in reversed(x.coeffs):
            acc = acc * self.image_of_generator + c
        return acc

    def compose(self, other: "FieldAutomorphism") -> "FieldAutomorphism":
        """``self o other``."""
        return FieldAutomorphism(self.field, self(other.image_of_generator))

    __matmul__ = compose

    def is_identity(self) -> bool:
        return self.image_of_generator == self.field.gen

    def order(self) -> int:
        k, g = 1, self
        while not g.is_identity():
            g = self.compose(g)
            k += 1
        return k

    def inverse(self) -> "FieldAutomorphism":
        g = self
        while not self.compose(g).is_identity():
            g = self.compose(g)
        return g

    def __eq__(self, other):
        return (isinstance(other, FieldAutomorphism) and self.field == other.field
                and self.image_of_generator == other.image_of_generator)

    def __hash__(self):
        return hash(self.image_of_generator)

    def __repr__(self):
        return f"FieldAutomorphism(t -> {self.image_of_generator})"


def identity_automorphism(F: NumberField) -> FieldAutomorphism:
    return FieldAutomorphism(F, F.gen)


def cyclotomic_automorphism(F: NumberField, k: int) -> FieldAutomorphism:
    n = F.cyclotomic_order
    if n is None or gcd(k, n) != 1:
        raise ValueError("zeta -> zeta^k needs a cyclotomic field and gcd(k, n) = 1")
    return FieldAutomorphism(F, F.gen ** (k % n) if n > 1 else F.gen)


def complex_conjugation(F: NumberField) -> FieldAutomorphism:
    """Restriction of complex conjugation (for fields closed under it)."""
    if F.cyclotomic_order is not None:
        return cyclotomic_automorphism(F, -1)
    emb = numeric_embeddings(F, 128)
    target = mpmath.conj(emb[0].value)
    for sigma in automorphisms(F):
        if abs(sigma.image_of_generator.evaluate_at(emb[0].value) - target) < mpmath.mpf(2) ** -60:
            return sigma
    raise ValueError(f"{F.label} is not stable under complex conjugation")


# --- numeric embeddings -------------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    value: mpmath.mpc
    is_real: bool
    # exact isolating interval for real roots
    interval: tuple[Fraction, Fraction] | None = None


def _real_root_intervals(F: NumberField, bits: int) -> list[tuple[Fraction, Fraction]]:
    P = F._sympy_poly
    eps = sympy.Rational(1, 2 ** bits)
    out = []
    for (a, b), _mult in P.intervals(eps=eps):
        out.append((Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))))
    return out


def numeric_embeddings(F: NumberField, precision: int = 128) -> list[Embedding]:
    """All complex roots of min_poly, real ones first, accurate to ``precision`` bits.

    Real roots come with exact rational isolating intervals; complex roots
    are listed in conjugate pairs (positive imaginary part first).
    """
    if precision < 32:
        raise ValueError("precision must be at least 32 bits")
    cache = _embedding_cache.get(F.min_poly)
    if cache and cache[0] >= precision:
        return cache[1]
    with mpmath.workprec(precision + 32):
        intervals = _real_root_intervals(F, precision + 8)
        out = []
        for a, b in intervals:
            mid = (a + b) / 2
            out.append(Embedding(mpmath.mpc(mpmath.mpf(mid.numerator) / mid.denominator),
                                 True, (a, b)))
        n_complex = F.degree - len(intervals)
        if n_complex:
            coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in reversed(F.min_poly)]
            roots = mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * precision)
            roots = sorted(roots, key=lambda z: -abs(mpmath.im(z)))[:n_complex]
            upper = sorted((z for z in roots if mpmath.im(z) > 0),
                           key=lambda z: (float(mpmath.re(z)), float(mpmath.im(z))))
            for z in upper:
                z = _newton_polish(F, mpmath.mpc(z), precision)
                out.append(Embedding(z, False))
                out.append(Embedding(mpmath.conj(z), False))
        if len(out) != F.degree:
            raise ArithmeticError("root finder lost track of the complex roots")
    _embedding_cache[F.min_poly] = (precision, out)
    return out


_embedding_cache: dict = {}


def _newton_polish(F: NumberField, z, precision: int):
    f = [mpmath.mpf(c.numerator) / c.denominator for c in F.min_poly]
    df = polyq.derivative(tuple(f))
    for _ in range(200):
        step = polyq.evaluate(f, z) / polyq.evaluate(df, z)
        z = z - step
        if abs(step) < mpmath.mpf(2) ** (-precision - 16):
            break
    return z


def _conjugate_index(emb: list[Embedding]) -> list[int]:
    idx = []
    for i, e in enumerate(emb):
        if e.is_real:
            idx.append(i)
        else:
            idx.append(i + 1 if mpmath.im(e.value) > 0 else i - 1)
    return idx


def _vandermonde_inverse(emb: list[Embedding]):
    d = len(emb)
    V = mpmath.matrix(d, d)
    for i, e in enumerate(emb):
        for j in range(d):
            V[i, j] = e.value ** j
    return V ** -1


def _rationalize(values, height_bound: int, tol) -> list[Fraction] | None:
    out = []
    for v in values:
        if abs(mpmath.im(v)) > tol:
            return None
        x = mpmath.re(v)
        q = Fraction(mpmath.nstr(x, 60, strip_zeros=False)).limit_denominator(height_bound)
        if abs(x - mpmath.mpf(q.numerator) / q.denominator) > tol:
            return None
        out.append(q)
    return out


def automorphisms(F: NumberField, height_bound: int = 10**6,
                  precision: int = 256) -> list[FieldAutomorphism]:
    """All automorphisms of F, identity first.

    For cyclotomic fields these are zeta -> zeta^k.  Otherwise an
    automorphism corresponds to a permutation of the complex embeddings that
    is fixed-point free (unless trivial) and commutes with complex
    conjugation; each admissible permutation is interpolated to a candidate
    image of the generator, which is accepted only after an exact root check.
    """
    if F.cyclotomic_order is not None:
        n = F.cyclotomic_order
        return [cyclotomic_automorphism(F, k) for k in range(1, max(n, 2)) if gcd(k, n) == 1]
    if F.degree == 1:
        return [identity_automorphism(F)]
    emb = numeric_embeddings(F, precision)
    conj = _conjugate_index(emb)
    d = F.degree
    with mpmath.workprec(precision):
        Vinv = _vandermonde_inverse(emb)
        tol = mpmath.mpf(2) ** (-precision // 2)
        found: dict[int, FieldAutomorphism] = {0: identity_automorphism(F)}
        unresolved: list[tuple[int, ...]] = []
        for perm in itertools.permutations(range(d)):
            if perm[0] in found or any(perm[i] == i for i in range(d)):
                continue
            if any(emb[i].is_real != emb[perm[i]].is_real for i in range(d)):
                continue
            if any(perm[conj[i]] != conj[perm[i]] for i in range(d)):
                continue
            target = mpmath.matrix([emb[perm[i]].value for i in range(d)])
            coeffs = _rationalize(list(Vinv * target), height_bound, tol)
            if coeffs is None:
                unresolved.append(perm)
                continue
            try:
                found[perm[0]] = FieldAutomorphism(F, F.element(coeffs))
            except ValueError:
                unresolved.append(perm)
        unresolved = [p for p in unresolved if p[0] not in found]
        if unresolved and len(found) < d:
            raise ReconstructionInconclusive(
                f"{len(unresolved)} embedding permutations of {F.label} could not be "
                f"certified or refuted at height bound {height_bound}"
            )
    return [found[k] for k in sorted(found)]


# --- square roots -------------------------------------------------------------


@dataclass(frozen=True)
class Root:
    value: FieldElement
    tag: str = "verified"


@dataclass(frozen=True)
class NoRoot:
    """Sound refutation: the element is negative in a real embedding."""

    embedding_index: int
    interval: tuple[Fraction, Fraction]
    value_bounds: tuple[Fraction, Fraction]
    tag: str = "sign_certificate"


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    tag: str = "inconclusive"


def interval_evaluate(x: FieldElement, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Exact rational enclosure of x(t) for t in [lo, hi]."""
    acc = (Fraction(0), Fraction(0))
    for c in reversed(x.coeffs):
        cands = [acc[0] * lo, acc[0] * hi, acc[1] * lo, acc[1] * hi]
        acc = (min(cands) + c, max(cands) + c)
    return acc


def _refine(F: NumberField, a: Fraction, b: Fraction) -> tuple[Fraction, Fraction]:
    f = F.min_poly
    fa = polyq.evaluate(f, a)
    m = (a + b) / 2
    fm = polyq.evaluate(f, m)
    if fm == 0:
        return m, m
    return (a, m) if (fa < 0) != (fm < 0) else (m, b)


def sign_certificate(x: FieldElement, max_refinements: int = 200) -> NoRoot | None:
    """Look for a real embedding in which x is certifiably negative."""
    F = x.field
    for idx, e in enumerate(numeric_embeddings(F, 64)):
        if not e.is_real:
            continue
        a, b = e.interval
        for _ in range(max_refinements):
            lo, hi = interval_evaluate(x, a, b)
            if hi < 0:
                return NoRoot(idx, (a, b), (lo, hi))
            if lo >= 0:
                break
            a, b = _refine(F, a, b)
    return None


def sqrt_in_field(d: FieldElement, height_bound: int = 10**6,
                  precision: int = 256) -> Root | NoRoot | Inconclusive:
    """Three-valued square root extraction.

    A ``Root`` has been squared exactly; a ``NoRoot`` carries a real
    embedding in which ``d`` is negative; anything else is ``Inconclusive``.
    """
    F = d.field
    if not d:
        return Root(F.zero)
    cert = sign_certificate(d)
    if cert is not None:
        return cert
    emb = numeric_embeddings(F, precision)
    conj = _conjugate_index(emb)
    with mpmath.workprec(precision):
        Vinv = _vandermonde_inverse(emb)
        tol = mpmath.mpf(2) ** (-precision // 2)
        roots = [mpmath.sqrt(d.evaluate_at(e.value)) for e in emb]
        # choose signs on real embeddings and on one member of each conjugate pair
        free = [i for i in range(len(emb)) if conj[i] >= i]
        for signs in itertools.product((1, -1), repeat=len(free) - 1):
            signs = (1,) + signs
            vals = [None] * len(emb)
            for s, i in zip(signs, free):
                vals[i] = s * roots[i]
                if conj[i] != i:
                    vals[conj[i]] = mpmath.conj(vals[i])
            coeffs = _rationalize(list(Vinv * mpmath.matrix(vals)), height_bound, tol)
            if coeffs is None:
                continue
            y = F.element(coeffs)
            if y * y == d:
                return Root(y)
    return Inconclusive(f"no verified square root with denominators <= {height_bound}")


def field_from_spec(spec) -> NumberField:
    """``{"cyclotomic": n}``, ``{"minpoly": [...]}`` or a short name like ``"Q(i)"``."""
    if isinstance(spec, str):
        named = {"Q": rationals(), "Q(i)": make_cyclotomic(4)}
        if spec in named:
            return named[spec]
        if spec.startswith("Q(zeta_") and spec.endswith(")"):
            return make_cyclotomic(int(spec[7:-1]))
        if spec == "Q(sqrt2)":
            return NumberField((Fraction(-2), Fraction(0), Fraction(1)), label="Q(sqrt2)")
        if spec in ("Q(cbrt2)", "Q(2^(1/3))"):
            return NumberField((Fraction(-2), Fraction(0), Fraction(0), Fraction(1)),
                               label="Q(cbrt2)")
        raise ValueError(f"unknown field name {spec!r}")
    if "cyclotomic" in spec:
        return make_cyclotomic(int(spec["cyclotomic"]))
    if "minpoly" in spec:
        return NumberField(tuple(parse_rational(c) for c in spec["minpoly"]),
                           label=spec.get("label", ""))
    raise ValueError("field spec needs 'cyclotomic' or 'minpoly'")


def field_to_spec(F: NumberField) -> dict:
    if F.cyclotomic_order is not None:
        return {"cyclotomic": F.cyclotomic_order}
    return {"minpoly": [str(c) for c in F.min_poly]}


def elements_from(F: NumberField, values: Iterable) -> list[FieldElement]:
    return [F.element(v if isinstance(v, (list, tuple)) else [v]) for v in values]
