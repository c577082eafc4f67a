"""Fusion rings with division-algebra data and exact Frobenius-Perron dimensions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Mapping, Sequence

import sympy

from .checks import PASS, CheckResult
from .groups import FiniteGroup

_X = sympy.Symbol("x")
_Y = sympy.Symbol("y")


class InconsistentDivisionData(ValueError):
    pass


class GaloisNontrivial(ValueError):
    pass


# --- exact real algebraic numbers ---------------------------------------------


def _to_sympy(coeffs: Sequence[Fraction]) -> sympy.Poly:
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)],
                      _X, domain="QQ")


def _from_sympy(p: sympy.Poly) -> tuple[Fraction, ...]:
    p = p.monic()
    return tuple(Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs()))


def _sign_at(coeffs, x: Fraction) -> int:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return (acc > 0) - (acc < 0)


@total_ordering
@dataclass(frozen=True, eq=False)
class AlgebraicReal:
    """A real root of an irreducible monic rational polynomial, pinned by an interval.

    The interval ``[lo, hi]`` contains exactly one real root of ``min_poly``;
    for rational values ``lo == hi``.
    """

    min_poly: tuple[Fraction, ...]
    isolating_interval: tuple[Fraction, Fraction]

    @classmethod
    def rational(cls, q) -> "AlgebraicReal":
        q = Fraction(q)
        return cls((-q, Fraction(1)), (q, q))

    @classmethod
    def roots_of(cls, poly: sympy.Poly) -> list["AlgebraicReal"]:
        """All real roots of a rational polynomial, ascending."""
        out = []
        _, factors = sympy.Poly(poly, _X, domain="QQ").factor_list()
        for f, _ in factors:
            mp = _from_sympy(f)
            if len(mp) == 2:
                out.append(cls.rational(-mp[0]))
                continue
            for (a, b), _ in f.intervals():
                out.append(cls(mp, (Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q)))))
        return sorted(out)

    @classmethod
    def largest_root(cls, poly: sympy.Poly) -> "AlgebraicReal":
        roots = cls.roots_of(poly)
        if not roots:
            raise ValueError("polynomial has no real roots")
        return roots[-1]

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("value is irrational")
        return -self.min_poly[0]

    def refined(self, width: Fraction = Fraction(1, 10 ** 6)) -> "AlgebraicReal":
        lo, hi = self.isolating_interval
        if self.is_rational:
            return self
        f = self.min_poly
        slo = _sign_at(f, lo)
        while hi - lo > width:
            mid = (lo + hi) / 2
            s = _sign_at(f, mid)
            if s == 0:
                return AlgebraicReal.rational(mid)
            if s == slo:
                lo = mid
            else:
                hi = mid
        return AlgebraicReal(f, (lo, hi))

    def _halve(self) -> "AlgebraicReal":
        lo, hi = self.isolating_interval
        return self.refined((hi - lo) / 2)

    def __float__(self):
        lo, hi = self.refined(Fraction(1, 10 ** 18)).isolating_interval
        return float((lo + hi) / 2)

    # -- arithmetic through resultants -----------------------------------------

    def _combine(self, other: "AlgebraicReal", op: str) -> "AlgebraicReal":
        if self.is_rational and other.is_rational:
            a, b = self.as_fraction(), other.as_fraction()
            return AlgebraicReal.rational(a + b if op == "+" else a * b)
        if op == "*" and (self == 0 or other == 0):
            return AlgebraicReal.rational(0)
        f = _to_sympy(self.min_poly).as_expr()
        g = _to_sympy(other.min_poly).as_expr().subs(_X, _Y)
        if op == "+":
            shifted = f.subs(_X, _X - _Y)
        else:
            d = self.degree
            shifted = sympy.expand(f.subs(_X, _X / _Y) * _Y ** d)
        res = sympy.Poly(sympy.resultant(shifted, g, _Y), _X, domain="QQ")
        _, factors = res.factor_list()
        cands = [f for f, _ in factors]
        a, b = self, other
        while True:
            (al, ah), (bl, bh) = a.isolating_interval, b.isolating_interval
            if op == "+":
                lo, hi = al + bl, ah + bh
            else:
                prods = [al * bl, al * bh, ah * bl, ah * bh]
                lo, hi = min(prods), max(prods)
            hits = [(f, f.count_roots(sympy.Rational(lo), sympy.Rational(hi))) for f in cands]
            hits = [(f, k) for f, k in hits if k]
            if len(hits) == 1 and hits[0][1] == 1:
                f = hits[0][0]
                mp = _from_sympy(f)
                if len(mp) == 2:
                    return AlgebraicReal.rational(-mp[0])
                # irreducible of degree >= 2: no rational root sits on an endpoint
                return AlgebraicReal(mp, (lo, hi))
            a, b = a._halve(), b._halve()

    def __add__(self, other):
        return self._combine(_as_alg(other), "+")

    __radd__ = __add__

    def __neg__(self):
        f = tuple(c * (-1) ** i for i, c in enumerate(self.min_poly))
        f = tuple(c / f[-1] for c in f)
        lo, hi = self.isolating_interval
        return AlgebraicReal(f, (-hi, -lo))

    def __sub__(self, other):
        return self + (-_as_alg(other))

    def __rsub__(self, other):
        return _as_alg(other) - self

    def __mul__(self, other):
        return self._combine(_as_alg(other), "*")

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicReal":
        if self.is_rational:
            q = self.as_fraction()
            if q == 0:
                raise ZeroDivisionError("inverse of zero")
            return AlgebraicReal.rational(1 / q)
        a = self
        while True:
            lo, hi = a.isolating_interval
            if lo > 0 or hi < 0:
                break
            a = a._halve()
        f = tuple(reversed(a.min_poly))
        f = tuple(c / f[-1] for c in f)
        lo, hi = a.isolating_interval
        return AlgebraicReal(f, (1 / hi, 1 / lo))

    def __truediv__(self, other):
        return self * _as_alg(other).inverse()

    def __rtruediv__(self, other):
        return _as_alg(other) * self.inverse()

    def __pow__(self, k: int):
        out = AlgebraicReal.rational(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgebraicReal.rational(other)
        if not isinstance(other, AlgebraicReal):
            return NotImplemented
        if self.min_poly != other.min_poly:
            return False
        if self.is_rational:
            return True
        lo = max(self.isolating_interval[0], other.isolating_interval[0])
        hi = min(self.isolating_interval[1], other.isolating_interval[1])
        if lo > hi:
            return False
        return _to_sympy(self.min_poly).count_roots(sympy.Rational(lo), sympy.Rational(hi)) == 1

    def __hash__(self):
        return hash(self.min_poly)

    def __lt__(self, other):
        other = _as_alg(other)
        if self == other:
            return False
        a, b = self, other
        while True:
            if a.isolating_interval[1] < b.isolating_interval[0]:
                return True
            if b.isolating_interval[1] < a.isolating_interval[0]:
                return False
            a, b = a._halve(), b._halve()

    def __str__(self):
        if self.is_rational:
            q = self.as_fraction()
            return str(q)
        p = _to_sympy(self.min_poly).as_expr()
        return f"root of {p} near {float(self):.6g}"

    def __repr__(self):
        return f"AlgebraicReal({self})"

    def to_json(self):
        if self.is_rational:
            return str(self.as_fraction())
        lo, hi = self.isolating_interval
        return {"min_poly": [str(c) for c in self.min_poly],
                "interval": [str(lo), str(hi)], "approx": float(self)}


def _as_alg(x) -> AlgebraicReal:
    if isinstance(x, AlgebraicReal):
        return x
    if isinstance(x, (int, Fraction)):
        return AlgebraicReal.rational(x)
    raise TypeError(f"cannot use {type(x).__name__} as an algebraic real")


# --- fusion rings --------------------------------------------------------------


@dataclass(frozen=True)
class EndData:
    """End(X) as a division algebra over the base: center of degree ``k``,
    ``n x n`` matrices after splitting, total dimension ``dim``."""

    k: int = 1
    n: int = 1
    dim: int = 1

    @property
    def consistent(self) -> bool:
        return self.k >= 1 and self.n >= 1 and self.dim == self.k * self.n * self.n


REAL = EndData(1, 1, 1)
COMPLEX = EndData(2, 1, 2)
QUATERNIONIC = EndData(1, 2, 4)


@dataclass(frozen=True, eq=False)
class FusionRing:
    basis_labels: tuple[str, ...]
    N: tuple
    unit_index: int = 0
    dual: tuple[int, ...] | None = None
    end_data: tuple[EndData, ...] | None = None
    galois_trivial: bool = True
    label: str = ""

    def __post_init__(self):
        r = len(self.basis_labels)
        object.__setattr__(self, "basis_labels", tuple(self.basis_labels))
        N = tuple(tuple(tuple(int(x) for x in row) for row in plane) for plane in self.N)
        if len(N) != r or any(len(p) != r or any(len(row) != r for row in p) for p in N):
            raise ValueError(f"fusion table must be {r}x{r}x{r}")
        if any(x < 0 for p in N for row in p for x in row):
            raise ValueError("fusion coefficients must be non-negative")
        object.__setattr__(self, "N", N)
        dual = tuple(range(r)) if self.dual is None else tuple(int(d) for d in self.dual)
        if sorted(dual) != list(range(r)) or any(dual[dual[i]] != i for i in range(r)):
            raise ValueError("dual must be an involution of the basis")
        object.__setattr__(self, "dual", dual)
        end = (REAL,) * r if self.end_data is None else tuple(
            e if isinstance(e, EndData) else EndData(*e) for e in self.end_data)
        if len(end) != r:
            raise ValueError("need one end_data record per basis element")
        object.__setattr__(self, "end_data", end)

    @property
    def rank(self) -> int:
        return len(self.basis_labels)

    def index(self, label) -> int:
        return label if isinstance(label, int) else self.basis_labels.index(label)

    def multiply(self, i, j) -> dict[str, int]:
        i, j = self.index(i), self.index(j)
        return {self.basis_labels[k]: m for k, m in enumerate(self.N[i][j]) if m}

    def left_matrix(self, i: int) -> list[list[int]]:
        """Matrix of x -> i * x on the basis (column j is i * j)."""
        r = self.rank
        return [[self.N[i][j][k] for j in range(r)] for k in range(r)]

    def product_str(self, i, j) -> str:
        terms = self.multiply(i, j)
        return " + ".join(f"{m}{lab}" if m > 1 else lab for lab, m in terms.items()) or "0"

    def to_json(self) -> dict:
        r, lab = self.rank, self.basis_labels
        return {
            "basis": list(lab),
            "N": {f"{lab[i]},{lab[j]}": {lab[k]: self.N[i][j][k] for k in range(r)
                                         if self.N[i][j][k]}
                  for i in range(r) for j in range(r)},
            "unit": lab[self.unit_index], "dual": [lab[d] for d in self.dual],
            "end": [{"k": e.k, "n": e.n, "dim": e.dim} for e in self.end_data],
            "galois_trivial": self.galois_trivial, "label": self.label,
        }


def ring_from_products(labels: Sequence[str], products: Mapping[tuple[str, str], Mapping[str, int]],
                       unit: str | None = None, dual: Mapping[str, str] | None = None,
                       end_data: Sequence | None = None, label: str = "",
                       galois_trivial: bool = True, commutative: bool = True) -> FusionRing:
    """Build a ring from products of non-unit labels; unit products are filled in."""
    labels = tuple(labels)
    r = len(labels)
    u = labels.index(unit) if unit is not None else 0
    idx = {lab: i for i, lab in enumerate(labels)}
    N = [[[0] * r for _ in range(r)] for _ in range(r)]
    for i in range(r):
        N[u][i][i] = 1
        N[i][u][i] = 1
    for (a, b), terms in products.items():
        for c, m in terms.items():
            N[idx[a]][idx[b]][idx[c]] = m
            if commutative:
                N[idx[b]][idx[a]][idx[c]] = m
    d = None if dual is None else tuple(idx[dual.get(lab, lab)] for lab in labels)
    return FusionRing(labels, N, u, d, end_data, galois_trivial, label)


def ring_from_spec(spec) -> FusionRing:
    labels = tuple(spec["basis"])
    r = len(labels)

    def ix(x):
        return labels.index(x) if isinstance(x, str) and x in labels else int(x)

    N = [[[0] * r for _ in range(r)] for _ in range(r)]
    for key, terms in spec["N"].items():
        a, b = (ix(s.strip()) for s in key.split(","))
        for c, m in terms.items():
            N[a][b][ix(c)] = int(m)
    end = spec.get("end")
    end_data = None if end is None else tuple(
        EndData(int(e.get("k", 1)), int(e.get("n", 1)), int(e.get("dim", 1))) for e in end)
    dual = spec.get("dual")
    return FusionRing(labels, N, ix(spec.get("unit", 0)),
                      None if dual is None else tuple(ix(d) for d in dual),
                      end_data, bool(spec.get("galois_trivial", True)), spec.get("label", ""))


def check_fusion_axioms(ring: FusionRing) -> CheckResult:
    """Unit, associativity and duality axioms, exhaustively.

    With division-algebra data the duality axiom reads
    ``N[i][dual(i)][unit] = dim End(i) / dim End(unit)``.
    """
    r, N, u = ring.rank, ring.N, ring.unit_index
    for j in range(r):
        for k in range(r):
            if N[u][j][k] != (j == k) or N[j][u][k] != (j == k):
                return CheckResult(False, ("unit", j, k), "unit axiom fails")
    for i, j, k, l in itertools.product(range(r), repeat=4):
        left = sum(N[i][j][m] * N[m][k][l] for m in range(r))
        right = sum(N[j][k][m] * N[i][m][l] for m in range(r))
        if left != right:
            return CheckResult(False, ("associativity", i, j, k, l), "associativity fails")
    unit_dim = ring.end_data[u].dim
    for i in range(r):
        for j in range(r):
            if j == ring.dual[i]:
                expected = Fraction(ring.end_data[i].dim, unit_dim)
            else:
                expected = 0
            if N[i][j][u] != expected:
                return CheckResult(False, ("duality", i, j), "duality fails")
    return PASS


_FP_CACHE: dict = {}


def fpdim_object(ring: FusionRing, i) -> AlgebraicReal:
    """Largest real eigenvalue of left multiplication by basis element ``i``."""
    i = ring.index(i)
    key = (ring.N, i)
    if key not in _FP_CACHE:
        M = sympy.Matrix(ring.left_matrix(i))
        poly = sympy.Poly(M.charpoly(_X).as_expr(), _X, domain="QQ")
        _FP_CACHE[key] = AlgebraicReal.largest_root(poly)
    return _FP_CACHE[key]


def fpdim_category(ring: FusionRing) -> AlgebraicReal:
    """Sum over basis elements of FPdim(X)^2 / dim End(X)."""
    if not ring.galois_trivial:
        raise GaloisNontrivial("FPdim is only normalized for Galois-trivial categories")
    total = AlgebraicReal.rational(0)
    for i in range(ring.rank):
        D = fpdim_object(ring, i)
        total = total + D * D / ring.end_data[i].dim
    return total


def base_change_split(end: EndData, D: AlgebraicReal) -> tuple[int, int, AlgebraicReal]:
    """After extending to a closed field: ``k`` distinct simples, each with
    multiplicity ``n`` and FPdim ``D / (n k)``."""
    if not end.consistent:
        raise InconsistentDivisionData(
            f"dim {end.dim} is not k*n^2 = {end.k}*{end.n}^2")
    return end.k, end.n, _as_alg(D) / (end.n * end.k)


def fpdim_center_square_check(ring: FusionRing, center: FusionRing) -> CheckResult:
    a = fpdim_category(ring)
    b = fpdim_category(center)
    if b == a * a:
        return PASS
    return CheckResult(False, (str(a), str(b)), "FPdim(center) != FPdim(ring)^2")


def fpdim_multiplicativity_check(ring: FusionRing) -> CheckResult:
    dims = [fpdim_object(ring, i) for i in range(ring.rank)]
    for i, j in itertools.product(range(ring.rank), repeat=2):
        right = AlgebraicReal.rational(0)
        for k in range(ring.rank):
            if ring.N[i][j][k]:
                right = right + dims[k] * ring.N[i][j][k]
        if dims[i] * dims[j] != right:
            return CheckResult(False, (i, j), "FPdim is not multiplicative")
    return PASS


# --- shipped rings ----------------------------------------------------------------


def group_ring(G: FiniteGroup) -> FusionRing:
    r = G.order
    N = [[[int(G.mul(i, j) == k) for k in range(r)] for j in range(r)] for i in range(r)]
    return FusionRing(G.element_labels, N, G.identity_index, G.inverses, None, True,
                      f"Z[{G.label}]")


def fibonacci_ring() -> FusionRing:
    return ring_from_products(("1", "tau"), {("tau", "tau"): {"1": 1, "tau": 1}},
                              label="Fibonacci")


def ising_ring() -> FusionRing:
    return ring_from_products(
        ("1", "psi", "sigma"),
        {("psi", "psi"): {"1": 1}, ("psi", "sigma"): {"sigma": 1},
         ("sigma", "sigma"): {"1": 1, "psi": 1}}, label="Ising")


def real_witt_ring() -> FusionRing:
    """The real fusion ring of the Z/2-equivariantization of Z(Vect(Z/2)):
    I real, K complex, H quaternionic."""
    return ring_from_products(
        ("I", "K", "H"),
        {("K", "K"): {"I": 2, "H": 1}, ("K", "H"): {"K": 2}, ("H", "H"): {"I": 4}},
        end_data=(REAL, COMPLEX, QUATERNIONIC), label="C")


def fusion_ring_from_pointed(cat) -> FusionRing:
    """The group ring underlying a pointed category."""
    return group_ring(cat.group)


def shipped_rings() -> list[FusionRing]:
    from .groups import abelian_group, cyclic_group

    return [group_ring(cyclic_group(1)), group_ring(cyclic_group(2)),
            group_ring(cyclic_group(3)), group_ring(abelian_group((2, 2))),
            group_ring(cyclic_group(9)),
            fibonacci_ring(), ising_ring(), real_witt_ring()]
