"""Finitely generated abelian groups with a finite group action."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Mapping, Sequence

from ..groups import FiniteGroup, cyclic_group


class NotEquivariant(ValueError):
    pass


Matrix = tuple[tuple[int, ...], ...]


def _reduce_matrix(A, factors) -> Matrix:
    return tuple(
        tuple((int(x) % n) if n else int(x) for x in row) for row, n in zip(A, factors)
    )


def _matmul(A, B):
    k = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(cols)]
            for i in range(len(A))]


def _well_defined(A, src, tgt) -> bool:
    """Does the integer matrix A induce a map Z^r/src -> Z^s/tgt?"""
    for j, nj in enumerate(src):
        for i, ni in enumerate(tgt):
            image = A[i][j] * nj
            if ni == 0:
                if image != 0:
                    return False
            elif image % ni:
                return False
    return True


@dataclass(frozen=True, eq=False)
class GModule:
    """``Z^r / diag(invariant_factors)`` with ``g`` acting by ``action[g]`` on columns.

    A factor of 0 is a free summand Z.
    """

    group: FiniteGroup
    invariant_factors: tuple[int, ...]
    action: tuple[Matrix, ...]
    label: str = ""

    def __post_init__(self):
        factors = tuple(int(n) for n in self.invariant_factors)
        if any(n < 0 for n in factors):
            raise ValueError("invariant factors must be non-negative")
        object.__setattr__(self, "invariant_factors", factors)
        G, r = self.group, len(factors)
        action = self.action
        if isinstance(action, Mapping):
            action = [action.get(g, action.get(str(g))) for g in G.elements]
            if any(a is None for a in action):
                raise ValueError("action must be given for every group element")
        if len(action) != G.order:
            raise ValueError("need one action matrix per group element")
        mats = []
        for g, A in enumerate(action):
            if len(A) != r or any(len(row) != r for row in A):
                raise ValueError(f"action matrix of element {g} is not {r}x{r}")
            if not _well_defined(A, factors, factors):
                raise ValueError(f"action matrix of element {g} does not respect relations")
            mats.append(_reduce_matrix(A, factors))
        mats = tuple(mats)
        object.__setattr__(self, "action", mats)
        ident = _reduce_matrix([[int(i == j) for j in range(r)] for i in range(r)], factors)
        if mats[G.identity_index] != ident:
            raise ValueError("identity does not act trivially")
        for g in G.elements:
            for h in G.elements:
                if _reduce_matrix(_matmul(mats[g], mats[h]), factors) != mats[G.mul(g, h)]:
                    raise ValueError(f"action is not multiplicative at ({g}, {h})")
        if not self.label:
            object.__setattr__(self, "label", "+".join(
                f"Z/{n}" if n else "Z" for n in factors) or "0")

    def __repr__(self):
        return f"GModule({self.label} over {self.group.label})"

    def __eq__(self, other):
        return isinstance(other, GModule) and self.group == other.group \
            and self.invariant_factors == other.invariant_factors \
            and self.action == other.action

    def __hash__(self):
        return hash((self.group, self.invariant_factors, self.action))

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def is_finite(self) -> bool:
        return all(n > 0 for n in self.invariant_factors)

    def reduce(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple((int(v) % n) if n else int(v) for v, n in zip(x, self.invariant_factors))

    def act(self, g: int, x: Sequence[int]) -> tuple[int, ...]:
        A = self.action[g]
        return self.reduce(sum(A[i][j] * x[j] for j in range(self.rank))
                           for i in range(self.rank))

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def pullback(self, group: FiniteGroup, images: Sequence[int]) -> "GModule":
        """The module restricted along a homomorphism ``group -> self.group``."""
        return GModule(group, self.invariant_factors,
                       tuple(self.action[images[g]] for g in group.elements),
                       self.label)


@dataclass(frozen=True, eq=False)
class ModuleMap:
    """A homomorphism of abelian groups given by an integer matrix on generators."""

    source: GModule
    target: GModule
    matrix: Matrix

    def __post_init__(self):
        A = self.matrix
        s, t = self.source.rank, self.target.rank
        if len(A) != t or any(len(row) != s for row in A):
            raise ValueError(f"map matrix must be {t}x{s}")
        if not _well_defined(A, self.source.invariant_factors, self.target.invariant_factors):
            raise ValueError("matrix does not respect the relations")
        object.__setattr__(self, "matrix", _reduce_matrix(A, self.target.invariant_factors))

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        A = self.matrix
        return self.target.reduce(sum(A[i][j] * x[j] for j in range(self.source.rank))
                                  for i in range(self.target.rank))

    def check_equivariant(self) -> None:
        if self.source.group != self.target.group:
            raise NotEquivariant("source and target live over different groups")
        f = self.target.invariant_factors
        for g in self.source.group.elements:
            left = _reduce_matrix(_matmul(self.matrix, self.source.action[g]), f)
            right = _reduce_matrix(_matmul(self.target.action[g], self.matrix), f)
            if left != right:
                raise NotEquivariant(f"map does not commute with element {g}")

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self`` after ``other``."""
        return ModuleMap(other.source, self.target, _matmul(self.matrix, other.matrix))


def trivial_module(group: FiniteGroup, factors: Sequence[int]) -> GModule:
    r = len(factors)
    ident = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
    return GModule(group, tuple(factors), (ident,) * group.order)


def cyclic_module(group: FiniteGroup | int, order: int, multiplier: int,
                  label: str = "") -> GModule:
    """Z/order (or Z when order is 0) with the generator of a cyclic group acting by ``multiplier``."""
    if isinstance(group, int):
        group = cyclic_group(group)
    if group.abelian_factors is None or len(group.abelian_factors) != 1:
        raise ValueError("cyclic_module needs a cyclic group with its standard generator")
    m = group.order
    mats = []
    for k in range(m):
        a = multiplier ** k
        mats.append(((a % order if order else a,),))
    return GModule(group, (order,), tuple(mats), label)


def roots_of_unity(order: int, group: FiniteGroup | int = 2) -> GModule:
    """mu_order written additively, the generator of an even-order cyclic group acting by inversion."""
    G = cyclic_group(group) if isinstance(group, int) else group
    if G.order % 2:
        raise ValueError("inversion needs a cyclic group of even order")
    return cyclic_module(G, order, -1, f"mu{order}")


def doubling_map(source: GModule, target: GModule) -> ModuleMap:
    """The inclusion mu_n -> mu_{kn} (multiplication by k on a cyclic module)."""
    (n,), (N,) = source.invariant_factors, target.invariant_factors
    if n == 0 or N % n:
        raise ValueError("target order must be a multiple of the source order")
    return ModuleMap(source, target, ((N // n,),))


def order_dividing_multipliers(m: int, order: int) -> list[int]:
    """Units u mod order with u^m = 1: all actions of C_m on Z/order."""
    if order == 1:
        return [0]
    return [u for u in range(order) if gcd(u, order) == 1 and pow(u, m, order) == 1]


def module_from_spec(group: FiniteGroup, spec) -> GModule:
    factors = [int(n) for n in spec["factors"]]
    raw = spec.get("action", {})
    r = len(factors)
    ident = [[int(i == j) for j in range(r)] for i in range(r)]
    if isinstance(raw, list):
        action = raw
    else:
        given = {int(k): v for k, v in raw.items()}
        if set(given) <= {1} and group.abelian_factors is not None \
                and len(group.abelian_factors) == 1 and 1 in given:
            # generator only: extend by powers
            action, M = [], ident
            for _ in group.elements:
                action.append(M)
                M = _matmul(given[1], M)
        else:
            action = [given.get(g, ident if g == group.identity_index else None)
                      for g in group.elements]
            if any(a is None for a in action):
                raise ValueError("action must list every non-identity element "
                                 "(or only the generator of a cyclic group)")
    return GModule(group, factors, action, spec.get("label", ""))


def module_to_spec(M: GModule) -> dict:
    return {"factors": list(M.invariant_factors),
            "action": {str(g): [list(r) for r in A] for g, A in enumerate(M.action)},
            "label": M.label}
