"""Finite groups given by multiplication tables."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import lcm, prod
from typing import Sequence


class NotHomomorphism(ValueError):
    pass


MAX_CHECKED_ORDER = 64


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    mul_table: tuple[tuple[int, ...], ...]
    identity_index: int = 0
    label: str = ""
    element_labels: tuple[str, ...] = ()
    # orders of cyclic factors when elements are mixed-radix tuples
    # (first coordinate varies fastest)
    abelian_factors: tuple[int, ...] | None = None

    def __post_init__(self):
        n = self.order
        table = tuple(tuple(int(x) for x in row) for row in self.mul_table)
        object.__setattr__(self, "mul_table", table)
        if len(table) != n or any(len(row) != n for row in table):
            raise ValueError("multiplication table must be order x order")
        if any(not 0 <= x < n for row in table for x in row):
            raise ValueError("table entries out of range")
        e = self.identity_index
        if any(table[e][g] != g or table[g][e] != g for g in range(n)):
            raise ValueError("identity_index is not a two-sided identity")
        for g in range(n):
            if e not in table[g] or all(table[h][g] != e for h in range(n)):
                raise ValueError(f"element {g} has no two-sided inverse")
        if n <= MAX_CHECKED_ORDER:
            for a in range(n):
                for b in range(n):
                    ab = table[a][b]
                    for c in range(n):
                        if table[ab][c] != table[a][table[b][c]]:
                            raise ValueError(f"table is not associative at {(a, b, c)}")
        if not self.element_labels:
            object.__setattr__(self, "element_labels", tuple(str(g) for g in range(n)))
        if not self.label:
            object.__setattr__(self, "label", f"G{n}")

    def __repr__(self):
        return f"FiniteGroup({self.label})"

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.mul_table == other.mul_table \
            and self.identity_index == other.identity_index

    def __hash__(self):
        return hash((self.order, self.mul_table))

    def __len__(self):
        return self.order

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        e = self.identity_index
        return tuple(self.mul_table[g].index(e) for g in range(self.order))

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = self.identity_index
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity_index:
            x = self.mul(x, a)
            k += 1
        return k

    @cached_property
    def exponent(self) -> int:
        return lcm(*(self.element_order(g) for g in range(self.order)))

    @cached_property
    def is_abelian(self) -> bool:
        t = self.mul_table
        return all(t[a][b] == t[b][a] for a in range(self.order) for b in range(a))

    @property
    def elements(self) -> range:
        return range(self.order)

    @cached_property
    def non_identity(self) -> tuple[int, ...]:
        return tuple(g for g in range(self.order) if g != self.identity_index)

    def generated(self, gens: Sequence[int]) -> frozenset[int]:
        seen = {self.identity_index}
        frontier = [self.identity_index]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return frozenset(seen)

    @cached_property
    def subgroups(self) -> tuple[frozenset[int], ...]:
        """All subgroups, sorted by size then lexicographically."""
        cyclic = {self.generated([g]) for g in range(self.order)}
        subs = set(cyclic)
        frontier = list(cyclic)
        while frontier:
            H = frontier.pop()
            for C in cyclic:
                if not C <= H:
                    K = self.generated(sorted(H | C))
                    if K not in subs:
                        subs.add(K)
                        frontier.append(K)
        return tuple(sorted(subs, key=lambda s: (len(s), sorted(s))))

    # coordinates for groups built from cyclic factors
    def coords(self, g: int) -> tuple[int, ...]:
        if self.abelian_factors is None:
            raise ValueError(f"{self.label} has no cyclic-factor coordinates")
        out = []
        for n in self.abelian_factors:
            out.append(g % n)
            g //= n
        return tuple(out)

    def from_coords(self, c: Sequence[int]) -> int:
        if self.abelian_factors is None:
            raise ValueError(f"{self.label} has no cyclic-factor coordinates")
        idx, stride = 0, 1
        for x, n in zip(c, self.abelian_factors):
            idx += (x % n) * stride
            stride *= n
        return idx


def cyclic_group(m: int, label: str | None = None) -> FiniteGroup:
    """C_m with element k standing for sigma^k."""
    if m < 1:
        raise ValueError("order must be positive")
    table = tuple(tuple((a + b) % m for b in range(m)) for a in range(m))
    return FiniteGroup(m, table, 0, label or f"C{m}",
                       tuple(f"s^{k}" if k > 1 else ("s" if k else "e") for k in range(m)),
                       (m,))


def abelian_group(orders: Sequence[int], labels: Sequence[str] | None = None,
                  label: str | None = None) -> FiniteGroup:
    """Direct product of cyclic groups; element index is mixed radix, first factor fastest."""
    orders = tuple(int(n) for n in orders)
    n = prod(orders)
    elems = [tuple(c) for c in _mixed_radix(orders)]
    index = {c: i for i, c in enumerate(elems)}
    table = tuple(
        tuple(index[tuple((x + y) % k for x, y, k in zip(a, b, orders))] for b in elems)
        for a in elems
    )
    if labels is None:
        labels = tuple(",".join(map(str, c)) for c in elems)
    name = label or "x".join(f"Z{k}" for k in orders) or "trivial"
    return FiniteGroup(n, table, 0, name, tuple(labels), orders)


def _mixed_radix(orders):
    for c in itertools.product(*(range(k) for k in reversed(orders))):
        yield tuple(reversed(c))


def trivial_group() -> FiniteGroup:
    return FiniteGroup(1, ((0,),), 0, "trivial", ("e",), ())


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Element (g, h) has index g + |G| h."""
    n, m = G.order, H.order
    table = tuple(
        tuple(G.mul(a % n, b % n) + n * H.mul(a // n, b // n) for b in range(n * m))
        for a in range(n * m)
    )
    labels = tuple(f"({G.element_labels[a % n]},{H.element_labels[a // n]})"
                   for a in range(n * m))
    factors = None
    if G.abelian_factors is not None and H.abelian_factors is not None:
        factors = G.abelian_factors + H.abelian_factors
    return FiniteGroup(n * m, table, G.identity_index + n * H.identity_index,
                       f"{G.label}x{H.label}", labels, factors)


def check_homomorphism(source: FiniteGroup, target: FiniteGroup, images: Sequence[int],
                       surjective: bool = False) -> None:
    if len(images) != source.order:
        raise NotHomomorphism("image list has the wrong length")
    for a in range(source.order):
        for b in range(source.order):
            if images[source.mul(a, b)] != target.mul(images[a], images[b]):
                raise NotHomomorphism(f"p({a}*{b}) != p({a})*p({b})")
    if surjective and set(images) != set(range(target.order)):
        raise NotHomomorphism("map is not surjective")


def group_from_spec(spec) -> FiniteGroup:
    if isinstance(spec, str):
        if spec.upper().startswith("C") and spec[1:].isdigit():
            return cyclic_group(int(spec[1:]))
        raise ValueError(f"unknown group name {spec!r}")
    if "cyclic" in spec:
        return cyclic_group(int(spec["cyclic"]))
    if "abelian" in spec:
        return abelian_group(spec["abelian"])
    if "table" in spec:
        table = spec["table"]
        return FiniteGroup(len(table), table, int(spec.get("identity", 0)),
                           spec.get("label", ""))
    raise ValueError("group spec needs 'cyclic', 'abelian' or 'table'")


def group_to_spec(G: FiniteGroup) -> dict:
    if G.abelian_factors is not None and len(G.abelian_factors) == 1:
        return {"cyclic": G.abelian_factors[0]}
    if G.abelian_factors is not None:
        return {"abelian": list(G.abelian_factors)}
    return {"table": [list(r) for r in G.mul_table], "identity": G.identity_index}
