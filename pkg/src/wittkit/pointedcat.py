"""Pointed braided fusion categories given by scalar tables.

Simple objects are the elements of a finite abelian group A; the
associator is a 3-cochain omega and the braiding a 2-cochain c, both
with values in the nonzero elements of a number field.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping, Sequence

from .checks import PASS, CheckResult
from .groups import FiniteGroup, abelian_group, group_from_spec, group_to_spec
from .numfield import FieldElement, NumberField, field_from_spec, field_to_spec

MAX_ORDER = 64


class InsufficientRoots(ValueError):
    pass


class DegenerateInput(ValueError):
    pass


def _table(values, size: int, arity: int, F: NumberField, name: str):
    """Dense tuple of field elements from a mapping, callable or sequence (default 1)."""
    n = size
    total = n ** arity
    if values is None:
        return (F.one,) * total
    if callable(values) and not isinstance(values, Mapping):
        out = [F(values(*key)) for key in itertools.product(range(n), repeat=arity)]
    elif isinstance(values, Mapping):
        out = [F.one] * total
        for key, v in values.items():
            if isinstance(key, str):
                key = tuple(int(s) for s in key.split(","))
            if len(key) != arity or any(not 0 <= k < n for k in key):
                raise ValueError(f"bad {name} key {key!r}")
            idx = 0
            for k in key:
                idx = idx * n + k
            out[idx] = F(v)
    else:
        out = [F(v) for v in values]
        if len(out) != total:
            raise ValueError(f"{name} table needs {total} entries")
    if any(not x for x in out):
        raise ValueError(f"{name} values must be nonzero")
    return tuple(out)


@dataclass(frozen=True, eq=False)
class PointedBraidedCategory:
    group: FiniteGroup
    field: NumberField
    associator: tuple = None
    braiding: tuple | None = None
    label: str = ""
    braided: bool = field(default=True, repr=False)

    def __post_init__(self):
        G, F = self.group, self.field
        if G.order > MAX_ORDER:
            raise ValueError(f"groups are capped at order {MAX_ORDER}")
        object.__setattr__(self, "associator", _table(self.associator, G.order, 3, F, "associator"))
        if self.braiding is None and not self.braided:
            object.__setattr__(self, "braiding", None)
        else:
            if not G.is_abelian:
                raise ValueError("braided data needs an abelian group")
            object.__setattr__(self, "braiding", _table(self.braiding, G.order, 2, F, "braiding"))
        if not self.label:
            object.__setattr__(self, "label", f"Vect({G.label})")

    def omega(self, g: int, h: int, k: int) -> FieldElement:
        n = self.group.order
        return self.associator[(g * n + h) * n + k]

    def c(self, g: int, h: int) -> FieldElement:
        if self.braiding is None:
            raise ValueError("category carries no braiding")
        return self.braiding[g * self.group.order + h]

    def double_braiding(self, g: int, h: int) -> FieldElement:
        return self.c(g, h) * self.c(h, g)

    @property
    def simple_labels(self) -> tuple[str, ...]:
        return self.group.element_labels

    @cached_property
    def subgroups(self) -> tuple["Subgroup", ...]:
        return tuple(Subgroup(self.group, tuple(sorted(s))) for s in self.group.subgroups)

    def to_json(self) -> dict:
        n = self.group.order
        out = {"group": group_to_spec(self.group), "field": field_to_spec(self.field),
               "label": self.label}
        out["associator"] = {
            ",".join(map(str, key)): self.omega(*key).to_json()
            for key in itertools.product(range(n), repeat=3) if self.omega(*key) != 1}
        if self.braiding is not None:
            out["braiding"] = {
                ",".join(map(str, key)): self.c(*key).to_json()
                for key in itertools.product(range(n), repeat=2) if self.c(*key) != 1}
        return out


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    element_indices: tuple[int, ...]

    def __post_init__(self):
        elems = tuple(sorted(set(int(g) for g in self.element_indices)))
        object.__setattr__(self, "element_indices", elems)
        G = self.parent
        s = set(elems)
        if G.identity_index not in s:
            raise ValueError("subgroup must contain the identity")
        for a in elems:
            if G.inv(a) not in s:
                raise ValueError("subgroup is not closed under inverses")
            for b in elems:
                if G.mul(a, b) not in s:
                    raise ValueError("subgroup is not closed under multiplication")

    def __len__(self):
        return len(self.element_indices)

    def __contains__(self, g):
        return g in self.element_indices

    def __le__(self, other: "Subgroup") -> bool:
        return set(self.element_indices) <= set(other.element_indices)

    @property
    def is_trivial(self) -> bool:
        return len(self.element_indices) == 1

    def labels(self) -> list[str]:
        return [self.parent.element_labels[g] for g in self.element_indices]

    def __str__(self):
        return "{" + ", ".join(self.labels()) + "}"


def check_pentagon(cat: PointedBraidedCategory) -> CheckResult:
    """The 3-cocycle condition on the associator, over all quadruples."""
    G = cat.group
    w = cat.omega
    for g, h, k, l in itertools.product(G.elements, repeat=4):
        left = w(h, k, l) * w(g, G.mul(h, k), l) * w(g, h, k)
        right = w(G.mul(g, h), k, l) * w(g, h, G.mul(k, l))
        if left != right:
            return CheckResult(False, (g, h, k, l), "pentagon fails")
    return PASS


def check_hexagons(cat: PointedBraidedCategory) -> CheckResult:
    """Both hexagon identities for the braiding relative to the associator."""
    G = cat.group
    if not G.is_abelian:
        return CheckResult(False, None, "group is not abelian")
    w, c = cat.omega, cat.c
    for g, h, k in itertools.product(G.elements, repeat=3):
        left = w(h, k, g) * c(g, G.mul(h, k)) * w(g, h, k)
        right = c(g, k) * w(h, g, k) * c(g, h)
        if left != right:
            return CheckResult(False, (g, h, k), "first hexagon fails")
        left = c(G.mul(g, h), k) * w(g, k, h)
        right = c(g, k) * c(h, k) * w(g, h, k) * w(k, g, h)
        if left != right:
            return CheckResult(False, (g, h, k), "second hexagon fails")
    return PASS


def _character_value(F: NumberField, factors: Sequence[int], chi: Sequence[int],
                     g: Sequence[int]) -> FieldElement:
    out = F.one
    for n, a, b in zip(factors, chi, g):
        if (a * b) % n:
            out = out * F.root_of_unity(n, a * b)
    return out


def drinfeld_center_pointed(A: FiniteGroup, field: NumberField,
                            pairing: Callable[[int, int], FieldElement] | None = None,
                            labels: Sequence[str] | None = None) -> PointedBraidedCategory:
    """Z(Vect(A)) with trivial associator, realized on A x A.

    An element ``(g, chi)`` has index ``g + |A| * chi``; the braiding is
    ``c((g, chi), (h, psi)) = chi(h)``.  The default pairing uses the
    cyclic-factor coordinates of ``A``.
    """
    if not A.is_abelian:
        raise ValueError("the group must be abelian")
    factors = A.abelian_factors
    if pairing is None:
        if factors is None:
            raise ValueError("need cyclic-factor coordinates or an explicit pairing")
        e = A.exponent
        if e > 1 and (field.cyclotomic_order is None or field.cyclotomic_order % e):
            raise InsufficientRoots(
                f"{field.label} lacks the {e}-th roots of unity needed for characters of {A.label}")

        def pairing(chi: int, h: int) -> FieldElement:
            return _character_value(field, factors, A.coords(chi), A.coords(h))
    n = A.order
    if factors is not None:
        Z = abelian_group(tuple(factors) * 2, labels=labels, label=f"Z(Vect({A.label}))")
        # index of (g, chi) in mixed radix equals g + n * chi
    else:
        from .groups import direct_product
        Z = direct_product(A, A)
    if labels is None and n == 2:
        Z = FiniteGroup(Z.order, Z.mul_table, 0, Z.label, ("I", "E", "M", "EM"),
                        Z.abelian_factors)
    table = {}
    for x in range(n * n):
        chi = x // n
        for y in range(n * n):
            h = y % n
            table[(x, y)] = pairing(chi, h)
    cat = PointedBraidedCategory(Z, field, None, table, f"Z(Vect_{field.label}({A.label}))")
    return cat


def muger_center(cat: PointedBraidedCategory) -> Subgroup:
    return centralizer(cat, Subgroup(cat.group, tuple(cat.group.elements)))


def is_nondegenerate(cat: PointedBraidedCategory) -> bool:
    return muger_center(cat).is_trivial


def centralizer(cat: PointedBraidedCategory, H: Subgroup) -> Subgroup:
    """Objects whose double braiding with every element of H is trivial."""
    G = cat.group
    return Subgroup(G, tuple(g for g in G.elements
                             if all(cat.double_braiding(g, h) == 1 for h in H.element_indices)))


def double_centralizer_check(cat: PointedBraidedCategory) -> CheckResult:
    if not is_nondegenerate(cat):
        raise DegenerateInput("the braiding is degenerate")
    for H in cat.subgroups:
        if centralizer(cat, centralizer(cat, H)) != H:
            return CheckResult(False, H.element_indices, "double centralizer differs")
    return PASS


def centralizer_order_check(cat: PointedBraidedCategory) -> CheckResult:
    """|H| * |centralizer(H)| = |A| for every subgroup of a non-degenerate category."""
    for H in cat.subgroups:
        if len(H) * len(centralizer(cat, H)) != cat.group.order:
            return CheckResult(False, H.element_indices, "order product differs from |A|")
    return PASS


def category_from_spec(spec) -> PointedBraidedCategory:
    G = group_from_spec(spec["group"])
    F = field_from_spec(spec.get("field", "Q"))
    return PointedBraidedCategory(G, F, spec.get("associator"), spec.get("braiding"),
                                  spec.get("label", ""), braided="braiding" in spec)

