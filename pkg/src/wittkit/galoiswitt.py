"""Galois-extension bookkeeping: K (x)_k K, the Gamma x Gamma action formula,
Galois-grading skeletons, and H^4 Witt-family classes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, Sequence

import sympy

from . import qlinalg
from .checks import PASS, CheckResult
from .groupcoh import (
    CochainClass,
    GModule,
    ModuleMap,
    ShapeMismatch,
    add_classes,
    bar_cohomology,
    inflate_coefficients,
    inflate_group,
    is_coboundary,
)
from .groupcoh.bar import DEFAULT_WORK_BUDGET
from .groups import FiniteGroup
from .numfield import (
    FieldAutomorphism,
    FieldElement,
    Inconclusive,
    NoRoot,
    NumberField,
    Root,
    automorphisms,
    sqrt_in_field,
)


class UnfactoredRemainder(ArithmeticError):
    def __init__(self, degree: int):
        super().__init__(f"cannot factor a remainder of degree {degree}")
        self.degree = degree


class DecompositionInconclusive(ArithmeticError):
    def __init__(self, result: Inconclusive):
        super().__init__(result.reason)
        self.result = result


# --- K (x)_k K ------------------------------------------------------------------

KPoly = tuple  # coefficients in K, lowest degree first


def _kpoly_mul(f: KPoly, g: KPoly, K: NumberField) -> KPoly:
    out = [K.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return tuple(out)


def _kpoly_divmod(f: KPoly, g: KPoly, K: NumberField) -> tuple[KPoly, KPoly]:
    r = list(f)
    dg = len(g) - 1
    lead = g[-1]
    q = [K.zero] * max(len(f) - dg, 1)
    while len(r) - 1 >= dg and any(r):
        k = len(r) - 1 - dg
        c = r[-1] / lead
        q[k] = c
        for i, b in enumerate(g):
            r[i + k] = r[i + k] - c * b
        r.pop()
    while r and not r[-1]:
        r.pop()
    return tuple(q), tuple(r)


def kpoly_str(f: KPoly) -> str:
    terms = []
    for i in range(len(f) - 1, -1, -1):
        c = f[i]
        if not c:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        cs = str(c)
        if mono and cs == "1":
            terms.append(mono)
        elif mono:
            terms.append(f"({cs})*{mono}")
        else:
            terms.append(f"({cs})")
    return " + ".join(terms) or "0"


@dataclass(frozen=True, eq=False)
class Component:
    field: NumberField
    degree_over_K: int
    factor_poly: KPoly
    # for linear factors x - s(theta): the automorphism s giving K[x]/(x - s(theta)) = K
    automorphism: FieldAutomorphism | None = None
    certificate: object = None

    def describe(self) -> str:
        return f"K[x]/({kpoly_str(self.factor_poly)})"


@dataclass(frozen=True, eq=False)
class TensorDecomposition:
    base: NumberField
    extension: NumberField
    components: tuple[Component, ...]
    galois_group: tuple[FieldAutomorphism, ...] | None = None

    def __post_init__(self):
        K = self.extension
        prod = (K.one,)
        for c in self.components:
            prod = _kpoly_mul(prod, c.factor_poly, K)
        target = self.min_poly_over_K()
        if len(prod) != len(target) or any(a != b for a, b in zip(prod, target)):
            raise ArithmeticError("factors do not multiply to the minimal polynomial")
        units = [c for c in self.components
                 if c.degree_over_K == 1 and c.factor_poly[0] == -K.gen]
        if len(units) != 1:
            raise ArithmeticError("expected exactly one unit component x - theta")

    def min_poly_over_K(self) -> KPoly:
        K = self.extension
        if self.base == K:
            return (-K.gen, K.one)
        return tuple(K(c) for c in K.min_poly)

    @property
    def degrees(self) -> list[int]:
        return [c.degree_over_K for c in self.components]

    @property
    def is_galois(self) -> bool:
        return self.galois_group is not None


def _flatten_quadratic(K: NumberField, g: KPoly) -> NumberField:
    """Absolute field K[x]/(g) for an irreducible quadratic g, via a norm resultant."""
    x, t = sympy.symbols("x t")
    f = sum(sympy.Rational(c.numerator, c.denominator) * t ** i for i, c in enumerate(K.min_poly))

    def as_expr(el: FieldElement):
        return sum(sympy.Rational(c.numerator, c.denominator) * t ** i
                   for i, c in enumerate(el.coeffs))

    for s in range(0, 20):
        # y = x + s*theta, so x = y - s*t
        gy = sum(as_expr(c) * (x - s * t) ** i for i, c in enumerate(g))
        norm = sympy.Poly(sympy.resultant(f, sympy.expand(gy), t), x, domain="QQ")
        if sympy.degree(sympy.gcd(norm, norm.diff(x)), x) > 0:
            continue
        if not norm.is_irreducible:
            raise ArithmeticError("quadratic remainder is reducible")
        mp = norm.monic()
        coeffs = tuple(Fraction(int(c.p), int(c.q)) for c in reversed(mp.all_coeffs()))
        return NumberField(coeffs, label=f"{K.label}[x]/({kpoly_str(g)})", trusted=True)
    raise ArithmeticError("no primitive element found")


def tensor_decompose(k: NumberField, K: NumberField, height_bound: int = 10 ** 6,
                     precision: int = 256) -> TensorDecomposition:
    """Factor the minimal polynomial of K over K itself (base Q or K)."""
    if k == K:
        comp = Component(K, 1, (-K.gen, K.one), automorphisms(K)[0])
        return TensorDecomposition(k, K, (comp,), (automorphisms(K)[0],))
    if k.degree != 1:
        raise ValueError("the base field must be Q or the extension itself")
    f = tuple(K(c) for c in K.min_poly)
    autos = automorphisms(K, height_bound, precision)
    comps = []
    rest = f
    for s in autos:
        linear = (-s(K.gen), K.one)
        rest, r = _kpoly_divmod(rest, linear, K)
        if r:
            raise ArithmeticError("automorphism image is not a root")
        comps.append(Component(K, 1, linear, s))
    deg = len(rest) - 1
    if deg == 2:
        a, b, c = rest[2], rest[1], rest[0]
        disc = b * b - 4 * a * c
        res = sqrt_in_field(disc, height_bound, precision)
        if isinstance(res, Inconclusive):
            raise DecompositionInconclusive(res)
        if isinstance(res, Root):
            raise ArithmeticError("quadratic remainder splits, so a root was missed")
        monic = tuple(x / a for x in rest)
        comps.append(Component(_flatten_quadratic(K, monic), 2, monic, None, res))
    elif deg >= 3:
        raise UnfactoredRemainder(deg)
    elif deg == 0 and rest[0] != K.one:
        comps[-1] = Component(K, 1, _kpoly_mul(comps[-1].factor_poly, rest, K), comps[-1].automorphism)
    galois = tuple(autos) if len(autos) == K.degree else None
    return TensorDecomposition(k, K, tuple(comps), galois)


def verify_action_formula(dec: TensorDecomposition) -> CheckResult:
    """(alpha, beta) . c_gamma = alpha(c_{alpha^-1 gamma beta}) on K (x) K = prod_gamma K.

    ``a (x) b`` maps to ``(a * gamma(b))_gamma``; the check runs over all
    triples and all pairs of power-basis elements, and also confirms the map
    is an isomorphism over Q.
    """
    if not dec.is_galois:
        return CheckResult(False, None, "extension is not Galois")
    K = dec.extension
    if dec.base == K:
        return CheckResult(True, None, "trivial extension")
    G = list(dec.galois_group)
    basis = K.power_basis()
    d = K.degree
    # isomorphism: rank of a_i (x) b_j -> (a_i gamma(b_j))_gamma is d^2
    rows = []
    for a in basis:
        for b in basis:
            rows.append([c for g in G for c in (a * g(b)).coeffs])
    if qlinalg.rank(rows) != d * d:
        return CheckResult(False, None, "a (x) b -> (a gamma(b)) is not an isomorphism")
    count = 0
    for alpha, beta, gamma in itertools.product(G, repeat=3):
        shifted = alpha.inverse().compose(gamma).compose(beta)
        for a in basis:
            for b in basis:
                left = alpha(a) * gamma(beta(b))
                right = alpha(a * shifted(b))
                if left != right:
                    return CheckResult(False, (G.index(alpha), G.index(beta), G.index(gamma)),
                                       "action formula fails")
        count += 1
    return CheckResult(True, None, f"{count} triples x {d * d} basis pairs")


# --- Witt-family classes ----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WittFamilyClass:
    galois_group: FiniteGroup
    coefficient_module: GModule
    class4: CochainClass

    def __post_init__(self):
        c = self.class4
        if c.degree != 4:
            raise ValueError("a Witt-family class is a degree-4 cocycle")
        if c.group != self.galois_group or c.module != self.coefficient_module:
            raise ShapeMismatch("cocycle does not match the group and module")


def witt_class_product(a: WittFamilyClass, b: WittFamilyClass) -> WittFamilyClass:
    if a.galois_group != b.galois_group or a.coefficient_module != b.coefficient_module:
        raise ShapeMismatch("classes live over different groups or modules")
    return WittFamilyClass(a.galois_group, a.coefficient_module, add_classes(a.class4, b.class4))


def witt_class_inflate(a: WittFamilyClass, embedding: ModuleMap | None = None,
                       source: FiniteGroup | None = None,
                       images: Sequence[int] | None = None) -> WittFamilyClass:
    """Enlarge coefficients along ``embedding``, then pull back along ``source -> Gamma``."""
    c = a.class4
    if embedding is not None:
        c = inflate_coefficients(c, embedding)
    if source is not None:
        if images is None:
            raise ValueError("a group surjection needs its element images")
        c = inflate_group(c, source, images)
    return WittFamilyClass(c.group, c.module, c)


def double_coefficients(M: GModule) -> ModuleMap:
    """mu_N -> mu_2N for a cyclic module on which every element acts by +-1."""
    if M.rank != 1 or not M.is_finite:
        raise ValueError("need a finite cyclic coefficient module")
    (N,) = M.invariant_factors
    signs = []
    for A in M.action:
        a = A[0][0] % N
        if a == 1 % N:
            signs.append(1)
        elif a == (-1) % N:
            signs.append(-1)
        else:
            raise ValueError("doubling is defined for actions by +-1")
    target = GModule(M.group, (2 * N,), tuple(((s,),) for s in signs), f"mu{2 * N}")
    return ModuleMap(M, target, ((2,),))


@dataclass(frozen=True)
class Trivial:
    witness: CochainClass | None
    level: int
    verdict: str = "Trivial"


@dataclass(frozen=True)
class NontrivialUpTo:
    depth: int
    class_orders: tuple[int, ...] = ()
    verdict: str = "NontrivialUpTo"


@dataclass(frozen=True)
class StabilizedNontrivial:
    depth: int
    class_orders: tuple[int, ...] = ()
    verdict: str = "Stabilized-Nontrivial"


def _class_order(c: CochainClass, budget: int) -> tuple[int, object]:
    H = bar_cohomology(c.group, c.module, c.degree, budget)
    coords = H.coordinates(c)
    order = 1
    for x, n in zip(coords, H.generator_orders):
        order = lcm(order, n // gcd(x, n))
    return order, H.structure


def cocycle_tower_triviality(c: CochainClass, tower_depth: int,
                             work_budget: int = DEFAULT_WORK_BUDGET):
    """Coboundary test along mu_N -> mu_2N -> ... (levels 0 .. tower_depth)."""
    if tower_depth < 1:
        raise ValueError("tower_depth must be at least 1")
    G = c.group
    cyclic = G.abelian_factors is not None and len(G.abelian_factors) == 1
    orders, structures = [], []
    current = c
    for level in range(tower_depth + 1):
        res = is_coboundary(current, work_budget)
        if res.is_coboundary:
            return Trivial(res.witness, level)
        o, s = _class_order(current, work_budget)
        orders.append(o)
        structures.append(s)
        if level < tower_depth:
            current = inflate_coefficients(current, double_coefficients(current.module))
    if cyclic and orders[-1] == orders[-2] and structures[-1] == structures[-2]:
        return StabilizedNontrivial(tower_depth, tuple(orders))
    return NontrivialUpTo(tower_depth, tuple(orders))


def witt_class_is_trivial(a: WittFamilyClass, tower_depth: int,
                          work_budget: int = DEFAULT_WORK_BUDGET):
    return cocycle_tower_triviality(a.class4, tower_depth, work_budget)


# --- Galois-grading skeletons -------------------------------------------------------


@dataclass(frozen=True)
class SkeletonObject:
    label: str
    galois_degree: int


@dataclass(frozen=True, eq=False)
class GradedSkeleton:
    group: FiniteGroup
    objects: tuple[SkeletonObject, ...]
    fusion_support: Mapping[tuple[int, int], frozenset[int]]
    unit_index: int = 0

    def __post_init__(self):
        n = len(self.objects)
        support = {}
        for i in range(n):
            for j in range(n):
                s = frozenset(self.fusion_support.get((i, j), ()))
                if not s:
                    raise ValueError(f"empty fusion support for ({i}, {j})")
                if any(not 0 <= k < n for k in s):
                    raise ValueError("fusion support refers to unknown objects")
                support[(i, j)] = s
        object.__setattr__(self, "fusion_support", support)
        for o in self.objects:
            if not 0 <= o.galois_degree < self.group.order:
                raise ValueError("galois_degree is not a group element")

    def with_degree(self, index: int, degree: int) -> "GradedSkeleton":
        objs = list(self.objects)
        objs[index] = SkeletonObject(objs[index].label, degree)
        return GradedSkeleton(self.group, tuple(objs), self.fusion_support, self.unit_index)


def galois_grading_check(skel: GradedSkeleton) -> CheckResult:
    """degree(E) = degree(C) * degree(D) whenever E occurs in C (x) D."""
    G = skel.group
    deg = [o.galois_degree for o in skel.objects]
    n = len(deg)
    for i in range(n):
        for j in range(n):
            for k in sorted(skel.fusion_support[(i, j)]):
                if deg[k] != G.mul(deg[i], deg[j]):
                    return CheckResult(False, (i, j, k), "degree is not multiplicative")
    if deg[skel.unit_index] != G.identity_index:
        return CheckResult(False, (skel.unit_index,), "unit has nontrivial degree")
    return PASS


def skeleton_from_grading(A: FiniteGroup, G: FiniteGroup, images: Sequence[int],
                          label: str = "V") -> GradedSkeleton:
    """Objects indexed by A with A-group fusion, graded through ``images: A -> G``."""
    objs = tuple(SkeletonObject(f"{label}_{A.element_labels[a]}", images[a]) for a in A.elements)
    support = {(a, b): frozenset({A.mul(a, b)}) for a in A.elements for b in A.elements}
    return GradedSkeleton(G, objs, support, A.identity_index)


def skeleton_from_spec(spec) -> GradedSkeleton:
    from .groups import group_from_spec

    G = group_from_spec(spec["group"])
    objs = []
    for o in spec["objects"]:
        objs.append(SkeletonObject(str(o["label"]), int(o["galois_degree"])))
    labels = [o.label for o in objs]

    def ix(x):
        return labels.index(x) if isinstance(x, str) and x in labels else int(x)

    support = {}
    for key, vals in spec["fusion_support"].items():
        a, b = (ix(s.strip()) for s in key.split(","))
        support[(a, b)] = frozenset(ix(v) for v in vals)
    return GradedSkeleton(G, tuple(objs), support, ix(spec.get("unit", 0)))


# --- the real Witt certificate ---------------------------------------------------------


class CertificateFailure(AssertionError):
    def __init__(self, check: str, detail: str, report: "WittCertificate"):
        super().__init__(f"{check}: {detail}")
        self.check = check
        self.detail = detail
        self.report = report


@dataclass
class WittCertificate:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    not_mechanized: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def lines(self) -> list[str]:
        out = [f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}" for name, ok, detail in self.checks]
        out += [f"[SKIP] {text}" for text in self.not_mechanized]
        return out

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in self.checks],
                "not_mechanized": list(self.not_mechanized)}


def real_witt_certificate(field: NumberField | None = None,
                          gamma: Mapping[int, int] | None = None) -> WittCertificate:
    """Verify every computable invariant of the Z/2-equivariantization of Z(Vect(Z/2)).

    ``field`` replaces Q(i) and ``gamma`` overrides entries of the gamma
    table (both for exercising failure paths).
    """
    from . import fixtures
    from .equivariant import (
        QUATERNIONIC,
        GaloisAction,
        check_action_coherence,
        equivariant_fusion_ring,
        equivariant_hom_dim,
        equivariant_simples,
        grading_decomposition,
        t_squared_tensorator,
    )
    from .fusionring import fpdim_category
    from .groups import cyclic_group
    from .numfield import make_cyclotomic
    from .pointedcat import (
        check_hexagons,
        check_pentagon,
        double_centralizer_check,
        drinfeld_center_pointed,
        muger_center,
    )

    report = WittCertificate()

    def record(name, ok, detail):
        report.checks.append((name, bool(ok), detail))
        if not ok:
            raise CertificateFailure(name, detail, report)

    F = field or make_cyclotomic(4)
    B = drinfeld_center_pointed(cyclic_group(2), F)
    r = check_pentagon(B)
    record("pentagon", r.ok, "trivial associator is a 3-cocycle" if r else str(r.violation))
    r = check_hexagons(B)
    record("hexagons", r.ok, "braiding (-1)^(jk) satisfies both hexagons" if r else str(r.violation))
    Z2 = muger_center(B)
    record("muger-center", Z2.is_trivial, f"Mueger center {Z2}")
    r = double_centralizer_check(B)
    record("double-centralizer", r.ok, f"all {len(B.subgroups)} subgroups" if r else str(r.violation))

    base_action = fixtures.real_witt_action(B)
    gam = dict(enumerate(base_action.gamma))
    for g, v in (gamma or {}).items():
        gam[int(g)] = F(v)
    action = GaloisAction(B, base_action.scalar_auto, base_action.object_perm,
                          base_action.tensorator, gam)
    r = check_action_coherence(action)
    J2 = t_squared_tensorator(action)
    expected = all(J2[(g, h)] == (-1) ** ((g % 2) * (h // 2) + (g // 2) * (h % 2))
                   for g in range(4) for h in range(4))
    record("action-coherence", r.ok and expected,
           "tensor, braided, gamma monoidal, gamma_T = sigma(gamma); T^2 tensorator (-1)^(il+jk)"
           if r.ok and expected else f"{r.detail or 'T^2 tensorator differs'} at {r.violation}")

    simples = equivariant_simples(action, fixtures.EQUIVARIANT_NAMES)
    quats = [X for X in simples if X.end_type == QUATERNIONIC]
    minus_id = bool(quats) and all(
        sum((X.structure_u[a][c] * action.sigma(X.structure_u[c][b]) for c in range(2)), F.zero)
        == (-F.one if a == b else F.zero) for X in quats for a in range(2) for b in range(2))
    record("uT(u)=-Id", minus_id, "u = [[0,-1],[1,0]] on EM+EM")

    sig = [(X.label, X.end_type, equivariant_hom_dim(action, X, X)) for X in simples]
    want = [("I", "REAL", 1), ("K", "COMPLEX", 2), ("H", "QUATERNIONIC", 4)]
    record("simples", sig == want, ", ".join(f"{l} {t} End dim {d}" for l, t, d in sig))

    ring = equivariant_fusion_ring(action, simples, "C")
    D = fpdim_category(ring)
    record("fpdim", D == 4, f"FPdim(C) = {D}")

    grading = grading_decomposition(action, simples)
    trivial = grading.components[grading.degrees[ring.unit_index]]
    names = sorted(ring.basis_labels[i] for i in trivial)
    h = ring.basis_labels.index("H")
    hh = ring.product_str(h, h)
    record("grading", grading.group.order == 2 and names == ["H", "I"] and hh == "4I",
           f"Z/2-graded, trivial component {{{', '.join(names)}}} with H x H = {hh}")
    report.not_mechanized.append(
        "classification of real fusion categories S with FPdim(Z(S)) = 4 (non-triviality step)")
    return report
