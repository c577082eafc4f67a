"""Order-2 Galois actions on pointed braided categories and their equivariantization.

An action is a permutation T of the simple objects (a group
automorphism with T^2 = 1), acting sigma-semilinearly on morphisms,
with tensorator J(g, h) and a monoidal isomorphism gamma: T^2 => Id.

An equivariant object is a list of simple "slots" x_0, ..., x_{r-1}
together with a matrix u: T(X) -> X, where u[a][c] maps slot c of
T(X) (the object T(x_c)) to slot a of X, so u[a][c] != 0 forces
T(x_c) = x_a.  Coherence is u * sigma(u) = diag(gamma(x_a)).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import mpmath

from . import qlinalg
from .checks import PASS, CheckResult
from .fusionring import COMPLEX as END_COMPLEX
from .fusionring import QUATERNIONIC as END_QUATERNIONIC
from .fusionring import REAL as END_REAL
from .fusionring import FusionRing
from .groups import FiniteGroup
from .numfield import (
    FieldAutomorphism,
    FieldElement,
    NumberField,
    numeric_embeddings,
)
from .pointedcat import PointedBraidedCategory, Subgroup

REAL = "REAL"
COMPLEX = "COMPLEX"
QUATERNIONIC = "QUATERNIONIC"
END_DIMS = {REAL: 1, COMPLEX: 2, QUATERNIONIC: 4}


class ObstructionUndecidable(ArithmeticError):
    pass


class NotGraded(ValueError):
    pass


def _pair_table(values, n: int, F: NumberField):
    if values is None:
        return (F.one,) * (n * n)
    if isinstance(values, Mapping):
        out = [F.one] * (n * n)
        for key, v in values.items():
            if isinstance(key, str):
                key = tuple(int(s) for s in key.split(","))
            g, h = key
            out[g * n + h] = F(v)
        return tuple(out)
    if callable(values):
        return tuple(F(values(g, h)) for g in range(n) for h in range(n))
    return tuple(F(v) for v in values)


def _single_table(values, n: int, F: NumberField):
    if values is None:
        return (F.one,) * n
    if isinstance(values, Mapping):
        out = [F.one] * n
        for key, v in values.items():
            out[int(key)] = F(v)
        return tuple(out)
    if callable(values):
        return tuple(F(values(g)) for g in range(n))
    return tuple(F(v) for v in values)


@dataclass(frozen=True, eq=False)
class GaloisAction:
    base: PointedBraidedCategory
    scalar_auto: FieldAutomorphism
    object_perm: tuple[int, ...]
    tensorator: tuple = None
    gamma: tuple = None

    def __post_init__(self):
        G, F = self.base.group, self.base.field
        n = G.order
        if self.scalar_auto.field != F:
            raise ValueError("scalar automorphism acts on a different field")
        perm = tuple(int(x) for x in self.object_perm)
        if sorted(perm) != list(range(n)):
            raise ValueError("object_perm is not a permutation")
        if any(perm[perm[g]] != g for g in range(n)):
            raise ValueError("object_perm must square to the identity")
        for g in range(n):
            for h in range(n):
                if perm[G.mul(g, h)] != G.mul(perm[g], perm[h]):
                    raise ValueError("object_perm is not a group automorphism")
        object.__setattr__(self, "object_perm", perm)
        J = _pair_table(self.tensorator, n, F)
        gam = _single_table(self.gamma, n, F)
        if any(not x for x in J) or any(not x for x in gam):
            raise ValueError("tensorator and gamma values must be nonzero")
        object.__setattr__(self, "tensorator", J)
        object.__setattr__(self, "gamma", gam)

    @property
    def field(self) -> NumberField:
        return self.base.field

    @property
    def group(self) -> FiniteGroup:
        return self.base.group

    def T(self, g: int) -> int:
        return self.object_perm[g]

    def J(self, g: int, h: int) -> FieldElement:
        return self.tensorator[g * self.group.order + h]

    def gamma_of(self, g: int) -> FieldElement:
        return self.gamma[g]

    def sigma(self, x: FieldElement) -> FieldElement:
        return self.scalar_auto(x)


def t_squared_tensorator(action: GaloisAction) -> dict[tuple[int, int], FieldElement]:
    """Tensorator of T o T: sigma(J(g, h)) * J(Tg, Th)."""
    G = action.group
    return {(g, h): action.sigma(action.J(g, h)) * action.J(action.T(g), action.T(h))
            for g in G.elements for h in G.elements}


def check_action_coherence(action: GaloisAction) -> CheckResult:
    """Tensor functor, braided functor, monoidality of gamma and gamma_T = sigma(gamma)."""
    cat, G, s, T, J = action.base, action.group, action.sigma, action.T, action.J
    w = cat.omega
    for g, h, k in itertools.product(G.elements, repeat=3):
        left = s(w(g, h, k)) * J(g, h) * J(G.mul(g, h), k)
        right = J(h, k) * J(g, G.mul(h, k)) * w(T(g), T(h), T(k))
        if left != right:
            return CheckResult(False, ("tensor", g, h, k), "J is not a tensor structure")
    if cat.braiding is not None:
        for g, h in itertools.product(G.elements, repeat=2):
            if cat.c(T(g), T(h)) != s(cat.c(g, h)) * J(g, h) / J(h, g):
                return CheckResult(False, ("braided", g, h), "T is not braided")
    J2 = t_squared_tensorator(action)
    gam = action.gamma_of
    for g, h in itertools.product(G.elements, repeat=2):
        if gam(G.mul(g, h)) * J2[(g, h)] != gam(g) * gam(h):
            return CheckResult(False, ("gamma-monoidal", g, h), "gamma is not monoidal")
    for g in G.elements:
        if gam(T(g)) != s(gam(g)):
            return CheckResult(False, ("gamma-T", g), "gamma_T(g) != sigma(gamma_g)")
    return PASS


# --- equivariant objects --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EquivariantSimple:
    underlying: tuple[int, ...]
    structure_u: tuple[tuple[FieldElement, ...], ...]
    end_type: str
    end_dim: int
    label: str = ""

    def __post_init__(self):
        if END_DIMS.get(self.end_type) != self.end_dim:
            raise ValueError("end_dim does not match end_type")

    def underlying_counter(self) -> Counter:
        return Counter(self.underlying)

    def __repr__(self):
        return f"EquivariantSimple({self.label or self.underlying}, {self.end_type})"


@dataclass(frozen=True, eq=False)
class EquivariantObject:
    """A not necessarily simple equivariant object."""

    underlying: tuple[int, ...]
    structure_u: tuple[tuple[FieldElement, ...], ...]


def _as_object(X) -> EquivariantObject:
    return X if isinstance(X, EquivariantObject) else EquivariantObject(X.underlying, X.structure_u)


def check_equivariant_structure(action: GaloisAction, X) -> CheckResult:
    """Shape of u and the coherence u * sigma(u) = diag(gamma)."""
    slots, u = X.underlying, X.structure_u
    r = len(slots)
    F = action.field
    for a in range(r):
        for c in range(r):
            if u[a][c] and action.T(slots[c]) != slots[a]:
                return CheckResult(False, ("shape", a, c), "u mixes distinct simples")
    for a in range(r):
        for b in range(r):
            val = sum((u[a][c] * action.sigma(u[c][b]) for c in range(r)), F.zero)
            expected = action.gamma_of(slots[a]) if a == b else F.zero
            if val != expected:
                return CheckResult(False, ("coherence", a, b), "u * sigma(u) != gamma")
    return PASS


@dataclass(frozen=True)
class NormSolution:
    value: FieldElement


@dataclass(frozen=True)
class NormObstruction:
    """gamma is negative at a real place where sigma is complex conjugation,
    while every u * sigma(u) is a squared absolute value there."""

    embedding_index: int
    gamma_value: str


def _roots_of_unity(F: NumberField) -> list[FieldElement]:
    n = F.cyclotomic_order
    if n is None:
        return [F.one, -F.one]
    powers = [F.gen ** k for k in range(n)] if n > 1 else [F.one]
    return powers if n % 2 == 0 else powers + [-z for z in powers]


def solve_norm_equation(action: GaloisAction, gamma: FieldElement,
                        search_bound: int = 2) -> NormSolution | NormObstruction:
    """Decide whether u * sigma(u) = gamma has a solution u in the field."""
    F, s = action.field, action.sigma
    if s(gamma) != gamma:
        raise ObstructionUndecidable("gamma is not fixed by sigma")
    for z in _roots_of_unity(F):
        if z * s(z) == gamma:
            return NormSolution(z)
    # sign obstruction at a complex place on which sigma is conjugation
    prec = 256
    with mpmath.workprec(prec):
        tol = mpmath.mpf(2) ** (-prec // 2)
        emb = numeric_embeddings(F, prec)
        for idx, e in enumerate(emb):
            if e.is_real:
                continue
            image = action.scalar_auto.image_of_generator.evaluate_at(e.value)
            if abs(image - mpmath.conj(e.value)) > tol:
                continue
            gv = gamma.evaluate_at(e.value)
            if abs(mpmath.im(gv)) < tol and mpmath.re(gv) < -tol:
                return NormObstruction(idx, mpmath.nstr(mpmath.re(gv), 15))
    # exact search over small elements
    rng = range(-search_bound, search_bound + 1)
    for coeffs in itertools.product(rng, repeat=F.degree):
        z = F.element(coeffs)
        if z and z * s(z) == gamma:
            return NormSolution(z)
    raise ObstructionUndecidable(f"cannot decide whether {gamma} is a norm")


def equivariant_simples(action: GaloisAction, names: Mapping[tuple, str] | None = None
                        ) -> list[EquivariantSimple]:
    """Simple equivariant objects, orbit of the least base element first."""
    if action.scalar_auto.order() != 2:
        raise ValueError("the scalar automorphism must have order exactly 2")
    F = action.field
    G = action.group
    out = []
    seen = set()
    labels = G.element_labels
    for g in G.elements:
        if g in seen:
            continue
        Tg = action.T(g)
        seen.update({g, Tg})
        if Tg != g:
            u = ((F.zero, action.gamma_of(g)), (F.one, F.zero))
            slots = (g, Tg)
            kind = COMPLEX
        else:
            sol = solve_norm_equation(action, action.gamma_of(g))
            if isinstance(sol, NormSolution):
                u, slots, kind = ((sol.value,),), (g,), REAL
            else:
                u = ((F.zero, action.gamma_of(g)), (F.one, F.zero))
                slots, kind = (g, g), QUATERNIONIC
        default = "+".join(labels[x] for x in slots)
        label = (names or {}).get(slots, default)
        X = EquivariantSimple(slots, u, kind, END_DIMS[kind], label)
        assert check_equivariant_structure(action, X).ok
        out.append(X)
    return out


# --- hom spaces and tensor products ---------------------------------------------


def _sigma_matrix(action: GaloisAction) -> list[list[Fraction]]:
    F = action.field
    cols = [action.sigma(b).coeffs for b in F.power_basis()]
    d = F.degree
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def _fixed_degree(action: GaloisAction) -> int:
    """[F^sigma : Q]."""
    d = action.field.degree
    return d // action.scalar_auto.order()


def equivariant_hom_space(action: GaloisAction, X, Y) -> list[list[list[FieldElement]]]:
    """Q-basis of {f: X -> Y : f u = v sigma(f)} as matrices (rows = Y slots)."""
    X, Y = _as_object(X), _as_object(Y)
    F = action.field
    d = F.degree
    xs, ys = X.underlying, Y.underlying
    u, v = X.structure_u, Y.structure_u
    S = _sigma_matrix(action)
    entries = [(y, x) for y in range(len(ys)) for x in range(len(xs)) if ys[y] == xs[x]]
    pos = {e: i for i, e in enumerate(entries)}
    ncols = len(entries) * d
    if ncols == 0:
        return []
    rows = []
    # equation for each (y, c): sum_x f[y][x] u[x][c] - sum_y' v[y][y'] sigma(f[y'][c]) = 0
    for y in range(len(ys)):
        for c in range(len(xs)):
            block = [[Fraction(0)] * ncols for _ in range(d)]
            for x in range(len(xs)):
                if (y, x) in pos and u[x][c]:
                    M = u[x][c].rational_matrix()
                    _add_block(block, M, pos[(y, x)] * d, 1)
            for y2 in range(len(ys)):
                if (y2, c) in pos and v[y][y2]:
                    M = _matmul(v[y][y2].rational_matrix(), S)
                    _add_block(block, M, pos[(y2, c)] * d, -1)
            rows.extend(block)
    basis = qlinalg.nullspace(rows, ncols)
    out = []
    for vec in basis:
        f = [[F.zero for _ in xs] for _ in ys]
        for (y, x), i in pos.items():
            f[y][x] = F.element(vec[i * d:(i + 1) * d])
        out.append(f)
    return out


def _add_block(block, M, offset, sign):
    for i in range(len(M)):
        for j in range(len(M)):
            if M[i][j]:
                block[i][offset + j] += sign * M[i][j]


def _matmul(A, B):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def equivariant_hom_dim(action: GaloisAction, X, Y) -> int:
    """Dimension of Hom(X, Y) over the fixed field of sigma."""
    qdim = len(equivariant_hom_space(action, X, Y))
    k = _fixed_degree(action)
    if qdim % k:
        raise ArithmeticError("hom space dimension is not a multiple of [F^sigma : Q]")
    return qdim // k


def equivariant_tensor(action: GaloisAction, X, Y) -> EquivariantObject:
    """X (x) Y with structure (u (x) v) o J^{-1}."""
    X, Y = _as_object(X), _as_object(Y)
    G, F = action.group, action.field
    xs, ys = X.underlying, Y.underlying
    slots = [(a, b) for a in range(len(xs)) for b in range(len(ys))]
    under = tuple(G.mul(xs[a], ys[b]) for a, b in slots)
    w = []
    for a, b in slots:
        row = []
        for c, d in slots:
            val = X.structure_u[a][c] * Y.structure_u[b][d]
            row.append(val / action.J(xs[c], ys[d]) if val else F.zero)
        w.append(tuple(row))
    return EquivariantObject(under, tuple(w))


def equivariant_tensor_decompose(action: GaloisAction, X, Y,
                                 simples: Sequence[EquivariantSimple] | None = None
                                 ) -> list[tuple[EquivariantSimple, int]]:
    """Multiplicities of the simples in X (x) Y: hom dimension over end dimension."""
    simples = equivariant_simples(action) if simples is None else simples
    Z = equivariant_tensor(action, X, Y)
    if not check_equivariant_structure(action, Z).ok:
        raise ArithmeticError("tensor product fails the coherence identity")
    out = []
    for S in simples:
        h = equivariant_hom_dim(action, S, Z)
        if h % S.end_dim:
            raise ArithmeticError(f"hom dimension {h} is not a multiple of {S.end_dim}")
        if h:
            out.append((S, h // S.end_dim))
    got = Counter()
    for S, m in out:
        for g in S.underlying:
            got[g] += m
    if got != Counter(Z.underlying):
        raise ArithmeticError("decomposition does not conserve underlying objects")
    return out


_END_RECORD = {REAL: END_REAL, COMPLEX: END_COMPLEX, QUATERNIONIC: END_QUATERNIONIC}


def equivariant_fusion_ring(action: GaloisAction,
                            simples: Sequence[EquivariantSimple] | None = None,
                            label: str = "") -> FusionRing:
    """Fusion ring of the equivariantization with division-algebra data."""
    simples = list(equivariant_simples(action) if simples is None else simples)
    r = len(simples)
    N = [[[0] * r for _ in range(r)] for _ in range(r)]
    for i, j in itertools.product(range(r), repeat=2):
        for S, m in equivariant_tensor_decompose(action, simples[i], simples[j], simples):
            N[i][j][simples.index(S)] = m
    unit = next(i for i, S in enumerate(simples)
                if S.underlying == (action.group.identity_index,))
    dual = [next(j for j in range(r) if N[i][j][unit]) for i in range(r)]
    return FusionRing(tuple(S.label for S in simples), N, unit, tuple(dual),
                      tuple(_END_RECORD[S.end_type] for S in simples), True, label)


# --- grading ----------------------------------------------------------------------


@dataclass(frozen=True)
class GradingDecomposition:
    group: FiniteGroup
    support_subgroup: Subgroup
    components: tuple[tuple[int, ...], ...]
    degrees: tuple[int, ...]

    def component_of(self, i: int) -> int:
        return self.degrees[i]


def grading_decomposition(action: GaloisAction,
                          simples: Sequence[EquivariantSimple] | None = None
                          ) -> GradingDecomposition:
    """Grade the equivariant simples by cosets of the subgroup of A supporting
    the adjoint simples (those occurring in X (x) X*)."""
    simples = list(equivariant_simples(action) if simples is None else simples)
    ring = equivariant_fusion_ring(action, simples)
    G = action.group
    r = len(simples)
    adjoint = set()
    for i in range(r):
        for k in range(r):
            if ring.N[i][ring.dual[i]][k]:
                adjoint.add(k)
    gens = sorted({g for k in adjoint for g in simples[k].underlying})
    S = G.generated(gens)
    cosets: list[frozenset] = []
    for g in G.elements:
        if not any(g in c for c in cosets):
            cosets.append(frozenset(G.mul(g, s) for s in S))
    coset_of = {g: i for i, c in enumerate(cosets) for g in c}
    degrees = []
    for X in simples:
        ds = {coset_of[g] for g in X.underlying}
        if len(ds) != 1:
            raise NotGraded(f"{X.label} is supported on several cosets")
        degrees.append(ds.pop())
    # quotient group A/S on coset indices
    reps = [min(c) for c in cosets]
    table = [[coset_of[G.mul(reps[a], reps[b])] for b in range(len(cosets))]
             for a in range(len(cosets))]
    Q = FiniteGroup(len(cosets), table, coset_of[G.identity_index], f"{G.label}/S")
    for i, j in itertools.product(range(r), repeat=2):
        for k in range(r):
            if ring.N[i][j][k] and degrees[k] != Q.mul(degrees[i], degrees[j]):
                raise NotGraded(f"{simples[i].label} x {simples[j].label} leaves its degree")
    components = tuple(tuple(i for i in range(r) if degrees[i] == d) for d in range(Q.order))
    return GradingDecomposition(Q, Subgroup(G, tuple(sorted(S))), components, tuple(degrees))


def action_from_spec(base: PointedBraidedCategory, spec) -> GaloisAction:
    from .numfield import complex_conjugation, FieldAutomorphism as FA

    F = base.field
    sa = spec.get("scalar_auto", "conj")
    if sa in ("conj", "conjugation", "complex_conjugation"):
        sigma = complex_conjugation(F)
    else:
        sigma = FA(F, F(sa))
    return GaloisAction(base, sigma, tuple(spec["perm"]), spec.get("J"), spec.get("gamma"))
