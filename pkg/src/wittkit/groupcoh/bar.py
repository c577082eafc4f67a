"""Group cohomology through the bar complex.

Cochains of degree n are stored densely over all n-tuples of group
elements (index ``g1*|G|^(n-1) + ... + gn``), one row of module
coordinates per tuple.  Linear algebra uses the normalized complex
(tuples of non-identity elements) whenever the input is normalized.

Finite modules are handled one prime at a time over Z/p^e; modules
with a free summand go through exact integer Smith reduction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import prod
from typing import Mapping, Sequence

import numpy as np
from sympy import factorint

from ..groups import FiniteGroup, check_homomorphism
from .modules import GModule, ModuleMap, NotEquivariant
from .snf import int_snf, int_solve, invariant_factors, local_snf, local_solve

DEFAULT_WORK_BUDGET = 10 ** 7


class BudgetExceeded(RuntimeError):
    def __init__(self, message: str, sizes: dict):
        super().__init__(message)
        self.sizes = sizes


class NotStabilized(RuntimeError):
    pass


class ShapeMismatch(ValueError):
    pass


class NotCocycle(ValueError):
    pass


@dataclass(frozen=True)
class AbelianGroupStructure:
    """``Z/d1 + ... + Z/dk + Z^free_rank`` with d1 | d2 | ... and no d equal to 1."""

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        f = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", f)
        if any(d <= 1 for d in f):
            raise ValueError("invariant factors must exceed 1")
        if any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise ValueError("invariant factors must be in divisibility order")
        if self.free_rank < 0:
            raise ValueError("free rank must be non-negative")

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "AbelianGroupStructure":
        """Structure of a direct sum of cyclic groups of the given orders (0 = Z)."""
        canon = invariant_factors(orders)
        return cls(tuple(d for d in canon if d), sum(1 for d in canon if d == 0))

    @property
    def is_zero(self) -> bool:
        return not self.invariant_factors and not self.free_rank

    @property
    def order(self) -> int | None:
        return None if self.free_rank else prod(self.invariant_factors)

    def __str__(self):
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors),
                "free_rank": self.free_rank, "text": str(self)}


# --- cochains ----------------------------------------------------------------


def _tuples(G: FiniteGroup, n: int) -> np.ndarray:
    if n == 0:
        return np.zeros((1, 0), np.int64)
    return np.array(list(itertools.product(range(G.order), repeat=n)), np.int64).reshape(-1, n)


def _flat_index(T: np.ndarray, base: int) -> np.ndarray:
    idx = np.zeros(T.shape[0], np.int64)
    for j in range(T.shape[1]):
        idx = idx * base + T[:, j]
    return idx


def _reduce_rows(values: np.ndarray, factors: Sequence[int]) -> np.ndarray:
    out = values.copy()
    for i, n in enumerate(factors):
        if n:
            out[:, i] %= n
    return out


def _mul_array(G: FiniteGroup) -> np.ndarray:
    return np.array(G.mul_table, np.int64)


def _action_array(M: GModule) -> np.ndarray:
    return np.array(M.action, np.int64).reshape(M.group.order, M.rank, M.rank)


def coboundary(G: FiniteGroup, M: GModule, n: int, values: np.ndarray) -> np.ndarray:
    """Apply the (unnormalized) bar differential to a dense n-cochain."""
    T = _tuples(G, n + 1)
    mul = _mul_array(G)
    A = _action_array(M)
    g = G.order
    first = values[_flat_index(T[:, 1:], g)]
    out = np.einsum("kab,kb->ka", A[T[:, 0]], first)
    for i in range(1, n + 1):
        merged = np.concatenate(
            [T[:, :i - 1], mul[T[:, i - 1], T[:, i]][:, None], T[:, i + 1:]], axis=1)
        out += (-1) ** i * values[_flat_index(merged, g)]
    out += (-1) ** (n + 1) * values[_flat_index(T[:, :n], g)]
    return _reduce_rows(out, M.invariant_factors)


@dataclass(frozen=True, eq=False)
class CochainClass:
    """An n-cocycle of ``group`` with values in ``module``."""

    group: FiniteGroup
    module: GModule
    degree: int
    values: np.ndarray = field(repr=False)
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.module.group != self.group:
            raise ValueError("module is defined over a different group")
        shape = (self.group.order ** self.degree, self.module.rank)
        vals = np.asarray(self.values, dtype=np.int64).reshape(shape)
        vals = _reduce_rows(vals, self.module.invariant_factors)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.check:
            work = self.group.order ** (self.degree + 1) * max(self.module.rank, 1)
            if work > 10 * DEFAULT_WORK_BUDGET:
                raise BudgetExceeded("cocycle check is too large", {"cochain_entries": work})
            if np.any(coboundary(self.group, self.module, self.degree, vals)):
                raise NotCocycle("the bar differential of the cochain is nonzero")

    @classmethod
    def from_mapping(cls, group: FiniteGroup, module: GModule, degree: int,
                     cocycle: Mapping, check: bool = True) -> "CochainClass":
        """Build from ``{(g1, ..., gn): module element}``; missing tuples are 0."""
        vals = np.zeros((group.order ** degree, module.rank), np.int64)
        for key, v in cocycle.items():
            if isinstance(key, str):
                key = tuple(int(s) for s in key.split(",") if s.strip() != "")
            key = tuple(key)
            if len(key) != degree or any(not 0 <= k < group.order for k in key):
                raise ShapeMismatch(f"bad cochain argument {key!r}")
            if isinstance(v, int):
                v = (v,)
            if len(v) != module.rank:
                raise ShapeMismatch(f"value at {key!r} has the wrong length")
            idx = 0
            for k in key:
                idx = idx * group.order + k
            vals[idx] = v
        return cls(group, module, degree, vals, check)

    @classmethod
    def zero(cls, group: FiniteGroup, module: GModule, degree: int) -> "CochainClass":
        return cls(group, module, degree,
                   np.zeros((group.order ** degree, module.rank), np.int64), False)

    def value(self, *args: int) -> tuple[int, ...]:
        idx = 0
        for k in args:
            idx = idx * self.group.order + k
        return tuple(int(x) for x in self.values[idx])

    @property
    def cocycle(self) -> dict[tuple[int, ...], tuple[int, ...]]:
        """Nonzero values, keyed by argument tuples."""
        out = {}
        for idx, key in enumerate(itertools.product(range(self.group.order), repeat=self.degree)):
            row = self.values[idx]
            if np.any(row):
                out[key] = tuple(int(x) for x in row)
        return out

    @property
    def is_normalized(self) -> bool:
        if self.degree == 0:
            return True
        e = self.group.identity_index
        T = _tuples(self.group, self.degree)
        mask = np.any(T == e, axis=1)
        return not np.any(self.values[mask])

    def __eq__(self, other):
        return isinstance(other, CochainClass) and self.group == other.group \
            and self.module == other.module and self.degree == other.degree \
            and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.group, self.module, self.degree, self.values.tobytes()))

    def to_json(self) -> dict:
        return {",".join(map(str, k)): list(v) for k, v in self.cocycle.items()}


def add_classes(a: CochainClass, b: CochainClass) -> CochainClass:
    """Pointwise sum (the product of the multiplicative cocycles)."""
    if a.group != b.group or a.module != b.module or a.degree != b.degree:
        raise ShapeMismatch("cochains differ in group, module or degree")
    return CochainClass(a.group, a.module, a.degree, a.values + b.values, False)


def scale_class(a: CochainClass, k: int) -> CochainClass:
    return CochainClass(a.group, a.module, a.degree, a.values * k, False)


def inflate_coefficients(c: CochainClass, embedding: ModuleMap) -> CochainClass:
    """Push a cocycle forward along an equivariant module map."""
    if embedding.source != c.module:
        raise ShapeMismatch("embedding source is not the cocycle's module")
    embedding.check_equivariant()
    A = np.array(embedding.matrix, np.int64).reshape(embedding.target.rank, embedding.source.rank)
    return CochainClass(c.group, embedding.target, c.degree, c.values @ A.T, False)


def inflate_group(c: CochainClass, source: FiniteGroup, images: Sequence[int]) -> CochainClass:
    """Pull a cocycle back along a surjection ``source -> c.group`` given by element images."""
    check_homomorphism(source, c.group, images, surjective=True)
    module = c.module.pullback(source, images)
    T = _tuples(source, c.degree)
    img = np.asarray(images, np.int64)
    idx = _flat_index(img[T], c.group.order) if c.degree else np.zeros(1, np.int64)
    return CochainClass(source, module, c.degree, c.values[idx], False)


# --- differentials of the normalized / full complex ----------------------------


def _check_budget(G: FiniteGroup, M: GModule, n: int, budget: int) -> None:
    """Pre-check for work on degree-n cochains (n counts arguments of the larger side)."""
    work = G.order ** n * max(M.rank, 1)
    dense = ((G.order - 1) ** n) * ((G.order - 1) ** max(n - 1, 0)) * M.rank ** 2
    if work > budget or dense > budget:
        raise BudgetExceeded(
            f"cochains on {G.label}^{n} with {M.rank} factors exceed the work budget {budget}",
            {"group_order": G.order, "arguments": n, "factors": M.rank,
             "cochain_entries": work, "matrix_entries": dense, "budget": budget})


@dataclass(frozen=True)
class _Complex:
    """Index data for one slice of the bar complex."""

    group: FiniteGroup
    normalized: bool

    @property
    def elements(self) -> tuple[int, ...]:
        G = self.group
        return G.non_identity if self.normalized else tuple(G.elements)

    def tuples(self, n: int) -> np.ndarray:
        E = self.elements
        if n == 0:
            return np.zeros((1, 0), np.int64)
        return np.array(list(itertools.product(E, repeat=n)), np.int64).reshape(-1, n)

    def size(self, n: int) -> int:
        return len(self.elements) ** n

    def positions(self) -> np.ndarray:
        pos = np.full(self.group.order, -1, np.int64)
        for i, g in enumerate(self.elements):
            pos[g] = i
        return pos

    def restrict(self, values: np.ndarray, n: int) -> np.ndarray:
        """Dense full cochain -> coordinate vector on this complex."""
        T = self.tuples(n)
        idx = _flat_index(T, self.group.order) if n else np.zeros(1, np.int64)
        return values[idx].reshape(-1)

    def extend(self, vec: np.ndarray, n: int, rank: int) -> np.ndarray:
        """Coordinate vector -> dense full cochain."""
        full = np.zeros((self.group.order ** n, rank), np.int64)
        T = self.tuples(n)
        idx = _flat_index(T, self.group.order) if n else np.zeros(1, np.int64)
        full[idx] = np.asarray(vec, np.int64).reshape(-1, rank)
        return full


def differential_matrix(G: FiniteGroup, M: GModule, n: int, normalized: bool = True) -> np.ndarray:
    """Integer matrix of d: C^n -> C^{n+1}, rows indexed by (n+1)-tuples x coordinates."""
    cx = _Complex(G, normalized)
    r = M.rank
    pos = cx.positions()
    T = cx.tuples(n + 1)
    rows_t = T.shape[0]
    cols_t = cx.size(n)
    base = len(cx.elements)
    mul = _mul_array(G)
    A = _action_array(M)
    D = np.zeros((rows_t * r, cols_t * r), np.int64)
    row_ids = np.arange(rows_t)

    def src_index(S):
        P = pos[S]
        ok = np.all(P >= 0, axis=1) if S.shape[1] else np.ones(S.shape[0], bool)
        idx = np.zeros(S.shape[0], np.int64)
        for j in range(S.shape[1]):
            idx = idx * base + np.where(P[:, j] >= 0, P[:, j], 0)
        return idx, ok

    def add_identity_term(S, sign):
        idx, ok = src_index(S)
        for a in range(r):
            np.add.at(D, (row_ids[ok] * r + a, idx[ok] * r + a), sign)

    idx0, ok0 = src_index(T[:, 1:])
    acts = A[T[:, 0]]
    for a in range(r):
        for b in range(r):
            np.add.at(D, (row_ids[ok0] * r + a, idx0[ok0] * r + b), acts[ok0, a, b])
    for i in range(1, n + 1):
        merged = np.concatenate(
            [T[:, :i - 1], mul[T[:, i - 1], T[:, i]][:, None], T[:, i + 1:]], axis=1)
        add_identity_term(merged, (-1) ** i)
    add_identity_term(T[:, :n], (-1) ** (n + 1))
    return D


# --- homology of  C^{n-1} --D1--> C^n --D2--> C^{n+1}  over Z^r / relations ------


@dataclass(frozen=True, eq=False)
class _Homology:
    structure: AbelianGroupStructure
    orders: tuple[int, ...]            # order of each generator (0 = infinite)
    generators: tuple[np.ndarray, ...]  # cocycle vectors in module coordinates
    coordinates: object                 # vector -> tuple of class coordinates
    solve: object                       # vector -> preimage under D1 or None


def _relation_columns(factors_per_slot: Sequence[int]):
    cols = [(i, n) for i, n in enumerate(factors_per_slot) if n]
    return cols


def _integer_homology(D2: np.ndarray, D1: np.ndarray, slot_factors_src, slot_factors_tgt):
    """Homology over Z with relations (used for free summands and as an oracle)."""
    c = D2.shape[1]
    tgt_rel = _relation_columns(slot_factors_tgt)
    src_rel = _relation_columns(slot_factors_src)
    # kernel lattice L = {x : D2 x in Rel_tgt}
    big = [list(map(int, D2[i])) + [n if j == i else 0 for j, n in tgt_rel]
           for i in range(D2.shape[0])]
    if big:
        diag, _, _, Q = int_snf(big, want_Q=True)
        width = c + len(tgt_rel)
        kernel = [[Q[i][j] for i in range(c)] for j in range(len(diag), width)]
    else:
        kernel = [[int(i == j) for i in range(c)] for j in range(c)]
    k = len(kernel)
    L = [[kernel[j][i] for j in range(k)] for i in range(c)]  # c x k
    # boundaries B = im D1 + Rel_src, expressed in the basis of L
    bcols = [list(map(int, D1[:, j])) for j in range(D1.shape[1])]
    bcols += [[n if i == s else 0 for i in range(c)] for s, n in src_rel]
    if k == 0:
        structure = AbelianGroupStructure()
        return _Homology(structure, (), (), lambda v: (), _int_solver(D1, src_rel, c))
    Ld, LP, _, LQ = int_snf(L, want_P=True, want_Q=True)

    def in_basis(v):
        w = [sum(LP[i][t] * v[t] for t in range(c)) for i in range(c)]
        y = []
        for i in range(k):
            if w[i] % Ld[i]:
                raise ArithmeticError("vector is not in the kernel lattice")
            y.append(w[i] // Ld[i])
        if any(w[i] for i in range(k, c)):
            raise ArithmeticError("vector is not in the kernel lattice")
        return [sum(LQ[i][t] * y[t] for t in range(k)) for i in range(k)]

    X = [in_basis(col) for col in bcols]  # each is a k-vector
    Xm = [[X[j][i] for j in range(len(X))] for i in range(k)] if X else [[] for _ in range(k)]
    if X:
        xd, XP, _, XQ = int_snf(Xm, want_P=True, want_Q=True)
    else:
        xd, XP, XQ = [], [[int(i == j) for j in range(k)] for i in range(k)], \
            [[int(i == j) for j in range(k)] for i in range(k)]
    # XP^{-1} columns span Z^k; component i has order xd[i] (or infinite past the rank)
    XPinv = _int_inverse(XP)
    orders, gens, comp = [], [], []
    for i in range(k):
        d = xd[i] if i < len(xd) else 0
        if d == 1:
            continue
        coeff = [XPinv[t][i] for t in range(k)]
        vec = [sum(L[s][t] * coeff[t] for t in range(k)) for s in range(c)]
        orders.append(d)
        gens.append(np.array(vec, np.int64))
        comp.append(i)

    def coords(v):
        y = in_basis([int(x) for x in v])
        z = [sum(XP[i][t] * y[t] for t in range(k)) for i in range(k)]
        return tuple((z[i] % orders[j]) if orders[j] else z[i] for j, i in enumerate(comp))

    structure = AbelianGroupStructure.from_orders(orders)
    return _Homology(structure, tuple(orders), tuple(gens), coords,
                     _int_solver(D1, src_rel, c))


def _int_inverse(P):
    """Inverse of a unimodular integer matrix (via Fractions-free Gauss-Jordan)."""
    from fractions import Fraction

    n = len(P)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(P)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    out = [[M[i][n + j] for j in range(n)] for i in range(n)]
    assert all(x.denominator == 1 for row in out for x in row)
    return [[int(x) for x in row] for row in out]


def _int_solver(D1: np.ndarray, src_rel, c: int):
    def solve(v):
        if D1.shape[1] == 0:
            return None if any(_reduce_vec(v, src_rel)) else np.zeros(0, np.int64)
        cols = D1.shape[1]
        A = [list(map(int, D1[i])) + [n if s == i else 0 for s, n in src_rel] for i in range(c)]
        x = int_solve(A, [int(t) for t in v], cols + len(src_rel))
        return None if x is None else np.array(x[:cols], np.int64)
    return solve


def _reduce_vec(v, rel):
    out = [int(x) for x in v]
    for s, n in rel:
        out[s] %= n
    return out


# --- p-local homology over Z/p^e ---------------------------------------------


def _local_homology(D2, D1, slot_exps_src, slot_exps_tgt, p, e):
    """Homology of a complex of Z/p^e-modules presented with relations p^(e_i) on slot i."""
    q = p ** e
    c = D2.shape[1]
    tgt_rel = [i for i, x in enumerate(slot_exps_tgt) if x < e]
    src_rel = [i for i, x in enumerate(slot_exps_src) if x < e]
    # Z = {x : D2 x in Rel_tgt}
    if D2.shape[0]:
        R = np.zeros((D2.shape[0], len(tgt_rel)), np.int64)
        for j, i in enumerate(tgt_rel):
            R[i, j] = p ** slot_exps_tgt[i]
        big = np.concatenate([D2 % q, R], axis=1)
        vals, _, Q = local_snf(big, p, e, want_Q=True)
        gens = []
        for t in range(big.shape[1]):
            if t < len(vals):
                if vals[t] > 0:
                    gens.append(Q[:c, t] * p ** (e - vals[t]))
            else:
                gens.append(Q[:c, t])
        Lgen = (np.stack(gens, axis=1) % q) if gens else np.zeros((c, 0), np.int64)
    else:
        Lgen = np.eye(c, dtype=np.int64)
    # B = im D1 + Rel_src
    S = np.zeros((c, len(src_rel)), np.int64)
    for j, i in enumerate(src_rel):
        S[i, j] = p ** slot_exps_src[i]
    B = np.concatenate([D1 % q, S], axis=1)
    bvals, BP, _ = local_snf(B, p, e, want_P=True)
    cexp = list(bvals) + [e] * (c - len(bvals))
    keep = [i for i in range(c) if cexp[i] > 0]
    scale = np.array([p ** (e - cexp[i]) for i in keep], np.int64)

    def to_quotient(X):
        return (scale[:, None] * ((BP[keep] @ X) % q)) % q

    W = to_quotient(Lgen) if keep else np.zeros((0, Lgen.shape[1]), np.int64)
    wvals, WP, WQ = local_snf(W, p, e, want_P=True, want_Q=True)
    orders = tuple(p ** (e - v) for v in wvals)
    gens = tuple(((Lgen @ WQ[:, j]) % q) for j in range(len(wvals)))

    def coords(v):
        w = to_quotient(np.asarray(v, np.int64).reshape(-1, 1))[:, 0]
        z = (WP @ w) % q
        return tuple(int(z[j] // p ** wvals[j]) % orders[j] for j in range(len(wvals)))

    def solve(v):
        if not B.shape[1]:
            return None if np.any(np.asarray(v) % q) else np.zeros(0, np.int64)
        x = local_solve(B, np.asarray(v, np.int64) % q, p, e)
        return None if x is None else x[:D1.shape[1]]

    return orders, gens, coords, solve


def _local_data(M: GModule, p: int):
    """p-part of a finite module: exponents, CRT lifts and the induced action."""
    exps = [factorint(n).get(p, 0) for n in M.invariant_factors]
    e = max(exps)
    lifts = []
    for n, x in zip(M.invariant_factors, exps):
        pe, m = p ** x, n // p ** x
        lifts.append((m * pow(m, -1, pe)) % n if pe > 1 else 0)
    q = p ** e
    acts = []
    for A in M.action:
        acts.append(tuple(
            tuple((A[i][j] * lifts[j]) % (p ** exps[i]) for j in range(M.rank))
            for i in range(M.rank)))
    return tuple(exps), e, tuple(lifts), tuple(acts), q


@lru_cache(maxsize=256)
def _local_cohomology_cached(G: FiniteGroup, p: int, exps: tuple, e: int,
                             acts: tuple, n: int, normalized: bool):
    from .modules import GModule as _GM  # local module over Z/p^(e_i)

    Mp = _GM(G, tuple(p ** x for x in exps), acts)
    cx = _Complex(G, normalized)
    D2 = differential_matrix(G, Mp, n, normalized)
    D1 = differential_matrix(G, Mp, n - 1, normalized) if n > 0 \
        else np.zeros((Mp.rank, 0), np.int64)
    src = list(exps) * cx.size(n)
    tgt = list(exps) * cx.size(n + 1)
    return _local_homology(D2, D1, src, tgt, p, e)


@dataclass(frozen=True, eq=False)
class CohomologyGroup:
    """H^n(G; M) together with representative cocycles and a class-coordinate map."""

    group: FiniteGroup
    module: GModule
    degree: int
    structure: AbelianGroupStructure
    generators: tuple[CochainClass, ...]
    generator_orders: tuple[int, ...]
    _coords: object = field(repr=False)
    _solve: object = field(repr=False)
    normalized: bool = True

    def coordinates(self, c: CochainClass) -> tuple[int, ...]:
        """Coordinates of the class of ``c`` against ``generators`` (mod their orders)."""
        _check_same(self, c)
        cx = _Complex(self.group, self.normalized)
        if self.normalized and not c.is_normalized:
            raise ValueError("coordinates need a normalized cocycle; use is_coboundary")
        return self._coords(cx.restrict(c.values, self.degree))

    def __str__(self):
        return f"H^{self.degree}({self.group.label}; {self.module.label}) = {self.structure}"


def _check_same(H, c):
    if c.group != H.group or c.module != H.module or c.degree != H.degree:
        raise ShapeMismatch("cocycle does not match this cohomology group")


def _compute(G: FiniteGroup, M: GModule, n: int, normalized: bool, method: str,
             budget: int) -> CohomologyGroup:
    if n < 0:
        raise ValueError("degree must be non-negative")
    _check_budget(G, M, n + 1, budget)
    cx = _Complex(G, normalized)
    r = M.rank
    if method == "auto":
        method = "local" if M.is_finite else "integer"
    if method == "local" and not M.is_finite:
        raise ValueError("the p-local method needs a finite module")

    if method == "integer":
        D2 = differential_matrix(G, M, n, normalized)
        D1 = differential_matrix(G, M, n - 1, normalized) if n > 0 \
            else np.zeros((r, 0), np.int64)
        src = list(M.invariant_factors) * cx.size(n)
        tgt = list(M.invariant_factors) * cx.size(n + 1)
        h = _integer_homology(D2, D1, src, tgt)
        orders, gens, coords, solve = h.orders, h.generators, h.coordinates, h.solve
    else:
        orders, gens, coords, solve = _combine_primes(G, M, n, normalized)

    classes = tuple(
        CochainClass(G, M, n, cx.extend(vec, n, r), check=False) for vec in gens)
    structure = AbelianGroupStructure.from_orders(orders)
    return CohomologyGroup(G, M, n, structure, classes, tuple(orders), coords, solve, normalized)


def _combine_primes(G, M, n, normalized):
    primes = sorted({p for f in M.invariant_factors for p in factorint(f)})
    r = M.rank
    factors = M.invariant_factors
    parts = []
    for p in primes:
        exps, e, lifts, acts, q = _local_data(M, p)
        orders, gens, coords, solve = _local_cohomology_cached(G, p, exps, e, acts, n, normalized)
        parts.append((p, lifts, orders, gens, coords, solve))

    def lift(vec, lifts):
        v = np.asarray(vec, np.int64).reshape(-1, r) * np.array(lifts, np.int64)
        return v.reshape(-1)

    def reduce(v):
        w = np.asarray(v, np.int64).reshape(-1, r) % np.array(factors, np.int64)
        return w.reshape(-1)

    # invariant factor k = sum over primes of the k-th largest p-component
    per_prime = []
    for p, lifts, orders, gens, coords, solve in parts:
        ranked = sorted(range(len(orders)), key=lambda j: -orders[j])
        per_prime.append((lifts, ranked, orders, gens))
    length = max((len(x[1]) for x in per_prime), default=0)
    out_orders, out_gens = [], []
    for k in range(length):
        total = np.zeros(0, np.int64)
        order = 1
        for lifts, ranked, orders, gens in per_prime:
            if k < len(ranked):
                j = ranked[k]
                term = lift(gens[j], lifts)
                total = term if total.size == 0 else total + term
                order *= orders[j]
        out_orders.append(order)
        out_gens.append(reduce(total))
    # ascending divisibility order
    perm = list(range(length))[::-1]
    out_orders = [out_orders[k] for k in perm]
    out_gens = [out_gens[k] for k in perm]

    def coords(vec):
        result = []
        local = []
        for (p, lifts, orders, gens, cf, solve), (_, ranked, _, _) in zip(parts, per_prime):
            local.append((cf(np.asarray(vec, np.int64)), ranked, orders))
        for k in perm:
            x, mod = 0, 1
            for cvals, ranked, orders in local:
                if k < len(ranked):
                    j = ranked[k]
                    x = _crt(x, mod, cvals[j], orders[j])
                    mod *= orders[j]
            result.append(x % mod)
        return tuple(result)

    def solve(vec):
        total = None
        for p, lifts, orders, gens, cf, sv in parts:
            x = sv(np.asarray(vec, np.int64))
            if x is None:
                return None
            term = lift(x, lifts)
            total = term if total is None else total + term
        if total is None:
            cols = len(vec) // r
            return np.zeros(0, np.int64) if cols == 0 else None
        return reduce(total)

    return out_orders, out_gens, coords, solve


def _crt(a, m, b, n):
    if m == 1:
        return b % n
    return (a + m * ((b - a) * pow(m, -1, n) % n)) % (m * n)


def bar_cohomology(G: FiniteGroup, M: GModule, n: int,
                   work_budget: int = DEFAULT_WORK_BUDGET,
                   method: str = "auto") -> CohomologyGroup:
    """H^n(G; M) from the normalized bar complex.

    ``method`` is ``"local"`` (finite modules, one prime at a time over
    Z/p^e), ``"integer"`` (exact integer reduction) or ``"auto"``.
    """
    if M.group != G:
        raise ValueError("module is defined over a different group")
    return _compute(G, M, n, True, method, work_budget)


@dataclass(frozen=True)
class CoboundaryResult:
    is_coboundary: bool
    witness: CochainClass | None = None

    def __bool__(self):
        return self.is_coboundary


def is_coboundary(c: CochainClass, work_budget: int = DEFAULT_WORK_BUDGET) -> CoboundaryResult:
    """Decide whether ``c = d(b)``; the witness ``b`` is checked by applying d."""
    G, M, n = c.group, c.module, c.degree
    if n == 0:
        return CoboundaryResult(not np.any(c.values), None)
    normalized = c.is_normalized
    H = _compute(G, M, n, normalized, "auto", work_budget)
    cx = _Complex(G, normalized)
    x = H._solve(cx.restrict(c.values, n))
    if x is None:
        return CoboundaryResult(False, None)
    witness = CochainClass(G, M, n - 1, cx.extend(x, n - 1, M.rank), check=False)
    if not np.array_equal(coboundary(G, M, n - 1, witness.values), c.values):
        raise ArithmeticError("internal error: witness does not bound the cocycle")
    return CoboundaryResult(True, witness)


def class_coordinates(c: CochainClass, work_budget: int = DEFAULT_WORK_BUDGET):
    """Coordinates of ``[c]`` in ``bar_cohomology(c.group, c.module, c.degree)``."""
    return bar_cohomology(c.group, c.module, c.degree, work_budget).coordinates(c)


# --- stabilization along coefficient towers ------------------------------------


def subgroup_structure(vectors: Sequence[Sequence[int]], moduli: Sequence[int]) -> AbelianGroupStructure:
    """Structure of the subgroup of ``Z/m1 + ... + Z/mr`` generated by ``vectors``."""
    r, k = len(moduli), len(vectors)
    if k == 0 or r == 0:
        return AbelianGroupStructure()
    rel = [(i, m) for i, m in enumerate(moduli) if m]
    big = [[int(vectors[j][i]) for j in range(k)] + [m if s == i else 0 for s, m in rel]
           for i in range(r)]
    diag, _, _, Q = int_snf(big, want_Q=True)
    width = k + len(rel)
    kernel = [[Q[i][j] for i in range(k)] for j in range(len(diag), width)]
    if not kernel:
        return AbelianGroupStructure.from_orders([0] * k)
    Km = [[kernel[j][i] for j in range(len(kernel))] for i in range(k)]
    kd, _, _, _ = int_snf(Km)
    orders = list(kd) + [0] * (k - len(kd))
    return AbelianGroupStructure.from_orders(orders)


def stabilized_cohomology(m: int, tower: Sequence[ModuleMap], n: int,
                          work_budget: int = DEFAULT_WORK_BUDGET,
                          strict: bool = True) -> AbelianGroupStructure:
    """Image of H^n at the bottom of a coefficient tower in H^n at the top.

    ``tower`` is a chain of equivariant embeddings ``M1 -> M2 -> ... -> Mk``
    over C_m.  Raises ``NotStabilized`` if the images in the last two levels
    differ (unless ``strict`` is false).  In degree 0 the answer is the
    invariants of the top level.
    """
    if len(tower) < 2:
        raise ValueError("need at least two embeddings (three levels)")
    for f in tower:
        f.check_equivariant()
        if f.source.group.order != m:
            raise ValueError("tower is not over C_m")
        if f.source.is_finite and f.target.is_finite:
            src_order = prod(f.source.invariant_factors)
            tgt_order = prod(f.target.invariant_factors)
            if tgt_order < 2 * src_order:
                raise ValueError("each tower step must at least double the coefficients")
    for a, b in zip(tower, tower[1:]):
        if a.target != b.source:
            raise ValueError("tower maps do not compose")
    levels = [tower[0].source] + [f.target for f in tower]
    G = levels[0].group
    if n == 0:
        return bar_cohomology(G, levels[-1], 0, work_budget).structure
    H1 = bar_cohomology(G, levels[0], n, work_budget)
    images = []
    current = list(H1.generators)
    for f, level in zip(tower, levels[1:]):
        current = [inflate_coefficients(c, f) for c in current]
        H = bar_cohomology(G, level, n, work_budget)
        coords = [H.coordinates(c) for c in current]
        images.append(subgroup_structure(coords, H.generator_orders))
    if strict and images[-1] != images[-2]:
        raise NotStabilized(
            f"image changed from {images[-2]} to {images[-1]} in the last step")
    return images[-1]


__all__ = [
    "AbelianGroupStructure", "BudgetExceeded", "CoboundaryResult", "CochainClass",
    "CohomologyGroup", "NotCocycle", "NotEquivariant", "NotStabilized", "ShapeMismatch",
    "add_classes", "bar_cohomology", "class_coordinates", "coboundary",
    "differential_matrix", "inflate_coefficients", "inflate_group", "is_coboundary",
    "scale_class", "stabilized_cohomology", "subgroup_structure",
]
