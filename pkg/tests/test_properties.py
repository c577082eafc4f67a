"""Property suites over the invariants each module promises."""

from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from wittkit import fixtures
from wittkit.equivariant import equivariant_fusion_ring, equivariant_simples
from wittkit.fusionring import (
    AlgebraicReal,
    check_fusion_axioms,
    fpdim_category,
    fpdim_multiplicativity_check,
    fpdim_object,
    shipped_rings,
)
from wittkit.galoiswitt import (
    WittFamilyClass,
    galois_grading_check,
    skeleton_from_grading,
    tensor_decompose,
    witt_class_is_trivial,
    witt_class_product,
)
from wittkit.groupcoh import (
    CochainClass,
    GModule,
    add_classes,
    bar_cohomology,
    coboundary,
    cyclic_cohomology,
    cyclic_module,
    differential_matrix,
    inflate_group,
    is_coboundary,
    order_dividing_multipliers,
)
from wittkit.groupcoh.snf import int_snf, invariant_factors
from wittkit.groups import (
    FiniteGroup,
    abelian_group,
    check_homomorphism,
    cyclic_group,
)
from wittkit.numfield import automorphisms, field_from_spec, make_cyclotomic, rationals
from wittkit.pointedcat import (
    PointedBraidedCategory,
    centralizer,
    check_hexagons,
    drinfeld_center_pointed,
)

SLOW = settings(max_examples=25, deadline=None,
                suppress_health_check=[HealthCheck.too_slow])


def symmetric_group_3() -> FiniteGroup:
    perms = list(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(p[q[k]] for k in range(3))] for q in perms] for p in perms]
    return FiniteGroup(6, table, idx[(0, 1, 2)], "S3")


def sign_of(p) -> int:
    return (-1) ** sum(1 for a, b in itertools.combinations(p, 2) if a > b)


def sign_module(N: int) -> GModule:
    G = symmetric_group_3()
    perms = list(itertools.permutations(range(3)))
    return GModule(G, (N,), tuple(((sign_of(p),),) for p in perms), f"Z/{N}(sign)")


def sample_modules():
    out = []
    for m in (2, 3, 4):
        for N in (0, 2, 4, 6):
            for a in order_dividing_multipliers(m, N)[:3]:
                out.append(cyclic_module(m, N, a))
    V = abelian_group((2, 2))
    out.append(GModule(V, (2, 2), tuple(
        ((1, V.coords(g)[0]), (0, 1)) for g in V.elements)))
    out.append(sign_module(4))
    out.append(sign_module(0))
    return out


# --- groupcoh ------------------------------------------------------------------------


@pytest.mark.parametrize("M", sample_modules(), ids=lambda M: f"{M.group.label}-{M.label or M.invariant_factors}")
@pytest.mark.parametrize("normalized", [True, False])
def test_d_squared_is_zero(M, normalized):
    mods = np.array([n if n else 0 for n in M.invariant_factors], dtype=object)
    for n in range(0, 3 if M.group.order > 4 else 4):
        D1 = differential_matrix(M.group, M, n, normalized).astype(object)
        D2 = differential_matrix(M.group, M, n + 1, normalized).astype(object)
        prod = D2 @ D1
        r = M.rank
        for i in range(prod.shape[0]):
            n_i = mods[i % r]
            row = prod[i]
            assert all((x % n_i == 0) if n_i else x == 0 for x in row)


@SLOW
@given(st.sampled_from(sample_modules()), st.integers(0, 3), st.randoms(use_true_random=False))
def test_coboundary_of_coboundary(M, n, rnd):
    G = M.group
    if G.order > 4 and n > 2:
        n = 2
    vals = np.array([[rnd.randrange(0, max(f, 5)) for f in M.invariant_factors]
                     for _ in range(G.order ** n)], np.int64).reshape(-1, M.rank)
    dd = coboundary(G, M, n + 1, coboundary(G, M, n, vals))
    assert all(not any(M.reduce(row)) for row in dd.tolist())


@SLOW
@given(st.sampled_from([2, 3, 4, 6]), st.integers(1, 4), st.integers(1, 16), st.data())
def test_bar_matches_periodic_oracle(m, n, N, data):
    a = data.draw(st.sampled_from(order_dividing_multipliers(m, N)))
    M = cyclic_module(m, N, a)
    assert bar_cohomology(M.group, M, n).structure == cyclic_cohomology(m, M, n)


def random_cocycle(H, rnd) -> CochainClass:
    c = CochainClass.zero(H.generators[0].group, H.generators[0].module,
                          H.generators[0].degree) if H.generators else None
    for g in H.generators:
        c = add_classes(c, CochainClass(g.group, g.module, g.degree,
                                        g.values * rnd.randrange(0, 5), False))
    return c


def test_inflate_group_functorial_on_random_cocycles():
    rnd = random.Random(11)
    C2, C4, C8 = cyclic_group(2), cyclic_group(4), cyclic_group(8)
    M = cyclic_module(C2, 8, -1)
    p = [g % 2 for g in range(4)]      # C4 -> C2
    q = [g % 4 for g in range(8)]      # C8 -> C4
    composite = [p[q[g]] for g in range(8)]
    check_homomorphism(C8, C2, composite)
    checked = 0
    for n in (1, 2, 3):
        H = bar_cohomology(C2, M, n)
        for _ in range(7 if n < 3 else 6):
            c = random_cocycle(H, rnd)
            two_step = inflate_group(inflate_group(c, C4, p), C8, q)
            one_step = inflate_group(c, C8, composite)
            assert np.array_equal(two_step.values, one_step.values)
            checked += 1
    assert checked == 20


@SLOW
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=2, max_size=4))
def test_snf_factorization(rows):
    diag, P, _, Q = int_snf(rows, want_P=True, want_Q=True)
    A = np.array(rows, dtype=object)
    D = np.array(P, dtype=object) @ A @ np.array(Q, dtype=object)
    expected = np.zeros_like(D)
    for i, d in enumerate(diag):
        expected[i, i] = d
    assert (D == expected).all()
    # the diagonal need not be a divisor chain; its canonical form must match sympy's
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    S = smith_normal_form(Matrix(rows), domain=ZZ)
    oracle = [abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0]
    assert invariant_factors([d for d in diag if d]) == invariant_factors(oracle)


# --- numfield --------------------------------------------------------------------------

FIELD_SPECS = ["Q", "Q(i)", "Q(zeta_3)", "Q(zeta_8)", "Q(zeta_12)", "Q(sqrt2)", "Q(cbrt2)"]


@pytest.mark.parametrize("spec", FIELD_SPECS)
def test_automorphisms_are_ring_homomorphisms(spec):
    F = field_from_spec(spec)
    autos = automorphisms(F)
    rnd = random.Random(hash(spec) & 0xFFFF)

    def element():
        return F.element([rnd.randint(-20, 20) / rnd.randint(1, 6) for _ in range(F.degree)])

    for _ in range(1000):
        a, b = element(), element()
        for s in autos:
            assert s(a + b) == s(a) + s(b)
            assert s(a * b) == s(a) * s(b)
    assert autos[0].is_identity()
    for s, t in itertools.product(autos, repeat=2):
        assert s.compose(t) in autos


@SLOW
@given(st.sampled_from(FIELD_SPECS), st.randoms(use_true_random=False))
def test_field_inverse(spec, rnd):
    F = field_from_spec(spec)
    x = F.element([rnd.randint(-9, 9) for _ in range(F.degree)])
    if x:
        assert x * (1 / x) == 1


# --- pointedcat ------------------------------------------------------------------------


def bicharacter_categories():
    out = [drinfeld_center_pointed(cyclic_group(2), make_cyclotomic(4)),
           drinfeld_center_pointed(cyclic_group(3), make_cyclotomic(3))]
    rnd = random.Random(5)
    for factors, e in (((2, 2), 4), ((3, 3), 3), ((9,), 9), ((2, 4), 4), ((8,), 8)):
        A = abelian_group(factors)
        F = make_cyclotomic(e)
        exps = [[rnd.randrange(e) for _ in factors] for _ in factors]

        def c(g, h, A=A, F=F, exps=exps, e=e):
            x, y = A.coords(g), A.coords(h)
            k = sum(exps[i][j] * x[i] * y[j] * (e // factors[i]) * (e // factors[j])
                    for i in range(len(factors)) for j in range(len(factors)))
            return F.root_of_unity(e, k % e)
        out.append(PointedBraidedCategory(A, F, None, c))
    return out


@pytest.mark.parametrize("cat", bicharacter_categories(), ids=lambda c: c.group.label)
def test_centralizer_reverses_inclusion(cat):
    assert cat.group.order <= 9
    assert check_hexagons(cat)
    subs = cat.subgroups
    cents = {H.element_indices: centralizer(cat, H) for H in subs}
    for H, K in itertools.product(subs, repeat=2):
        if H <= K:
            assert cents[K.element_indices] <= cents[H.element_indices]
        assert H <= centralizer(cat, cents[H.element_indices])


# --- fusionring --------------------------------------------------------------------------


@pytest.mark.parametrize("ring", shipped_rings(), ids=lambda r: r.label)
def test_fpdim_multiplicative_on_shipped_rings(ring):
    assert check_fusion_axioms(ring)
    assert fpdim_multiplicativity_check(ring)
    D = fpdim_category(ring)
    assert float(D) >= ring.rank - 1e-9 or any(e.dim > 1 for e in ring.end_data)


@SLOW
@given(st.integers(-20, 20), st.integers(1, 9), st.integers(2, 7))
def test_algebraic_real_arithmetic_matches_floats(p, q, d):
    import sympy

    x = sympy.Symbol("x")
    r = AlgebraicReal.largest_root(sympy.Poly(x ** 2 - d, x))
    a = AlgebraicReal.rational(p) / q
    s = r + a
    assert float(s) == pytest.approx(d ** 0.5 + p / q)
    assert (s - a) == r
    assert float(r * a) == pytest.approx(d ** 0.5 * p / q, abs=1e-12)


# --- equivariant -------------------------------------------------------------------------


@pytest.mark.parametrize("action", [fixtures.real_witt_action(), fixtures.vect_qi_action(1)],
                         ids=["real-witt", "qi+"])
def test_equivariantization_dimension(action):
    simples = equivariant_simples(action)
    covered = sorted(g for S in simples for g in set(S.underlying))
    assert covered == list(action.group.elements)
    ring = equivariant_fusion_ring(action, simples)
    assert check_fusion_axioms(ring)
    assert fpdim_multiplicativity_check(ring)
    assert fpdim_category(ring) == action.group.order
    for i, S in enumerate(simples):
        d = fpdim_object(ring, i)
        assert d == len(S.underlying)


# --- galoiswitt ------------------------------------------------------------------------


@pytest.mark.parametrize("spec", ["Q(i)", "Q(zeta_3)", "Q(zeta_8)", "Q(sqrt2)", "Q(cbrt2)"])
def test_decomposition_degree_sum(spec):
    K = field_from_spec(spec)
    dec = tensor_decompose(rationals(), K)
    assert sum(dec.degrees) == K.degree
    if dec.is_galois:
        assert len(dec.components) == K.degree
        assert all(c.field == K and c.automorphism is not None for c in dec.components)


def test_witt_product_laws():
    rnd = random.Random(3)
    C2 = cyclic_group(2)
    M = cyclic_module(C2, 8, -1)
    H = bar_cohomology(C2, M, 4)
    zero = WittFamilyClass(C2, M, CochainClass.zero(C2, M, 4))

    def random_class():
        c = random_cocycle(H, rnd)
        # add a random coboundary so representatives differ
        b = np.array([[rnd.randrange(8)] for _ in range(8)], np.int64)
        vals = c.values + coboundary(C2, M, 3, b)
        return WittFamilyClass(C2, M, CochainClass(C2, M, 4, vals))

    for _ in range(5):
        a, b, c = random_class(), random_class(), random_class()
        left = witt_class_product(witt_class_product(a, b), c).class4
        right = witt_class_product(a, witt_class_product(b, c)).class4
        assert is_coboundary(add_classes(left, CochainClass(C2, M, 4, -right.values, False))).is_coboundary
        ab, ba = witt_class_product(a, b).class4, witt_class_product(b, a).class4
        assert np.array_equal(M_reduce(M, ab.values), M_reduce(M, ba.values))
        unit = witt_class_product(a, zero).class4
        assert np.array_equal(M_reduce(M, unit.values), M_reduce(M, a.class4.values))
    assert witt_class_is_trivial(zero, 1).verdict == "Trivial"


def M_reduce(M, values):
    return np.array([M.reduce(row) for row in values.tolist()])


def grading_skeletons():
    """Group-graded skeletons A -> Gamma with |A| >= 3."""
    cases = []
    for a_factors, g_order in (((4,), 2), ((6,), 2), ((6,), 3), ((2, 2), 2), ((8,), 4),
                               ((3,), 1), ((2, 4), 2), ((9,), 3), ((12,), 6), ((6,), 6)):
        A = abelian_group(a_factors)
        G = cyclic_group(g_order)
        # surjection via the first coordinate
        images = [A.coords(a)[0] % g_order for a in A.elements]
        check_homomorphism(A, G, images)
        cases.append(skeleton_from_grading(A, G, images))
    return cases


def test_grading_corruptions_all_detected():
    rnd = random.Random(2024)
    skeletons = grading_skeletons()
    assert all(galois_grading_check(s) for s in skeletons)
    corrupted = []
    while len(corrupted) < 50:
        s = rnd.choice(skeletons)
        if s.group.order < 2:
            continue
        i = rnd.randrange(len(s.objects))
        old = s.objects[i].galois_degree
        new = rnd.choice([g for g in s.group.elements if g != old])
        corrupted.append(s.with_degree(i, new))
    detected = sum(not galois_grading_check(s) for s in corrupted)
    assert detected == 50


def test_incoherent_gamma_on_unit():
    # gamma(e) = -1 is not monoidal, so only the simples are meaningful
    from wittkit.equivariant import check_action_coherence

    act = fixtures.vect_qi_action(-1)
    assert check_action_coherence(act).violation == ("gamma-monoidal", 0, 0)
    assert [S.end_type for S in equivariant_simples(act)] == ["QUATERNIONIC"]
