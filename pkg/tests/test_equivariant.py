from __future__ import annotations

import pytest

from wittkit import fixtures
from wittkit.equivariant import (
    COMPLEX,
    QUATERNIONIC,
    REAL,
    EquivariantObject,
    GaloisAction,
    NormObstruction,
    NormSolution,
    check_action_coherence,
    check_equivariant_structure,
    equivariant_fusion_ring,
    equivariant_hom_dim,
    equivariant_simples,
    equivariant_tensor,
    equivariant_tensor_decompose,
    grading_decomposition,
    solve_norm_equation,
    t_squared_tensorator,
)
from wittkit.fusionring import check_fusion_axioms, fpdim_category
from wittkit.groups import cyclic_group
from wittkit.numfield import complex_conjugation, make_cyclotomic
from wittkit.pointedcat import PointedBraidedCategory


@pytest.fixture(scope="module")
def action():
    return fixtures.real_witt_action()


@pytest.fixture(scope="module")
def simples(action):
    return equivariant_simples(action, fixtures.EQUIVARIANT_NAMES)


def by_label(simples, label):
    return next(S for S in simples if S.label == label)


def test_real_witt_coherence(action):
    assert check_action_coherence(action)


def test_trivial_tensorator_fails_braided():
    r = check_action_coherence(fixtures.real_witt_action(trivial_tensorator=True))
    assert not r
    assert r.violation[0] == "braided"
    assert set(r.violation[1:]) == {1, 2}


def test_symmetric_identity_action():
    F = make_cyclotomic(4)
    base = PointedBraidedCategory(cyclic_group(2), F)
    act = GaloisAction(base, complex_conjugation(F), (0, 1))
    assert check_action_coherence(act)


def test_t_squared_tensorator(action):
    J2 = t_squared_tensorator(action)
    for g in range(4):
        for h in range(4):
            i, j = g % 2, g // 2
            k, l = h % 2, h // 2
            assert J2[(g, h)] == (-1) ** (i * l + j * k)


def test_trivial_action_t_squared():
    act = fixtures.vect_qi_action()
    assert all(v == 1 for v in t_squared_tensorator(act).values())


def test_real_witt_simples(action, simples):
    sig = [(S.label, S.underlying, S.end_type, S.end_dim) for S in simples]
    assert sig == [("I", (0,), REAL, 1), ("K", (1, 2), COMPLEX, 2),
                   ("H", (3, 3), QUATERNIONIC, 4)]
    H = by_label(simples, "H")
    F = action.field
    assert H.structure_u == ((F.zero, -F.one), (F.one, F.zero))
    for S in simples:
        assert check_equivariant_structure(action, S)


def test_quaternionic_u_squares_to_minus_one(action, simples):
    H = by_label(simples, "H")
    u = H.structure_u
    F = action.field
    for a in range(2):
        for b in range(2):
            val = sum((u[a][c] * action.sigma(u[c][b]) for c in range(2)), F.zero)
            assert val == (-1 if a == b else 0)


def test_vect_qi_forms():
    assert [S.end_type for S in equivariant_simples(fixtures.vect_qi_action(1))] == [REAL]
    assert [S.end_type for S in equivariant_simples(fixtures.vect_qi_action(-1))] == [QUATERNIONIC]


def test_norm_equation():
    act = fixtures.vect_qi_action()
    F = act.field
    assert isinstance(solve_norm_equation(act, F.one), NormSolution)
    assert isinstance(solve_norm_equation(act, F(-1)), NormObstruction)
    sol = solve_norm_equation(act, F(2))
    assert isinstance(sol, NormSolution) and sol.value * act.sigma(sol.value) == 2


def test_hom_dims(action, simples):
    I, K, H = (by_label(simples, x) for x in "IKH")
    assert equivariant_hom_dim(action, H, H) == 4
    assert equivariant_hom_dim(action, K, K) == 2
    assert equivariant_hom_dim(action, I, I) == 1
    assert equivariant_hom_dim(action, I, K) == 0
    assert equivariant_hom_dim(action, K, H) == 0


def test_tensor_decompositions(action, simples):
    I, K, H = (by_label(simples, x) for x in "IKH")
    for X in simples:
        assert [(S.label, m) for S, m in equivariant_tensor_decompose(action, I, X, simples)] \
            == [(X.label, 1)]
    assert [(S.label, m) for S, m in equivariant_tensor_decompose(action, H, H, simples)] \
        == [("I", 4)]
    got = {S.label: m for S, m in equivariant_tensor_decompose(action, K, K, simples)}
    assert got == {"I": 2, "H": 1}
    KK = equivariant_tensor(action, K, K)
    assert sorted(KK.underlying) == [0, 0, 3, 3]


def test_fusion_ring(action, simples):
    ring = equivariant_fusion_ring(action, simples, "C")
    assert check_fusion_axioms(ring)
    assert fpdim_category(ring) == 4
    assert ring.product_str(2, 2) == "4I"


def test_grading(action, simples):
    g = grading_decomposition(action, simples)
    assert g.group.order == 2
    labels = [sorted(simples[i].label for i in comp) for comp in g.components]
    assert sorted(labels) == [["H", "I"], ["K"]]
    assert labels[g.degrees[0]] == ["H", "I"]


def test_trivial_grading_single_component():
    g = grading_decomposition(fixtures.vect_qi_action())
    assert len(g.components) == 1


def test_bad_object_perm():
    F = make_cyclotomic(4)
    base = PointedBraidedCategory(cyclic_group(3), make_cyclotomic(4))
    with pytest.raises(ValueError):
        GaloisAction(base, complex_conjugation(F), (1, 2, 0))


def test_incoherent_structure_detected(action):
    F = action.field
    X = EquivariantObject((3, 3), ((F.zero, F.one), (F.one, F.zero)))
    assert not check_equivariant_structure(action, X)
