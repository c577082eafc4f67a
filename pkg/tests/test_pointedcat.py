from __future__ import annotations

import pytest

from wittkit.groups import abelian_group, cyclic_group, trivial_group
from wittkit.numfield import make_cyclotomic, rationals
from wittkit.pointedcat import (
    DegenerateInput,
    InsufficientRoots,
    PointedBraidedCategory,
    Subgroup,
    centralizer,
    centralizer_order_check,
    category_from_spec,
    check_hexagons,
    check_pentagon,
    double_centralizer_check,
    drinfeld_center_pointed,
    is_nondegenerate,
    muger_center,
)

QI = make_cyclotomic(4)
Q = rationals()
C2 = cyclic_group(2)


def center_z2():
    return drinfeld_center_pointed(C2, QI)


def semion():
    return PointedBraidedCategory(C2, QI, {(1, 1, 1): -1}, {(1, 1): QI.gen})


def test_pentagon_examples():
    assert check_pentagon(PointedBraidedCategory(C2, Q, braided=False))
    assert check_pentagon(PointedBraidedCategory(C2, Q, {(1, 1, 1): -1}, braided=False))
    r = check_pentagon(PointedBraidedCategory(C2, Q, {(0, 1, 1): -1}, braided=False))
    assert not r and len(r.violation) == 4


def test_center_braiding_table():
    B = center_z2()
    assert B.simple_labels == ("I", "E", "M", "EM")
    for x in range(4):
        for y in range(4):
            j, k = x // 2, y % 2
            assert B.c(x, y) == (-1) ** (j * k)
    assert check_pentagon(B) and check_hexagons(B)


def test_semion_and_bad_braiding():
    assert check_hexagons(semion())
    bad = PointedBraidedCategory(C2, QI, {(1, 1, 1): -1}, {(1, 1): -1})
    assert not check_hexagons(bad)


def test_center_of_trivial_group():
    B = drinfeld_center_pointed(trivial_group(), Q)
    assert B.group.order == 1 and B.c(0, 0) == 1


def test_center_z3():
    F = make_cyclotomic(3)
    B = drinfeld_center_pointed(cyclic_group(3), F)
    assert B.group.order == 9
    z = F.gen
    for x in range(9):
        for y in range(9):
            assert B.c(x, y) == z ** ((x // 3) * (y % 3))
    assert check_hexagons(B)
    assert len(B.subgroups) == 6
    assert double_centralizer_check(B)


def test_insufficient_roots():
    with pytest.raises(InsufficientRoots):
        drinfeld_center_pointed(C2, Q)
    with pytest.raises(InsufficientRoots):
        drinfeld_center_pointed(cyclic_group(3), QI)


def test_muger_centers():
    assert muger_center(center_z2()).is_trivial
    V = abelian_group((2, 2))
    sym = PointedBraidedCategory(V, Q)
    assert len(muger_center(sym)) == 4
    assert muger_center(semion()).is_trivial
    assert is_nondegenerate(center_z2()) and is_nondegenerate(semion())
    assert not is_nondegenerate(sym)


def test_centralizer_examples():
    B = center_z2()
    G = B.group
    assert len(centralizer(B, Subgroup(G, (0,)))) == 4
    assert str(centralizer(B, Subgroup(G, (0, 1)))) == "{I, E}"
    assert str(centralizer(B, Subgroup(G, (0, 3)))) == "{I, EM}"
    assert str(centralizer(B, Subgroup(G, (0, 2)))) == "{I, M}"


def test_double_centralizer_all_subgroups():
    B = center_z2()
    assert len(B.subgroups) == 5
    assert double_centralizer_check(B)
    assert centralizer_order_check(B)


def test_degenerate_rejected():
    with pytest.raises(DegenerateInput):
        double_centralizer_check(PointedBraidedCategory(abelian_group((2, 2)), Q))


def test_subgroup_validation():
    with pytest.raises(ValueError):
        Subgroup(abelian_group((2, 2)), (0, 1, 2))


def test_spec_round_trip():
    B = center_z2()
    again = category_from_spec(B.to_json())
    assert all(again.c(x, y) == B.c(x, y) for x in range(4) for y in range(4))
