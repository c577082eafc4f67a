from __future__ import annotations

import numpy as np
import pytest

from wittkit.groupcoh import (
    BudgetExceeded,
    CochainClass,
    GModule,
    ModuleMap,
    NotCocycle,
    NotEquivariant,
    NotStabilized,
    ShapeMismatch,
    add_classes,
    bar_cohomology,
    coboundary,
    cyclic_cohomology,
    cyclic_module,
    doubling_map,
    inflate_coefficients,
    inflate_group,
    is_coboundary,
    module_from_spec,
    module_to_spec,
    roots_of_unity,
    stabilized_cohomology,
    trivial_module,
)
from wittkit.groupcoh.snf import int_snf, invariant_factors
from wittkit.groups import cyclic_group, trivial_group

C2, C4 = cyclic_group(2), cyclic_group(4)


def Z8inv():
    return roots_of_unity(8)


def gen(M: GModule, n: int) -> CochainClass:
    H = bar_cohomology(M.group, M, n)
    assert len(H.generators) == 1
    return H.generators[0]


def applies_d(witness: CochainClass, target: CochainClass) -> bool:
    M = target.module
    d = coboundary(target.group, M, witness.degree, witness.values)
    return all(not any(M.reduce(r)) for r in (d - target.values).tolist())


def test_snf_small():
    diag, *_ = int_snf([[2, 4], [6, 8]])
    assert [abs(d) for d in diag if d] == [2, 4]
    assert invariant_factors([4, 6]) == (2, 12)


def test_trivial_group_vanishes():
    G = trivial_group()
    M = trivial_module(G, (5,))
    for n in (1, 2, 3):
        assert str(bar_cohomology(G, M, n).structure) == "0"


def test_bar_examples_z8_inversion():
    M = Z8inv()
    assert str(bar_cohomology(C2, M, 4).structure) == "Z/2"
    assert str(bar_cohomology(C2, M, 0).structure) == "Z/2"


def test_h0_is_fixed_points():
    M = Z8inv()
    fixed = [x for x in range(8) if M.act(1, (x,)) == (x,)]
    assert fixed == [0, 4]


def test_cyclic_oracle_examples():
    M = Z8inv()
    assert str(cyclic_cohomology(2, M, 2)) == "Z/2"
    assert str(cyclic_cohomology(2, M, 1)) == "Z/2"
    Z = cyclic_module(C2, 0, 1)
    assert str(cyclic_cohomology(2, Z, 1)) == "0"
    assert str(bar_cohomology(C2, Z, 1).structure) == "0"
    assert str(bar_cohomology(C2, Z, 2).structure) == "Z/2"


def test_zero_is_coboundary():
    z = CochainClass.zero(C2, Z8inv(), 3)
    r = is_coboundary(z)
    assert r.is_coboundary and not r.witness.values.any()


def test_h1_generator_dies_in_z16():
    M = Z8inv()
    c = gen(M, 1)
    assert not is_coboundary(c).is_coboundary
    big = inflate_coefficients(c, doubling_map(M, roots_of_unity(16)))
    r = is_coboundary(big)
    assert r.is_coboundary and applies_d(r.witness, big)


def test_h4_generator_survives_z16():
    M = Z8inv()
    c = gen(M, 4)
    big = inflate_coefficients(c, doubling_map(M, roots_of_unity(16)))
    assert not is_coboundary(big).is_coboundary


def test_identity_inflation():
    M = Z8inv()
    c = gen(M, 2)
    ident = ModuleMap(M, M, ((1,),))
    assert np.array_equal(inflate_coefficients(c, ident).values, c.values)
    same = inflate_group(c, C2, [0, 1])
    assert np.array_equal(same.values, c.values)


def test_group_inflation_c4_to_c2():
    M = Z8inv()
    z = CochainClass.zero(C2, M, 4)
    pulled = inflate_group(z, C4, [0, 1, 0, 1])
    assert is_coboundary(pulled).is_coboundary
    c = gen(M, 4)
    pulled = inflate_group(c, C4, [0, 1, 0, 1])
    H = bar_cohomology(C4, pulled.module, 4)
    coords = H.coordinates(pulled)
    decided = all(x % n == 0 for x, n in zip(coords, H.generator_orders))
    r = is_coboundary(pulled)
    assert r.is_coboundary == decided
    if r.is_coboundary:
        assert applies_d(r.witness, pulled)


def test_inflate_group_rejects_non_homomorphism():
    c = gen(Z8inv(), 2)
    with pytest.raises(ValueError):
        inflate_group(c, C4, [0, 1, 1, 0])


def test_stabilized_mu4_tower_values():
    levels = [roots_of_unity(n) for n in (8, 16, 32)]
    tower = [doubling_map(a, b) for a, b in zip(levels, levels[1:])]
    assert str(stabilized_cohomology(2, tower, 3)) == "0"
    assert str(stabilized_cohomology(2, tower, 4)) == "Z/2"
    assert str(stabilized_cohomology(2, tower, 0)) == "Z/2"


def test_stabilized_needs_two_steps():
    M8, M16 = roots_of_unity(8), roots_of_unity(16)
    with pytest.raises(ValueError):
        stabilized_cohomology(2, [doubling_map(M8, M16)], 2)


def test_not_stabilized_raised():
    # trivial action: H^2 = M/2M, and the class of 1 dies only at the last step
    M1 = trivial_module(C2, (2,))
    M2 = trivial_module(C2, (2, 2))
    M3 = trivial_module(C2, (2, 4))
    tower = [ModuleMap(M1, M2, ((1,), (0,))), ModuleMap(M2, M3, ((0, 1), (2, 0)))]
    with pytest.raises(NotStabilized):
        stabilized_cohomology(2, tower, 2)
    assert str(stabilized_cohomology(2, tower, 2, strict=False)) == "0"


def test_add_classes():
    c = gen(Z8inv(), 4)
    assert is_coboundary(add_classes(c, c)).is_coboundary
    with pytest.raises(ShapeMismatch):
        add_classes(c, gen(Z8inv(), 2))


def test_non_cocycle_rejected():
    with pytest.raises(NotCocycle):
        CochainClass.from_mapping(C2, cyclic_module(C2, 8, 1), 1, {(1,): (1,)})


def test_module_validation():
    with pytest.raises(ValueError):
        GModule(C2, (8,), (((1,),), ((2,),)))
    M = Z8inv()
    assert module_from_spec(C2, module_to_spec(M)) == M


def test_non_equivariant_map():
    src = cyclic_module(C2, 4, 1)
    tgt = cyclic_module(C2, 4, -1)
    with pytest.raises(NotEquivariant):
        ModuleMap(src, tgt, ((1,),)).check_equivariant()


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        bar_cohomology(cyclic_group(6), cyclic_module(6, 16, 1), 6, work_budget=10 ** 4)

