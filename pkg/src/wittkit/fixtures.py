"""Built-in datasets: the real Witt class built from Z(Vect(Z/2)) over Q(i)."""

from __future__ import annotations

from .equivariant import GaloisAction
from .groups import cyclic_group
from .numfield import complex_conjugation, make_cyclotomic
from .pointedcat import PointedBraidedCategory, drinfeld_center_pointed

# simples of Z(Vect(Z/2)) are E^i M^j with index i + 2j: I, E, M, EM
SIMPLE_NAMES = ("I", "E", "M", "EM")
EQUIVARIANT_NAMES = {(0,): "I", (1, 2): "K", (3, 3): "H"}


def _ij(g: int) -> tuple[int, int]:
    return g % 2, g // 2


def real_witt_base() -> PointedBraidedCategory:
    """Z(Vect(Z/2)) over Q(i): trivial associator, braiding (-1)^(jk)."""
    return drinfeld_center_pointed(cyclic_group(2), make_cyclotomic(4))


def swap_em(g: int) -> int:
    i, j = _ij(g)
    return j + 2 * i


def real_witt_tensorator(g: int, h: int) -> int:
    (i, _), (_, l) = _ij(g), _ij(h)
    return (-1) ** (i * l)


def real_witt_gamma(g: int) -> int:
    i, j = _ij(g)
    return (-1) ** (i * j)


def real_witt_action(base: PointedBraidedCategory | None = None,
                    trivial_tensorator: bool = False) -> GaloisAction:
    """T swaps E and M, sigma is complex conjugation, J = (-1)^(il), gamma = (-1)^(ij)."""
    base = base or real_witt_base()
    F = base.field
    J = None if trivial_tensorator else real_witt_tensorator
    return GaloisAction(base, complex_conjugation(F), tuple(swap_em(g) for g in range(4)),
                        J, real_witt_gamma)


def vect_qi_action(gamma: int = 1) -> GaloisAction:
    """Conjugation on Vect(Q(i)) itself, with gamma = +-1 on the unit."""
    F = make_cyclotomic(4)
    base = PointedBraidedCategory(cyclic_group(1), F, label="Vect(Q(i))")
    return GaloisAction(base, complex_conjugation(F), (0,), None, (gamma,))
