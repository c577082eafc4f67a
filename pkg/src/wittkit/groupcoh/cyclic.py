"""Cohomology of cyclic groups from the 2-periodic resolution."""

from __future__ import annotations

import numpy as np

from .bar import AbelianGroupStructure, _integer_homology
from .modules import GModule


def _powers(S: np.ndarray, m: int) -> list[np.ndarray]:
    out = [np.eye(S.shape[0], dtype=object)]
    for _ in range(m - 1):
        out.append(S.dot(out[-1]))
    return out


def cyclic_cohomology(m: int, M: GModule, n: int) -> AbelianGroupStructure:
    """H^n(C_m; M) with the generator 1 of C_m acting as sigma.

    Degree 0 gives the invariants, positive even degrees the invariants
    modulo norms, odd degrees the norm-kernel modulo (sigma - 1)M.
    """
    G = M.group
    if G.order != m or G.abelian_factors != (m,):
        raise ValueError("module must be over the standard cyclic group C_m")
    if n < 0:
        raise ValueError("degree must be non-negative")
    r = M.rank
    S = np.array(M.action[1 % m], dtype=object).reshape(r, r)
    diff = S - np.eye(r, dtype=object)
    norm = sum(_powers(S, m))
    factors = list(M.invariant_factors)
    if n == 0:
        D2, D1 = diff, np.zeros((r, 0), dtype=object)
    elif n % 2 == 0:
        D2, D1 = diff, norm
    else:
        D2, D1 = norm, diff
    h = _integer_homology(np.asarray(D2, dtype=np.int64), np.asarray(D1, dtype=np.int64),
                          factors, factors)
    return h.structure
