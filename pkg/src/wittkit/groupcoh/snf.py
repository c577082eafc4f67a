"""Diagonal reduction of integer matrices, over Z and over Z/p^e.

Both reductions produce invertible P, Q with ``P A Q`` diagonal; the
diagonal is not forced into divisibility order because callers only
need kernels, images and cokernels, whose canonical invariants are
recovered afterwards by :func:`invariant_factors`.
"""

from __future__ import annotations

from math import gcd

import numpy as np
from numba import njit
from sympy import factorint


def invariant_factors(orders) -> tuple[int, ...]:
    """Canonical invariant factors (divisibility order, no 1s) of a direct sum
    of cyclic groups; 0 stands for Z and sorts last."""
    free = sum(1 for d in orders if d == 0)
    prime_powers: dict[int, list[int]] = {}
    for d in orders:
        d = abs(d)
        if d <= 1:
            continue
        for p, k in factorint(d).items():
            prime_powers.setdefault(p, []).append(p ** k)
    for p in prime_powers:
        prime_powers[p].sort(reverse=True)
    length = max((len(v) for v in prime_powers.values()), default=0)
    factors = []
    for i in range(length):
        f = 1
        for v in prime_powers.values():
            if i < len(v):
                f *= v[i]
        factors.append(f)
    return tuple(sorted(factors)) + (0,) * free


# --- over Z -----------------------------------------------------------------


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def int_snf(A, want_P=False, want_Pinv=False, want_Q=False):
    """Diagonalize an integer matrix (list of rows).

    Returns ``(diag, P, Pinv, Q)`` with ``P A Q = D`` where ``D`` has the
    nonzero entries ``diag`` (positive) in its leading diagonal positions.
    Unrequested transforms are None.
    """
    D = [list(map(int, row)) for row in A]
    m = len(D)
    n = len(D[0]) if m else 0
    P = _identity(m) if want_P else None
    Pinv = _identity(m) if want_Pinv else None
    Q = _identity(n) if want_Q else None

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        if P is not None:
            P[i], P[j] = P[j], P[i]
        if Pinv is not None:
            for row in Pinv:
                row[i], row[j] = row[j], row[i]

    def col_swap(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        if Q is not None:
            for row in Q:
                row[i], row[j] = row[j], row[i]

    def row_addmul(i, t, f):
        # row_i -= f * row_t
        Di, Dt = D[i], D[t]
        for j in range(n):
            if Dt[j]:
                Di[j] -= f * Dt[j]
        if P is not None:
            Pi, Pt = P[i], P[t]
            for j in range(m):
                if Pt[j]:
                    Pi[j] -= f * Pt[j]
        if Pinv is not None:
            for row in Pinv:
                if row[i]:
                    row[t] += f * row[i]

    def col_addmul(j, t, f):
        # col_j -= f * col_t
        for row in D:
            if row[t]:
                row[j] -= f * row[t]
        if Q is not None:
            for row in Q:
                if row[t]:
                    row[j] -= f * row[t]

    def row_negate(t):
        D[t] = [-x for x in D[t]]
        if P is not None:
            P[t] = [-x for x in P[t]]
        if Pinv is not None:
            for row in Pinv:
                row[t] = -row[t]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            Di = D[i]
            for j in range(t, n):
                a = Di[j]
                if a and (best is None or abs(a) < best[0]):
                    best = (abs(a), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            row_swap(i, t)
        if j != t:
            col_swap(j, t)
        while True:
            a = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    row_addmul(i, t, D[i][t] // a)
                    if D[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if D[t][j]:
                    col_addmul(j, t, D[t][j] // a)
                    if D[t][j]:
                        dirty = True
            if not dirty:
                break
            # move the smallest leftover in row/column t onto the diagonal
            cands = [(abs(D[i][t]), i, t) for i in range(t + 1, m) if D[i][t]]
            cands += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
            _, i, j = min(cands)
            if i != t:
                row_swap(i, t)
            else:
                col_swap(j, t)
        if D[t][t] < 0:
            row_negate(t)
        diag.append(D[t][t])
        t += 1
    return diag, P, Pinv, Q


def int_kernel(A, ncols: int) -> list[list[int]]:
    """Z-basis of the kernel of A (given as rows), as a list of column vectors."""
    if not A:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    diag, _, _, Q = int_snf(A, want_Q=True)
    r = len(diag)
    return [[Q[i][j] for i in range(ncols)] for j in range(r, ncols)]


def int_solve(A, b, ncols: int):
    """An integer solution x of A x = b, or None."""
    m = len(A)
    if m == 0:
        return [0] * ncols
    diag, P, _, Q = int_snf(A, want_P=True, want_Q=True)
    Pb = [sum(P[i][k] * b[k] for k in range(m)) for i in range(m)]
    r = len(diag)
    y = [0] * ncols
    for i in range(r):
        if Pb[i] % diag[i]:
            return None
        y[i] = Pb[i] // diag[i]
    if any(Pb[i] for i in range(r, m)):
        return None
    return [sum(Q[i][k] * y[k] for k in range(ncols)) for i in range(ncols)]


# --- over Z/p^e ----------------------------------------------------------------


@njit(cache=True)
def _inv_mod(a, q):
    r0, r1 = q, a % q
    s0, s1 = 0, 1
    while r1:
        k = r0 // r1
        r0, r1 = r1, r0 - k * r1
        s0, s1 = s1, s0 - k * s1
    return s0 % q


@njit(cache=True)
def _local_reduce(A, p, e, P, QT, track_p, track_q):
    """In-place diagonal reduction over Z/p^e.

    Row operations are mirrored on P, column operations on QT (the
    transpose of Q, so that both updates are row updates).
    Returns the valuations of the pivots.
    """
    q = 1
    for _ in range(e):
        q *= p
    r, c = A.shape
    k = min(r, c)
    vals = np.empty(k, np.int64)
    rank = 0
    for t in range(k):
        best = e
        bi = -1
        bj = -1
        for i in range(t, r):
            for j in range(t, c):
                a = A[i, j]
                if a != 0:
                    v = 0
                    while a % p == 0:
                        a //= p
                        v += 1
                    if v < best:
                        best = v
                        bi = i
                        bj = j
                        if v == 0:
                            break
            if best == 0:
                break
        if bi < 0:
            break
        if bi != t:
            for j in range(c):
                tmp = A[t, j]
                A[t, j] = A[bi, j]
                A[bi, j] = tmp
            if track_p:
                for j in range(P.shape[1]):
                    tmp = P[t, j]
                    P[t, j] = P[bi, j]
                    P[bi, j] = tmp
        if bj != t:
            for i in range(r):
                tmp = A[i, t]
                A[i, t] = A[i, bj]
                A[i, bj] = tmp
            if track_q:
                for j in range(QT.shape[1]):
                    tmp = QT[t, j]
                    QT[t, j] = QT[bj, j]
                    QT[bj, j] = tmp
        pv = 1
        for _ in range(best):
            pv *= p
        u = A[t, t] // pv
        if u != 1:
            uinv = _inv_mod(u, q)
            for j in range(c):
                A[t, j] = (A[t, j] * uinv) % q
            if track_p:
                for j in range(P.shape[1]):
                    P[t, j] = (P[t, j] * uinv) % q
        for i in range(t + 1, r):
            a = A[i, t]
            if a != 0:
                f = a // pv
                for j in range(t, c):
                    if A[t, j] != 0:
                        A[i, j] = (A[i, j] - f * A[t, j]) % q
                if track_p:
                    for j in range(P.shape[1]):
                        if P[t, j] != 0:
                            P[i, j] = (P[i, j] - f * P[t, j]) % q
        for j in range(t + 1, c):
            a = A[t, j]
            if a != 0:
                f = a // pv
                A[t, j] = 0
                if track_q:
                    for jj in range(QT.shape[1]):
                        if QT[t, jj] != 0:
                            QT[j, jj] = (QT[j, jj] - f * QT[t, jj]) % q
        vals[t] = best
        rank += 1
    return vals[:rank]


def local_snf(A: np.ndarray, p: int, e: int, want_P=False, want_Q=False):
    """Diagonal reduction of ``A`` over Z/p^e.

    Returns ``(vals, P, Q)``: ``P A Q`` (mod p^e) has ``p**vals[t]`` at
    ``(t, t)`` for ``t < len(vals)`` and zeros elsewhere.
    """
    q = p ** e
    A = np.ascontiguousarray(np.asarray(A, dtype=np.int64) % q)
    r, c = A.shape
    P = np.eye(r, dtype=np.int64) if want_P else np.zeros((1, 1), np.int64)
    QT = np.eye(c, dtype=np.int64) if want_Q else np.zeros((1, 1), np.int64)
    if r == 0 or c == 0:
        vals = np.zeros(0, np.int64)
    else:
        vals = _local_reduce(A, p, e, P, QT, want_P, want_Q)
    return (list(int(v) for v in vals), P if want_P else None,
            np.ascontiguousarray(QT.T) if want_Q else None)


def local_solve(A: np.ndarray, b: np.ndarray, p: int, e: int):
    """A solution x of A x = b over Z/p^e, or None."""
    q = p ** e
    r, c = A.shape
    if r == 0:
        return np.zeros(c, np.int64)
    vals, P, Q = local_snf(A, p, e, want_P=True, want_Q=True)
    Pb = (P @ (np.asarray(b, np.int64) % q)) % q
    y = np.zeros(c, np.int64)
    for t, v in enumerate(vals):
        pv = p ** v
        if Pb[t] % pv:
            return None
        y[t] = (Pb[t] // pv) % q
    if np.any(Pb[len(vals):] % q):
        return None
    return (Q @ y) % q if c else y


def crt_pair(a: int, m: int, b: int, n: int) -> int:
    g = gcd(m, n)
    if g != 1:
        raise ValueError("moduli must be coprime")
    return (a + m * ((b - a) * pow(m, -1, n) % n)) % (m * n)
