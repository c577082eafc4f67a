"""Dense univariate polynomials with rational or modular coefficients.

Polynomials are tuples of coefficients, lowest degree first, with no
trailing zeros (the zero polynomial is the empty tuple).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from sympy import divisors

Poly = tuple


def trim(coeffs: Sequence) -> Poly:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(f: Poly) -> int:
    return len(f) - 1


def add(f: Poly, g: Poly) -> Poly:
    n = max(len(f), len(g))
    return trim(
        (f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n)
    )


def sub(f: Poly, g: Poly) -> Poly:
    n = max(len(f), len(g))
    return trim(
        (f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)
    )


def scale(f: Poly, c) -> Poly:
    return trim(a * c for a in f)


def mul(f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == 0:
            continue
        for j, b in enumerate(g):
            out[i + j] += a * b
    return trim(out)


def divmod_(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Division with remainder over a field (coefficients support ``/``)."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    lead = g[-1]
    q = [0] * max(len(f) - dg, 0)
    while len(r) - 1 >= dg and r:
        k = len(r) - 1 - dg
        c = r[-1] / lead
        q[k] = c
        for i, b in enumerate(g):
            r[i + k] -= c * b
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return trim(q), trim(r)


def evaluate(f: Poly, x):
    acc = 0
    for a in reversed(f):
        acc = acc * x + a
    return acc


def derivative(f: Poly) -> Poly:
    return trim(i * f[i] for i in range(1, len(f)))


def monic(f: Poly) -> Poly:
    return tuple(a / f[-1] for a in f)


def poly_gcd(f: Poly, g: Poly) -> Poly:
    while g:
        f, g = g, divmod_(f, g)[1]
    return monic(f) if f else f


def to_fractions(coeffs: Sequence) -> Poly:
    return trim(Fraction(c) for c in coeffs)


def integer_primitive(f: Poly) -> tuple[int, ...]:
    """Scale a rational polynomial to a primitive integer polynomial."""
    den = 1
    for c in f:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in f]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return tuple(c // g for c in ints) if g else tuple(ints)


def cyclotomic(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    f: Poly = (Fraction(-1),) + (Fraction(0),) * (n - 1) + (Fraction(1),)
    for d in range(1, n):
        if n % d == 0:
            f, r = divmod_(f, tuple(Fraction(c) for c in cyclotomic(d)))
            assert not r
    return tuple(int(c) for c in f)


# --- arithmetic over F_p --------------------------------------------------


def _mod_trim(f, p):
    return trim(c % p for c in f)


def _mod_mul(f, g, p):
    return _mod_trim(mul(f, g), p)


def _mod_divmod(f, g, p):
    inv = pow(g[-1], -1, p)
    r = list(f)
    dg = len(g) - 1
    q = [0] * max(len(f) - dg, 0)
    while r and len(r) - 1 >= dg:
        k = len(r) - 1 - dg
        c = (r[-1] * inv) % p
        q[k] = c
        for i, b in enumerate(g):
            r[i + k] = (r[i + k] - c * b) % p
        while r and r[-1] == 0:
            r.pop()
    return _mod_trim(q, p), tuple(r)


def _mod_gcd(f, g, p):
    while g:
        f, g = g, _mod_divmod(f, g, p)[1]
    return f


def _mod_powmod(base, e, modulus, p):
    result = (1,)
    base = _mod_divmod(base, modulus, p)[1]
    while e:
        if e & 1:
            result = _mod_divmod(_mod_mul(result, base, p), modulus, p)[1]
        base = _mod_divmod(_mod_mul(base, base, p), modulus, p)[1]
        e >>= 1
    return result


def irreducible_mod_p(f: Sequence[int], p: int) -> bool:
    """Ben-Or test: is the integer polynomial ``f`` irreducible over F_p?

    Returns False when the degree drops mod p.
    """
    fp = _mod_trim(f, p)
    n = len(fp) - 1
    if n != len(f) - 1 or n < 1:
        return False
    x = (0, 1)
    xp = x
    for _ in range(n // 2):
        xp = _mod_powmod(xp, p, fp, p)
        diff = _mod_trim(sub(xp, x), p)
        g = _mod_gcd(fp, diff, p)
        if len(g) > 1:
            return False
    return True


def first_primes(count: int) -> list[int]:
    primes: list[int] = []
    k = 2
    while len(primes) < count:
        if all(k % q for q in primes if q * q <= k):
            primes.append(k)
        k += 1
    return primes


def rational_roots(f: Poly) -> list[Fraction]:
    """All rational roots of a rational polynomial (rational root theorem)."""
    ints = integer_primitive(f)
    # strip the root 0
    roots: list[Fraction] = []
    k = 0
    while k < len(ints) and ints[k] == 0:
        k += 1
    if k:
        roots.append(Fraction(0))
    ints = ints[k:]
    if len(ints) <= 1:
        return roots
    a0, an = abs(ints[0]), abs(ints[-1])
    for num in divisors(a0):
        for den in divisors(an):
            for s in (1, -1):
                r = Fraction(s * num, den)
                if r not in roots and evaluate(ints, r) == 0:
                    roots.append(r)
    return roots
