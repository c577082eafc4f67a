"""Acceptance criteria, one printed PASS/FAIL line each.

Under pytest the lines appear in the terminal summary. Run directly as a
script to print them as each criterion finishes.
"""

from __future__ import annotations

import random
import sys
import time

from wittkit import cli
from wittkit.fusionring import fpdim_multiplicativity_check, shipped_rings
from wittkit.galoiswitt import (
    WittFamilyClass,
    galois_grading_check,
    real_witt_certificate,
    skeleton_from_grading,
    tensor_decompose,
    verify_action_formula,
    witt_class_is_trivial,
    witt_class_product,
)
from wittkit.groupcoh import (
    CochainClass,
    bar_cohomology,
    coboundary,
    cyclic_cohomology,
    cyclic_module,
    differential_matrix,
    doubling_map,
    is_coboundary,
    order_dividing_multipliers,
    roots_of_unity,
    stabilized_cohomology,
)
from wittkit.groups import abelian_group, cyclic_group
from wittkit.numfield import NoRoot, automorphisms, field_from_spec, rationals


LINES: list[str] = []


def report(number: int, ok: bool, title: str, detail: str, seconds: float) -> None:
    line = f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'} ({seconds:.2f}s) {title}: {detail}"
    LINES.append(line)
    if __name__ == "__main__":
        print(line, flush=True)
    assert ok, line


def warm_up() -> None:
    # numba kernels compile on first use; keep that out of the timed sections
    bar_cohomology(cyclic_group(2), roots_of_unity(4), 2)


def test_criterion_1_certificate():
    warm_up()
    t0 = time.perf_counter()
    cert = real_witt_certificate()
    rep = cli.scenario_appendix_a(None)
    elapsed = time.perf_counter() - t0
    names = [n for n, ok, _ in cert.checks if ok]
    expected = ["pentagon", "hexagons", "muger-center", "double-centralizer",
                "action-coherence", "uT(u)=-Id", "simples", "fpdim", "grading"]
    details = dict((n, d) for n, _, d in cert.checks)
    ok = (cert.ok and names == expected and rep.exit_code == 0
          and "all 5 subgroups" in details["double-centralizer"]
          and "(-1)^(il+jk)" in details["action-coherence"]
          and details["simples"] == "I REAL End dim 1, K COMPLEX End dim 2, "
                                    "H QUATERNIONIC End dim 4"
          and details["fpdim"] == "FPdim(C) = 4"
          and "H x H = 4I" in details["grading"]
          and elapsed < 5)
    report(1, ok, "appendix-a certificate", f"{len(names)}/9 checks green", elapsed)


def test_criterion_2_tower_table():
    warm_up()
    t0 = time.perf_counter()
    levels = [roots_of_unity(2 ** k) for k in range(2, 6)]
    tower = [doubling_map(a, b) for a, b in zip(levels, levels[1:])]
    table = {n: str(stabilized_cohomology(2, tower, n)) for n in range(1, 7)}
    elapsed = time.perf_counter() - t0
    ok = all(table[n] == ("Z/2" if n % 2 == 0 else "0") for n in table) and elapsed < 30
    detail = ", ".join(f"n={n}: {s}" for n, s in table.items())
    report(2, ok, "C2 inversion on mu4 -> ... -> mu32", detail, elapsed)


def test_criterion_3_oracle_sweep():
    warm_up()
    t0 = time.perf_counter()
    cases = mismatches = 0
    first_bad = None
    for m in (2, 3, 4, 6):
        G = cyclic_group(m)
        for N in range(1, 17):
            for a in order_dividing_multipliers(m, N):
                M = cyclic_module(G, N, a)
                for n in range(0, 5):
                    cases += 1
                    if bar_cohomology(G, M, n).structure != cyclic_cohomology(m, M, n):
                        mismatches += 1
                        first_bad = first_bad or (m, N, a, n)
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 120
    report(3, ok, "bar == periodic oracle",
           f"{cases} cases, {mismatches} mismatches" + (f", first {first_bad}" if first_bad else ""),
           elapsed)


def test_criterion_4_decompositions():
    t0 = time.perf_counter()
    Q = rationals()
    K = field_from_spec("Q(i)")
    d1 = tensor_decompose(Q, K)
    ok1 = d1.degrees == [1, 1] and all(c.field == K and c.automorphism for c in d1.components)
    K3 = field_from_spec("Q(cbrt2)")
    d2 = tensor_decompose(Q, K3)
    t = K3.gen
    quad = d2.components[-1]
    ok2 = (d2.degrees == [1, 2] and quad.factor_poly == (t * t, t, K3.one)
           and isinstance(quad.certificate, NoRoot))
    K8 = field_from_spec("Q(zeta_8)")
    d3 = tensor_decompose(Q, K8)
    r = verify_action_formula(d3)
    ok3 = d3.degrees == [1, 1, 1, 1] and r.ok and r.detail.startswith("64 triples")
    elapsed = time.perf_counter() - t0
    report(4, ok1 and ok2 and ok3, "K (x)_Q K decompositions",
           f"Q(i) {d1.degrees}, Q(cbrt2) {d2.degrees} with NoRoot, "
           f"Q(zeta_8) {d3.degrees} ({r.detail})", elapsed)


def test_criterion_5_class_arithmetic():
    warm_up()
    t0 = time.perf_counter()
    G, M = cyclic_group(2), roots_of_unity(4)
    H = bar_cohomology(G, M, 4)
    gen = H.generators[0]
    a = WittFamilyClass(G, M, gen)
    sq = witt_class_product(a, a).class4
    res = is_coboundary(sq)
    d = coboundary(G, M, 3, res.witness.values) if res.witness is not None else None
    witness_ok = d is not None and all(not any(M.reduce(r)) for r in (d - sq.values).tolist())
    nontrivial = not is_coboundary(gen).is_coboundary
    v = witt_class_is_trivial(a, 2)
    z = witt_class_is_trivial(WittFamilyClass(G, M, CochainClass.zero(G, M, 4)), 1)
    elapsed = time.perf_counter() - t0
    ok = (str(H.structure) == "Z/2" and nontrivial and res.is_coboundary and witness_ok
          and v.verdict == "Stabilized-Nontrivial" and z.verdict == "Trivial")
    report(5, ok, "H^4(C2; mu4) class arithmetic",
           f"pi*pi coboundary (witness checked: {witness_ok}), pi {v.verdict} "
           f"after 2 doublings, trivial class {z.verdict}", elapsed)


def _dd_zero_everywhere() -> int:
    count = 0
    for m in (2, 3, 4, 6):
        G = cyclic_group(m)
        for N in range(1, 17):
            for a in order_dividing_multipliers(m, N):
                M = cyclic_module(G, N, a)
                top = 4 if m <= 4 else 3
                mats = [differential_matrix(G, M, n) for n in range(top + 1)]
                for D1, D2 in zip(mats, mats[1:]):
                    prod = D2 @ D1
                    if N and (prod % N).any():
                        raise AssertionError(f"d o d != 0 for C{m}, Z/{N}, {a}")
                    count += 1
    return count


def _automorphism_samples() -> int:
    rnd = random.Random(0)
    total = 0
    for spec in ("Q(i)", "Q(zeta_3)", "Q(zeta_8)", "Q(zeta_12)", "Q(sqrt2)", "Q(cbrt2)"):
        F = field_from_spec(spec)
        autos = automorphisms(F)
        for _ in range(1000):
            x = F.element([rnd.randint(-50, 50) / rnd.randint(1, 9) for _ in range(F.degree)])
            y = F.element([rnd.randint(-50, 50) / rnd.randint(1, 9) for _ in range(F.degree)])
            for s in autos:
                if s(x * y) != s(x) * s(y) or s(x + y) != s(x) + s(y):
                    raise AssertionError(f"{spec}: automorphism is not a homomorphism")
            total += 1
    return total


def _grading_corruptions() -> tuple[int, int]:
    rnd = random.Random(1)
    skeletons = []
    for factors, g in (((4,), 2), ((6,), 3), ((2, 2), 2), ((8,), 4), ((9,), 3), ((6,), 6)):
        A = abelian_group(factors)
        skeletons.append(skeleton_from_grading(A, cyclic_group(g),
                                               [A.coords(x)[0] % g for x in A.elements]))
    assert all(galois_grading_check(s) for s in skeletons)
    detected = 0
    for _ in range(50):
        s = rnd.choice(skeletons)
        i = rnd.randrange(len(s.objects))
        old = s.objects[i].galois_degree
        new = rnd.choice([x for x in s.group.elements if x != old])
        detected += not galois_grading_check(s.with_degree(i, new))
    return detected, 50


def test_criterion_6_property_suites():
    warm_up()
    t0 = time.perf_counter()
    rings = shipped_rings()
    fp_ok = all(fpdim_multiplicativity_check(r).ok for r in rings)
    dd = _dd_zero_everywhere()
    autos = _automorphism_samples()
    detected, total = _grading_corruptions()
    elapsed = time.perf_counter() - t0
    ok = fp_ok and detected == total
    report(6, ok, "property suites",
           f"FPdim multiplicative on {len(rings)} rings, d o d = 0 on {dd} differentials, "
           f"{autos} random elements checked, {detected}/{total} corruptions detected", elapsed)


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
