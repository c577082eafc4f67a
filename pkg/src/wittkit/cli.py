"""Command-line front end.

    wittkit verify appendix-a
    wittkit run lemma-5-3 --max-degree 6 --tower 3
    wittkit decompose --base Q --ext "Q(zeta_8)"
    wittkit witt-class --gamma C2 --coeff mu4:inv --cocycle c.json --check-trivial --depth 4
    wittkit grading-check skeleton.json

Exit codes: 0 success, 1 check failure, 2 usage or parse error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .checks import CheckResult
from .groupcoh import (
    BudgetExceeded,
    CochainClass,
    GModule,
    NotCocycle,
    bar_cohomology,
    cyclic_cohomology,
    cyclic_module,
    doubling_map,
    is_coboundary,
    module_from_spec,
    module_to_spec,
    roots_of_unity,
    stabilized_cohomology,
)
from .groupcoh.bar import DEFAULT_WORK_BUDGET
from .groups import FiniteGroup, group_from_spec, group_to_spec

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

SCENARIOS = ("appendix-a", "lemma-5-3", "example-1-6", "witt-family", "cohomology",
             "center", "fusion-check", "grading-check")

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"


class ParseError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class InvariantViolation(ValueError):
    def __init__(self, name: str):
        super().__init__(name)
        self.name = name


class UsageError(ValueError):
    pass


@dataclass
class ScenarioReport:
    scenario: str
    checks: list[dict] = field(default_factory=list)
    payload: dict | None = None

    def add(self, name: str, status: str | bool, detail: str = "") -> bool:
        if isinstance(status, bool):
            status = PASS if status else FAIL
        self.checks.append({"name": name, "status": status, "detail": detail})
        return status != FAIL

    def add_check(self, name: str, result: CheckResult, ok_detail: str = "") -> bool:
        detail = ok_detail if result.ok else f"{result.detail} at {result.violation}"
        return self.add(name, result.ok, detail)

    @property
    def exit_code(self) -> int:
        return EXIT_FAIL if any(c["status"] == FAIL for c in self.checks) else EXIT_OK

    def text(self) -> str:
        lines = [f"== {self.scenario} =="]
        for c in self.checks:
            tail = f": {c['detail']}" if c["detail"] else ""
            lines.append(f"[{c['status']}] {c['name']}{tail}")
        counts = {s: sum(c["status"] == s for c in self.checks) for s in (PASS, FAIL, SKIP)}
        lines.append(f"{counts[PASS]} passed, {counts[FAIL]} failed, {counts[SKIP]} skipped; "
                     f"exit {self.exit_code}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        out: dict[str, Any] = {"scenario": self.scenario, "checks": self.checks,
                               "exit_code": self.exit_code}
        if self.payload is not None:
            out["payload"] = self.payload
        return out


# --- input parsing -------------------------------------------------------------------


def _load_json(path: str | Path) -> Any:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ParseError(0, f"cannot read {p}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.msg) from None


def _detect_kind(data: dict) -> str:
    if "kind" in data:
        return data["kind"]
    if "fixture" in data:
        return "action"
    if "basis" in data and "N" in data:
        return "ring"
    if "objects" in data and "fusion_support" in data:
        return "skeleton"
    if "cocycle" in data:
        return "cocycle"
    if "perm" in data:
        return "action"
    if "group" in data and ("braiding" in data or "associator" in data or "field" in data):
        return "category"
    if "factors" in data:
        return "module"
    if {"cyclic", "abelian", "table"} & set(data):
        return "group"
    raise ParseError(1, "cannot tell which kind of object this file describes")


def parse_object(data: Any):
    """Validate a decoded JSON payload into a library object."""
    from .equivariant import action_from_spec, check_action_coherence
    from .fusionring import check_fusion_axioms, ring_from_spec
    from .galoiswitt import skeleton_from_spec
    from .pointedcat import category_from_spec

    if not isinstance(data, dict):
        raise ParseError(1, "top level must be a JSON object")
    if "payload" in data and "scenario" in data:
        return parse_object(data["payload"])
    kind = _detect_kind(data)
    try:
        if kind == "group":
            return group_from_spec(data)
        if kind == "module":
            G = group_from_spec(data["group"])
            return module_from_spec(G, data)
        if kind == "cocycle":
            G = group_from_spec(data["group"])
            M = module_from_spec(G, data["module"])
            degree = int(data.get("degree", _key_length(data["cocycle"])))
            try:
                return CochainClass.from_mapping(G, M, degree, data["cocycle"])
            except NotCocycle:
                raise InvariantViolation("bar differential nonzero") from None
        if kind == "category":
            return category_from_spec(data)
        if kind == "action":
            if data.get("fixture") == "appendix-a":
                from .fixtures import real_witt_action
                return real_witt_action()
            base = category_from_spec(data["category"])
            action = action_from_spec(base, data)
            r = check_action_coherence(action)
            if not r.ok:
                raise InvariantViolation(f"action coherence ({r.detail} at {r.violation})")
            return action
        if kind == "ring":
            ring = ring_from_spec(data)
            r = check_fusion_axioms(ring)
            if not r.ok:
                raise InvariantViolation(f"fusion axioms ({r.violation})")
            return ring
        if kind == "skeleton":
            return skeleton_from_spec(data)
    except (KeyError, TypeError) as exc:
        raise ParseError(1, f"malformed {kind}: missing or mistyped {exc}") from None
    except InvariantViolation:
        raise
    except ValueError as exc:
        raise InvariantViolation(f"{type(exc).__name__}: {exc}") from None
    raise ParseError(1, f"unknown kind {kind!r}")


def parse_input(path: str | Path):
    """Read a JSON file and return the validated group, module, category,
    action, cocycle, ring or skeleton it describes."""
    return parse_object(_load_json(path))


def _key_length(mapping: dict) -> int:
    for key in mapping:
        return len([s for s in str(key).split(",") if s.strip()])
    raise ParseError(1, "empty cocycle needs an explicit degree")


def parse_coeff(spec: str, G: FiniteGroup) -> GModule:
    """``mu4:inv``, ``mu8:triv``, ``Z/5:2`` (generator acts by 2), or ``Z:inv``."""
    name, _, act = spec.partition(":")
    name = name.strip()
    if name.startswith("mu"):
        order = int(name[2:])
    elif name.startswith("Z/"):
        order = int(name[2:])
    elif name == "Z":
        order = 0
    else:
        raise UsageError(f"unknown coefficient module {spec!r}")
    act = act or "triv"
    mult = {"inv": -1, "triv": 1}.get(act)
    if mult is None:
        try:
            mult = int(act)
        except ValueError:
            raise UsageError(f"unknown action {act!r}") from None
    label = f"mu{order}" if name.startswith("mu") else name
    return cyclic_module(G, order, mult, label)


# --- scenarios ------------------------------------------------------------------------


def scenario_appendix_a(args) -> ScenarioReport:
    from .galoiswitt import CertificateFailure, real_witt_certificate

    rep = ScenarioReport("appendix-a")
    try:
        cert = real_witt_certificate()
    except CertificateFailure as exc:
        cert = exc.report
    for name, ok, detail in cert.checks:
        rep.add(name, ok, detail)
    for text in cert.not_mechanized:
        rep.add("classification", SKIP, f"not mechanized: {text}")
    return rep


def scenario_lemma_5_3(args) -> ScenarioReport:
    rep = ScenarioReport("lemma-5-3")
    tower_len = args.tower if args.tower is not None else 3
    if tower_len < 2:
        raise UsageError("--tower needs at least 2 steps")
    orders = [2 ** k for k in range(2, 3 + tower_len)]
    levels = [roots_of_unity(N) for N in orders]
    maps = [doubling_map(a, b) for a, b in zip(levels, levels[1:])]
    chain = " -> ".join(f"mu{N}" for N in orders)
    table = {}
    for n in range(1, (args.max_degree or 6) + 1):
        s = stabilized_cohomology(2, maps, n, args.work_budget)
        want = "Z/2" if n % 2 == 0 else "0"
        table[n] = str(s)
        rep.add(f"H^{n} stable image", str(s) == want, f"{s} along {chain}")
    rep.payload = {"kind": "table", "degrees": table}
    return rep


def _decompose_into(rep: ScenarioReport, base_spec: str, ext_spec: str, args) -> None:
    from .galoiswitt import tensor_decompose, verify_action_formula
    from .numfield import NoRoot, field_from_spec

    k, K = field_from_spec(base_spec), field_from_spec(ext_spec)
    dec = tensor_decompose(k, K, args.height_bound)
    tag = f"{K.label}/{k.label}"
    parts = [c.describe() for c in dec.components]
    expected = K.degree if k != K else 1
    rep.add(f"{tag} components", sum(dec.degrees) == expected,
            f"degrees over K {dec.degrees}: " + ", ".join(parts))
    for i, c in enumerate(dec.components):
        if c.degree_over_K == 1:
            rep.add(f"{tag} component {i} = K", c.automorphism is not None,
                    f"root {c.automorphism(K.gen)}" if c.automorphism else "")
        elif isinstance(c.certificate, NoRoot):
            lo, hi = c.certificate.value_bounds
            rep.add(f"{tag} component {i} irreducible", True,
                    f"discriminant < 0 in real embedding {c.certificate.embedding_index} "
                    f"(value in [{float(lo):.6g}, {float(hi):.6g}])")
    if dec.is_galois:
        rep.add(f"{tag} Galois", len(dec.components) == len(dec.galois_group),
                f"{len(dec.components)} components, |Gamma| = {len(dec.galois_group)}")
        rep.add_check(f"{tag} action formula", verify_action_formula(dec),
                      verify_action_formula(dec).detail)
    else:
        rep.add(f"{tag} Galois", SKIP, "not Galois; action formula not applicable")


def scenario_example_1_6(args) -> ScenarioReport:
    rep = ScenarioReport("example-1-6")
    base = args.base or "Q"
    exts = [args.ext] if args.ext else ["Q(i)", "Q(cbrt2)", "Q(zeta_8)"]
    for ext in exts:
        _decompose_into(rep, base, ext, args)
    return rep


def _witt_generator():
    from .groups import cyclic_group

    G = cyclic_group(2)
    M = roots_of_unity(4)
    return CochainClass.from_mapping(G, M, 4, {(1, 1, 1, 1): (2,)})


def scenario_witt_family(args) -> ScenarioReport:
    from .galoiswitt import WittFamilyClass, witt_class_is_trivial, witt_class_product

    rep = ScenarioReport("witt-family")
    c = _witt_generator()
    a = WittFamilyClass(c.group, c.module, c)
    H = bar_cohomology(c.group, c.module, 4, args.work_budget)
    rep.add("H^4(C2; mu4) generator", not is_coboundary(c, args.work_budget).is_coboundary,
            f"H^4 = {H.structure}, pi(1,1,1,1) = -1")
    sq = witt_class_product(a, a).class4
    res = is_coboundary(sq, args.work_budget)
    ok = res.is_coboundary and res.witness is not None and _witness_ok(res.witness, sq)
    rep.add("pi * pi is a coboundary", ok, "witness verified by applying d" if ok else "")
    depth = args.tower if args.tower is not None else 2
    v = witt_class_is_trivial(a, depth, args.work_budget)
    rep.add(f"survives {depth} doublings", v.verdict == "Stabilized-Nontrivial",
            f"{v.verdict}, class orders {list(getattr(v, 'class_orders', ()))}")
    z = WittFamilyClass(c.group, c.module, CochainClass.zero(c.group, c.module, 4))
    vz = witt_class_is_trivial(z, 1, args.work_budget)
    rep.add("trivial class", vz.verdict == "Trivial" and vz.level <= 1,
            f"{vz.verdict} at level {vz.level}")
    return rep


def _witness_ok(witness: CochainClass, target: CochainClass) -> bool:
    from .groupcoh import coboundary

    M = target.module
    d = coboundary(target.group, M, witness.degree, witness.values)
    return all(not any(M.reduce(row)) for row in (d - target.values).tolist())


def scenario_cohomology(args) -> ScenarioReport:
    rep = ScenarioReport("cohomology")
    if args.input:
        obj = parse_input(args.input)
        if isinstance(obj, CochainClass):
            obj = obj.module
        if not isinstance(obj, GModule):
            raise UsageError("cohomology input must describe a module")
        M = obj
    else:
        G = group_from_spec(args.gamma or "C2")
        M = parse_coeff(args.coeff or "mu4:inv", G)
    G = M.group
    cyclic = G.abelian_factors is not None and len(G.abelian_factors) == 1
    payload = {"kind": "cohomology", "group": group_to_spec(G), "module": module_to_spec(M),
               "degrees": {}}
    for n in range(0, (args.max_degree if args.max_degree is not None else 4) + 1):
        H = bar_cohomology(G, M, n, args.work_budget)
        payload["degrees"][n] = H.structure.to_json()
        if cyclic:
            oracle = cyclic_cohomology(G.order, M, n)
            rep.add(f"H^{n}", H.structure == oracle, f"{H.structure} (periodic oracle {oracle})")
        else:
            rep.add(f"H^{n}", PASS, str(H.structure))
    rep.payload = payload
    return rep


def scenario_center(args) -> ScenarioReport:
    from .numfield import field_from_spec
    from .pointedcat import (
        centralizer_order_check,
        check_hexagons,
        check_pentagon,
        double_centralizer_check,
        drinfeld_center_pointed,
        muger_center,
    )

    rep = ScenarioReport("center")
    if args.input:
        cat = parse_input(args.input)
    else:
        A = group_from_spec(args.gamma or "C2")
        F = field_from_spec(args.field or "Q(i)")
        cat = drinfeld_center_pointed(A, F)
    rep.add_check("pentagon", check_pentagon(cat), "associator is a 3-cocycle")
    rep.add_check("hexagons", check_hexagons(cat), "both hexagons hold")
    Z2 = muger_center(cat)
    rep.add("non-degenerate", Z2.is_trivial, f"Mueger center {Z2}")
    if Z2.is_trivial:
        rep.add_check("double centralizer", double_centralizer_check(cat),
                      f"all {len(cat.subgroups)} subgroups")
        rep.add_check("centralizer orders", centralizer_order_check(cat), "|H| |C(H)| = |A|")
    rep.payload = cat.to_json()
    return rep


def scenario_fusion_check(args) -> ScenarioReport:
    from .fusionring import (
        check_fusion_axioms,
        fpdim_category,
        fpdim_multiplicativity_check,
        shipped_rings,
    )

    rep = ScenarioReport("fusion-check")
    rings = [parse_input(args.input)] if args.input else shipped_rings()
    for ring in rings:
        name = ring.label or "ring"
        r = check_fusion_axioms(ring)
        rep.add_check(f"{name} axioms", r, f"rank {len(ring.basis_labels)}")
        if r.ok:
            rep.add_check(f"{name} FPdim multiplicative", fpdim_multiplicativity_check(ring))
            if ring.galois_trivial:
                rep.add(f"{name} FPdim", PASS, str(fpdim_category(ring)))
    if args.input:
        rep.payload = rings[0].to_json()
    return rep


def scenario_grading_check(args) -> ScenarioReport:
    from .galoiswitt import GradedSkeleton, galois_grading_check

    if not args.input:
        raise UsageError("grading-check needs a skeleton file")
    skel = parse_input(args.input)
    if not isinstance(skel, GradedSkeleton):
        raise UsageError("input does not describe a graded skeleton")
    rep = ScenarioReport("grading-check")
    r = galois_grading_check(skel)
    rep.add_check("grading", r, f"{len(skel.objects)} objects over {skel.group.label}")
    return rep


RUNNERS: dict[str, Callable[[argparse.Namespace], ScenarioReport]] = {
    "appendix-a": scenario_appendix_a,
    "lemma-5-3": scenario_lemma_5_3,
    "example-1-6": scenario_example_1_6,
    "witt-family": scenario_witt_family,
    "cohomology": scenario_cohomology,
    "center": scenario_center,
    "fusion-check": scenario_fusion_check,
    "grading-check": scenario_grading_check,
}


def run_scenario(name: str, args: argparse.Namespace) -> ScenarioReport:
    if name not in RUNNERS:
        raise UsageError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}")
    return RUNNERS[name](args)


def witt_class_command(args) -> ScenarioReport:
    from .galoiswitt import WittFamilyClass, witt_class_is_trivial

    G = group_from_spec(args.gamma)
    M = parse_coeff(args.coeff, G)
    rep = ScenarioReport("witt-class")
    if args.cocycle:
        data = _load_json(args.cocycle)
        mapping = data.get("cocycle", data) if isinstance(data, dict) else None
        if not isinstance(mapping, dict):
            raise ParseError(1, "cocycle file must be a JSON object")
        try:
            c = CochainClass.from_mapping(G, M, 4, mapping)
        except NotCocycle:
            raise InvariantViolation("bar differential nonzero") from None
    H = bar_cohomology(G, M, 4, args.work_budget)
    if not args.cocycle:
        c = H.generators[0] if H.generators else CochainClass.zero(G, M, 4)
    a = WittFamilyClass(G, M, c)
    rep.add("cocycle", PASS, f"degree-4 cocycle over {G.label} in {M.label}; H^4 = {H.structure}")
    if args.check_trivial:
        v = witt_class_is_trivial(a, args.depth, args.work_budget)
        detail = v.verdict + (f" at level {v.level}" if v.verdict == "Trivial"
                              else f" through depth {v.depth}")
        rep.add("triviality", PASS, detail)
        rep.payload = {"kind": "verdict", "verdict": v.verdict}
    return rep


# --- argument parsing -----------------------------------------------------------------


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", metavar="PATH", help="also write the report as JSON")
    p.add_argument("--work-budget", type=int, default=DEFAULT_WORK_BUDGET,
                   help="cap on dense cochain work (default %(default)s)")
    p.add_argument("--height-bound", type=int, default=10 ** 6,
                   help="denominator bound for rational reconstruction")
    p.add_argument("--tower", type=int, default=None, help="number of doubling steps")
    p.add_argument("--max-degree", type=int, default=None, help="largest cohomological degree")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wittkit", description="Exact checks for Galois-equivariant "
                     "braided fusion data and their cohomology classes.")
    parser.add_argument("--version", action="version", version=f"wittkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run a named scenario")
    p.add_argument("scenario", help=", ".join(SCENARIOS))
    p.add_argument("input", nargs="?", help="input file for scenarios that take one")
    p.add_argument("--base", default=None)
    p.add_argument("--ext", default=None)
    p.add_argument("--gamma", default=None, help="group, e.g. C2")
    p.add_argument("--coeff", default=None, help="coefficients, e.g. mu4:inv")
    p.add_argument("--field", default=None)
    _common(p)

    p = sub.add_parser("verify", help="run a built-in certificate")
    p.add_argument("target", choices=["appendix-a"])
    _common(p)

    p = sub.add_parser("decompose", help="split K (x)_k K into fields")
    p.add_argument("--base", default="Q")
    p.add_argument("--ext", required=True)
    _common(p)

    p = sub.add_parser("witt-class", help="inspect an H^4 Witt-family class")
    p.add_argument("--gamma", default="C2")
    p.add_argument("--coeff", default="mu4:inv")
    p.add_argument("--cocycle", default=None, help="JSON file with the 4-cocycle")
    p.add_argument("--check-trivial", action="store_true")
    p.add_argument("--depth", type=int, default=4)
    _common(p)

    p = sub.add_parser("grading-check", help="check a Galois-grading skeleton")
    p.add_argument("input")
    _common(p)
    return parser


def _dispatch(args) -> ScenarioReport:
    cmd = args.command
    if cmd == "run":
        return run_scenario(args.scenario, args)
    if cmd == "verify":
        return scenario_appendix_a(args)
    if cmd == "decompose":
        rep = ScenarioReport("decompose")
        _decompose_into(rep, args.base, args.ext, args)
        return rep
    if cmd == "witt-class":
        return witt_class_command(args)
    if cmd == "grading-check":
        return scenario_grading_check(args)
    raise UsageError(f"unknown command {cmd!r}")


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    t0 = time.perf_counter()
    try:
        rep = _dispatch(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ParseError, InvariantViolation) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(rep.text())
    print(f"elapsed {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    if args.json:
        Path(args.json).write_text(json.dumps(rep.to_json(), indent=2, sort_keys=True) + "\n")
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
