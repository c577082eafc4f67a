from __future__ import annotations

import json

import pytest

from wittkit import cli
from wittkit.equivariant import GaloisAction, check_action_coherence
from wittkit.galoiswitt import GradedSkeleton
from wittkit.groupcoh import CochainClass, GModule
from wittkit.groups import FiniteGroup
from wittkit.pointedcat import PointedBraidedCategory


def write(tmp_path, name, data) -> str:
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(p)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_group(tmp_path):
    G = cli.parse_input(write(tmp_path, "g.json", {"cyclic": 2}))
    assert isinstance(G, FiniteGroup) and G.order == 2


def test_parse_fixture_action(tmp_path):
    act = cli.parse_input(write(tmp_path, "a.json", {"fixture": "appendix-a"}))
    assert isinstance(act, GaloisAction) and check_action_coherence(act)


def test_parse_non_cocycle(tmp_path):
    data = {"group": {"cyclic": 2}, "module": {"factors": [8], "action": {"1": [[1]]}},
            "degree": 1, "cocycle": {"1": [1]}}
    with pytest.raises(cli.InvariantViolation) as info:
        cli.parse_input(write(tmp_path, "c.json", data))
    assert info.value.name == "bar differential nonzero"


def test_parse_cocycle_and_module(tmp_path):
    data = {"group": {"cyclic": 2}, "module": {"factors": [8], "action": {"1": [[-1]]}},
            "cocycle": {"1,1": [4]}}
    c = cli.parse_input(write(tmp_path, "c.json", data))
    assert isinstance(c, CochainClass) and c.degree == 2
    M = cli.parse_input(write(tmp_path, "m.json", {"group": {"cyclic": 2}, "factors": [8],
                                                    "action": {"1": [[-1]]}}))
    assert isinstance(M, GModule)


def test_parse_category_and_skeleton(tmp_path):
    cat = cli.parse_input(write(tmp_path, "cat.json", {
        "group": {"cyclic": 2}, "field": {"cyclotomic": 4},
        "associator": {"1,1,1": "-1"}, "braiding": {"1,1": ["0", "1"]}}))
    assert isinstance(cat, PointedBraidedCategory)
    skel = cli.parse_input(write(tmp_path, "s.json", {
        "group": {"cyclic": 2},
        "objects": [{"label": "V0", "galois_degree": 0}, {"label": "V1", "galois_degree": 1}],
        "fusion_support": {"0,0": [0], "0,1": [1], "1,0": [1], "1,1": [0]}}))
    assert isinstance(skel, GradedSkeleton)


def test_parse_errors(tmp_path):
    with pytest.raises(cli.ParseError) as info:
        cli.parse_input(write(tmp_path, "bad.json", '{\n  "cyclic": 2,\n}'))
    assert info.value.line == 3
    with pytest.raises(cli.ParseError):
        cli.parse_input(write(tmp_path, "x.json", {"nothing": 1}))
    with pytest.raises(cli.ParseError):
        cli.parse_input(tmp_path / "missing.json")


def test_verify_certificate(capsys):
    code, out, _ = run(capsys, "verify", "appendix-a")
    assert code == 0
    assert out.count("[PASS]") == 9 and out.count("[SKIP]") == 1


def test_run_tower_table(capsys):
    code, out, _ = run(capsys, "run", "lemma-5-3", "--max-degree", "6", "--tower", "3")
    assert code == 0
    for n in range(1, 7):
        want = "Z/2" if n % 2 == 0 else "0"
        assert f"[PASS] H^{n} stable image: {want} along" in out


def test_run_decomposition_scenario(capsys):
    code, out, _ = run(capsys, "run", "example-1-6", "--base", "Q", "--ext", "Q(i)")
    assert code == 0
    assert "degrees over K [1, 1]" in out
    assert "component 0 = K" in out and "component 1 = K" in out


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "--base", "Q", "--ext", "Q(cbrt2)")
    assert code == 0 and "[1, 2]" in out and "irreducible" in out


def test_witt_class(capsys, tmp_path):
    path = write(tmp_path, "pi.json", {"1,1,1,1": [2]})
    code, out, _ = run(capsys, "witt-class", "--gamma", "C2", "--coeff", "mu4:inv",
                       "--cocycle", path, "--check-trivial", "--depth", "2")
    assert code == 0 and "Stabilized-Nontrivial" in out
    bad = write(tmp_path, "bad.json", {"1,1,1,1": [1]})
    code, _, err = run(capsys, "witt-class", "--cocycle", bad)
    assert code == 2 and "bar differential nonzero" in err


def test_grading_check_exit_codes(capsys, tmp_path):
    good = {"group": {"cyclic": 2},
            "objects": [{"label": "V0", "galois_degree": 0}, {"label": "V1", "galois_degree": 1}],
            "fusion_support": {"0,0": [0], "0,1": [1], "1,0": [1], "1,1": [0]}}
    code, _, _ = run(capsys, "grading-check", write(tmp_path, "g.json", good))
    assert code == 0
    good["objects"][0]["galois_degree"] = 1
    code, out, _ = run(capsys, "grading-check", write(tmp_path, "b.json", good))
    assert code == 1 and "[FAIL]" in out


def test_usage_and_budget_codes(capsys):
    assert run(capsys, "run", "nope")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    code, _, err = run(capsys, "run", "cohomology", "--gamma", "C2", "--coeff", "mu16:inv",
                       "--max-degree", "9", "--work-budget", "1000")
    assert code == 3 and "budget" in err


def test_other_scenarios(capsys):
    for name in ("witt-family", "center", "fusion-check", "cohomology"):
        code, out, _ = run(capsys, "run", name)
        assert code == 0, out


def test_deterministic_output(capsys):
    first = run(capsys, "run", "example-1-6")[1]
    second = run(capsys, "run", "example-1-6")[1]
    assert first == second


def test_json_round_trip(capsys, tmp_path):
    out = tmp_path / "center.json"
    code, _, _ = run(capsys, "run", "center", "--json", str(out))
    assert code == 0
    cat = cli.parse_input(out)
    assert isinstance(cat, PointedBraidedCategory) and cat.group.order == 4
    out = tmp_path / "coh.json"
    run(capsys, "run", "cohomology", "--json", str(out))
    report = json.loads(out.read_text())
    assert report["exit_code"] == 0
    out = tmp_path / "ring.json"
    ring_file = write(tmp_path, "r.json", {"basis": ["1", "t"], "N": {
        "1,1": {"1": 1}, "1,t": {"t": 1}, "t,1": {"t": 1}, "t,t": {"1": 1, "t": 1}}})
    code, _, _ = run(capsys, "run", "fusion-check", ring_file, "--json", str(out))
    assert code == 0
    ring = cli.parse_input(out)
    assert ring.N[1][1] == (1, 1)
