import json
import os
import subprocess
import sys

import pytest

from eqk import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, "--format", "json", *argv)
    return code, json.loads(out), out


def reemit(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# --- schema and exit codes --------------------------------------------------

SUCCESS_CASES = [
    ("group", "S3", "info"),
    ("group", "S3", "subgroups"),
    ("group", "S3", "classes"),
    ("group", "S3", "normal"),
    ("group", "S3", "double-cosets", "A3", "⟨(01)⟩"),
    ("gset", "orbits", "--group", "S3", "orbits: G/A3, G/1"),
    ("gset", "induce", "--group", "S3", "--sub", "A3", "regular"),
    ("gset", "coinduce", "--group", "S3", "--sub", "A3", "regular"),
    ("gset", "restrict", "--group", "S3", "--to", "A3", "orbits: G/<(01)>"),
    ("gset", "decompose", "--group", "S3", "--sub", "A3", "--to", "<(01)>", "trivial:1"),
    ("gset", "decompose-coinduction", "--group", "S3", "--sub", "A3", "--to", "<(01)>", "trivial:1"),
    ("gset", "iso", "--group", "S3", "orbits: G/<(01)>", "orbits: G/<(12)>"),
    ("gset", "quotient-fixed", "--group", "C4", "--normal", "<(02)(13)>", "--level", "1", "regular"),
    ("family", "membership", "--group", "C2", "--universe", "complete", "--n", "2", "<(01)(23)>"),
    ("family", "members", "--group", "C2", "--universe", "trivial", "--n", "2"),
    ("family", "untwist", "--group", "C2", "--universe", "complete", "--n", "2", "<(01)(23)>"),
    ("family", "round-trip", "--group", "C2", "--universe", "complete", "--n", "2", "<(01)(23)>"),
    ("family", "twist", "--group", "C2", "--universe", "complete", "--sub", "G", "[[0,0,0],[0,0,1]]"),
    ("universe", "describe", "--group", "C2", "--universe", "complete"),
    ("universe", "embeds", "--group", "C2", "--universe", "trivial", "regular"),
    ("universe", "transfer-admissible", "--group", "C2", "--universe", "complete", "1", "G"),
    ("universe", "admissible", "--group", "S3", "--universe", "complete", "S3"),
    ("mackey", "basis", "--group", "C2", "--universe", "complete", "--M", "empty", "--level", "C2"),
    ("mackey", "act", "--group", "C2", "--universe", "complete", "--M", "trivial:1", "--level", "G",
     "--index", "0", "id"),
    ("mackey", "res", "--group", "C2", "--universe", "complete", "--level", "G", "--to", "1", "--index", "0"),
    ("mackey", "tr", "--group", "C2", "--universe", "complete", "--level", "1", "--to", "G", "--index", "0"),
    ("mackey", "conj", "--group", "S3", "--universe", "complete", "--level", "<(01)>", "--index", "0", "(012)"),
    ("mackey", "oracle-check", "--group", "S3", "--universe", "complete", "S3", "A3", "<(01)>"),
    ("monoid", "compose", "--group", "C2", "--universe", "complete", "id", "id"),
    ("monoid", "shift", "--group", "C2", "--universe", "complete", "[[0,0]]"),
    ("monoid", "triviality", "--group", "C2", "--universe", "complete", "--module", "P", "--M", "empty"),
    ("norm", "embed", "--group", "C2", "--sub", "1"),
    ("norm", "norm", "--group", "C2", "--sub", "1", "trivial:1"),
    ("norm", "double-coset", "--group", "S3", "--sub", "A3", "--to", "<(01)>", "trivial:1"),
    ("norm", "distribute", "--group", "C2", "--n", "2", "smash", "trivial:1", "trivial:1"),
    ("norm", "distribute", "--group", "C2", "--sub", "1", "norm", "trivial:1", "trivial:1"),
]


@pytest.mark.parametrize("argv", SUCCESS_CASES, ids=lambda a: " ".join(a[:2]))
def test_json_schema_and_round_trip(capsys, argv):
    code, obj, raw = run_json(capsys, *argv)
    assert code == 0
    assert set(obj) == {"command", "inputs", "result", "witness"}
    assert obj["command"].split()[0] == argv[0]
    assert isinstance(obj["inputs"], dict)
    assert reemit(obj) == raw


@pytest.mark.parametrize("argv", SUCCESS_CASES, ids=lambda a: " ".join(a[:2]))
def test_text_output_nonempty(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 0
    assert out.strip() and not err


def test_repeated_invocations_identical(capsys):
    argv = ("mackey", "basis", "--group", "S3", "--universe", "complete", "--M", "empty", "--level", "S3")
    outs = {run_json(capsys, *argv)[2] for _ in range(3)}
    assert len(outs) == 1


# --- examples ---------------------------------------------------------------

def test_double_cosets_example(capsys):
    code, obj, _ = run_json(capsys, "group", "S3", "double-cosets", "A3", "⟨(01)⟩")
    assert code == 0
    assert obj["result"]["count"] == 1


def test_group_info_text(capsys):
    code, out, _ = run(capsys, "group", "S3", "info")
    assert code == 0
    assert out == "S3: order 6 on 3 points, generators (0 1), (0 1 2)\n"


def test_subgroup_listing(capsys):
    _, obj, _ = run_json(capsys, "group", "S3", "subgroups")
    assert obj["result"]["count"] == 6
    assert [s["order"] for s in obj["result"]["subgroups"]] == [1, 2, 2, 2, 3, 6]


def test_classes_listing(capsys):
    code, out, _ = run(capsys, "group", "S3", "classes")
    assert code == 0
    assert out.splitlines()[0] == "4 conjugacy classes of subgroups"


def test_mackey_basis_example(capsys):
    _, obj, _ = run_json(capsys, "mackey", "basis", "--group", "C2", "--universe", "complete",
                         "--M", "empty", "--level", "C2")
    res = obj["result"]
    assert res["rank"] == 2
    assert [b["K_elements"] for b in res["basis"]] == [[0], [0, 1]]
    assert obj["witness"]["basis"] == [{"K": [0], "alpha": []}, {"K": [0, 1], "alpha": []}]


def test_transfer_admissible_special_universes(capsys):
    _, obj, _ = run_json(capsys, "universe", "transfer-admissible", "--group", "C2",
                         "--universe", "complete", "1", "G")
    assert obj["result"] == {"admissible": True}
    _, obj, _ = run_json(capsys, "universe", "transfer-admissible", "--group", "C2",
                         "--universe", "trivial", "1", "G")
    assert obj["result"] == {"admissible": False}


def test_family_membership_depends_on_universe(capsys):
    args = ("family", "membership", "--group", "C2", "--n", "2", "<(01)(23)>")
    assert run_json(capsys, *args, "--universe", "complete")[1]["result"] == {"member": True}
    _, obj, _ = run_json(capsys, *args, "--universe", "trivial")
    assert obj["result"] == {"member": False}
    assert obj["witness"]["embedding"]["embeds"] is False


def test_family_members_count(capsys):
    code, out, _ = run(capsys, "family", "members", "--group", "C2", "--universe", "trivial", "--n", "2")
    assert code == 0
    assert out.startswith("2 of 5 subgroups")


def test_gset_decompose_verified(capsys):
    _, obj, _ = run_json(capsys, "gset", "decompose", "--group", "S3", "--sub", "A3",
                         "--to", "<(01)>", "trivial:1")
    assert obj["result"] == {"summands": 1, "verified": True}


def test_gset_iso(capsys):
    yes = run_json(capsys, "gset", "iso", "--group", "S3", "orbits: G/<(01)>", "orbits: G/<(12)>")[1]
    no = run_json(capsys, "gset", "iso", "--group", "S3", "orbits: G/A3", "orbits: G/<(12)>")[1]
    assert yes["result"]["isomorphic"] and yes["witness"] is not None
    assert not no["result"]["isomorphic"] and no["witness"] is None


def test_quotient_fixed_c4(capsys):
    _, obj, _ = run_json(capsys, "gset", "quotient-fixed", "--group", "C4", "--normal", "<(02)(13)>",
                         "--level", "1", "regular")
    assert obj["result"]["verified"] is True


def test_triviality_witness_included(capsys):
    _, obj, _ = run_json(capsys, "monoid", "triviality", "--group", "C2", "--universe", "complete",
                         "--module", "P", "--M", "trivial:1")
    assert obj["result"]["verdict"] == "Nontrivial"
    assert {"phi", "x", "phi_x"} <= set(obj["witness"])
    _, obj, _ = run_json(capsys, "monoid", "triviality", "--group", "C2", "--universe", "complete",
                         "--module", "P", "--M", "empty")
    assert obj["result"]["verdict"] == "Trivial"


def test_norm_distribute_counts(capsys):
    _, obj, _ = run_json(capsys, "norm", "distribute", "--group", "C2", "--n", "2",
                         "smash", "trivial:1", "trivial:1")
    assert obj["result"] == {"summands": 3, "expected": 3, "verified": True}


def test_res_coefficient(capsys):
    _, obj, _ = run_json(capsys, "mackey", "res", "--group", "C2", "--universe", "complete",
                         "--level", "G", "--to", "1", "--index", "0")
    assert obj["command"] == "mackey res"


# --- errors -----------------------------------------------------------------

def test_transfer_not_admissible_exit_1(capsys):
    code, obj, _ = run_json(capsys, "mackey", "tr", "--group", "C2", "--universe", "trivial",
                            "--level", "1", "--to", "G", "--index", "0")
    assert code == 1
    assert obj["error"]["kind"] == "TransferNotAdmissible"
    assert obj["result"] is None and obj["witness"] is None


def test_missing_index_is_parse_error(capsys):
    code, obj, _ = run_json(capsys, "mackey", "tr", "--group", "C2", "--universe", "trivial",
                            "--level", "1", "--to", "G")
    assert code == 2
    assert obj["error"]["kind"] == "ParseError"


def test_not_in_family_exit_1(capsys):
    code, _, err = run(capsys, "family", "untwist", "--group", "C2", "--universe", "complete",
                       "--n", "2", "#1")
    assert code == 1
    assert err.startswith("error [NotInFamily]")


@pytest.mark.parametrize("argv", [
    ("group", "S3", "bogus"),
    ("nosuch",),
    (),
    ("gset", "orbits", "--group", "S3", "--X", "S3/A3"),
    ("--format", "yaml", "group", "S3", "info"),
    ("--format",),
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert "error [UsageError]" in err


@pytest.mark.parametrize("argv", [
    ("group", "S3", "double-cosets", "A3"),
    ("group", "Z9", "info"),
    ("gset", "orbits", "--group", "S3", "S3/A3"),
    ("universe", "embeds", "--group", "C2", "--universe", "nonsense", "regular"),
    ("monoid", "compose", "--group", "C2", "--universe", "complete", "id"),
    ("check", "99"),
])
def test_parse_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error [")


def test_usage_error_json(capsys):
    code, obj, raw = run_json(capsys, "group", "S3", "bogus")
    assert code == 2
    assert obj["error"]["kind"] == "UsageError"
    assert set(obj) == {"command", "inputs", "result", "witness", "error"}
    assert reemit(obj) == raw


def test_format_placement(capsys):
    a = run(capsys, "--format", "json", "group", "S3", "classes")[1]
    b = run(capsys, "group", "S3", "classes", "--format", "json")[1]
    c = run(capsys, "--format=json", "group", "S3", "classes")[1]
    assert a == b == c
    json.loads(a)


def test_options_and_positionals_interleave(capsys):
    a = run(capsys, "gset", "iso", "orbits: G/A3", "--group", "S3", "orbits: G/A3")
    b = run(capsys, "gset", "iso", "--group", "S3", "orbits: G/A3", "orbits: G/A3")
    assert a == b
    assert a[0] == 0


def test_help(capsys):
    code, out, _ = run(capsys, "--help")
    assert code == 0
    for cmd in ("group", "gset", "family", "universe", "mackey", "monoid", "norm", "check"):
        assert cmd in out


def test_order_cap_env(capsys, monkeypatch):
    monkeypatch.setenv("EQK_MAX_GROUP_ORDER", "4")
    code, _, err = run(capsys, "group", "S3", "info")
    assert code != 0
    assert "error [" in err


# --- check command ----------------------------------------------------------

def test_check_single_criterion(capsys):
    code, out, _ = run(capsys, "check", "6")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("PASS  6 tom-dieck-ranks")
    assert lines[-1] == "1/1 criteria passed"


def test_check_json_report(capsys):
    code, obj, raw = run_json(capsys, "check", "tom-dieck-ranks")
    assert code == 0
    assert obj["result"]["passed"] is True
    assert obj["witness"] == {}
    assert json.dumps(obj, sort_keys=True, indent=2) + "\n" == raw


def test_check_failure_exit_3(capsys, monkeypatch):
    from eqk import checks

    def broken(r):
        r.cases = 1
        r.fail({"reason": "planted"})

    name, limit, _ = checks.CRITERIA[1]
    monkeypatch.setitem(checks.CRITERIA, 1, (name, limit, broken))
    code, out, _ = run(capsys, "check", "1")
    assert code == 3
    assert out.startswith("FAIL  1")
    assert 'counterexample: {"reason": "planted"}' in out


def test_module_entry_point():
    env = dict(os.environ, PYTHONHASHSEED="7")
    args = [sys.executable, "-m", "eqk", "--format", "json", "group", "S3", "double-cosets", "A3", "⟨(01)⟩"]
    p1 = subprocess.run(args, capture_output=True, text=True, env=env)
    env["PYTHONHASHSEED"] = "99"
    p2 = subprocess.run(args, capture_output=True, text=True, env=env)
    assert p1.returncode == p2.returncode == 0
    assert p1.stdout == p2.stdout
    assert json.loads(p1.stdout)["result"]["count"] == 1
