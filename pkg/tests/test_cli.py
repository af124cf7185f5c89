"""CLI contract tests: exit codes, stable stdout layout, idempotence."""

import hashlib
import json

from polydiam.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# ------------------------------------------------------------------ paths


def test_paths_counts_layout(capsys):
    code, out, err = run(capsys, "paths", "-d", "4", "-n", "10", "-k", "6")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "d n k m l count"
    assert lines[1:] == [
        "4 10 6 0 0 15",
        "4 10 6 1 1 24",
        "4 10 6 2 2 16",
        "total 55",
    ]


def test_paths_invalid_parameters_exit_2(capsys):
    code, _, err = run(capsys, "paths", "-d", "4", "-n", "8", "-k", "3")
    assert code == 2
    assert "k >= d" in err


def test_paths_class_filter_and_file(tmp_path, capsys):
    out_file = tmp_path / "p.jsonl"
    code, out, _ = run(
        capsys, "paths", "-d", "4", "-n", "10", "-k", "6",
        "--class", "1,1", "--out", str(out_file),
    )
    assert code == 0
    assert "4 10 6 1 1 24" in out
    assert len(out_file.read_text().splitlines()) == 24
    code, _, err = run(
        capsys, "paths", "-d", "4", "-n", "10", "-k", "6", "--class", "9,9"
    )
    assert code == 2


def test_paths_idempotent_unless_force(tmp_path, capsys):
    out_file = tmp_path / "p.jsonl"
    run(capsys, "paths", "-d", "2", "-n", "6", "-k", "4", "--out", str(out_file))
    before = out_file.read_text()
    out_file.write_text("sentinel\n")
    run(capsys, "paths", "-d", "2", "-n", "6", "-k", "4", "--out", str(out_file))
    assert out_file.read_text() == "sentinel\n"
    run(
        capsys, "paths", "-d", "2", "-n", "6", "-k", "4",
        "--out", str(out_file), "--force",
    )
    assert out_file.read_text() == before


# ----------------------------------------------------------------- encode


def test_encode_deterministic_and_bad_index(tmp_path, capsys):
    pf = tmp_path / "p.jsonl"
    run(capsys, "paths", "-d", "4", "-n", "10", "-k", "6", "--out", str(pf))
    a = tmp_path / "a.cnf"
    b = tmp_path / "b.cnf"
    code, _, err = run(capsys, "encode", str(pf), "--index", "0", "--out", str(a))
    assert code == 0 and "digest=" in err
    run(capsys, "encode", str(pf), "--index", "0", "--out", str(b))
    assert (
        hashlib.sha256(a.read_bytes()).hexdigest()
        == hashlib.sha256(b.read_bytes()).hexdigest()
    )
    header = next(
        l for l in a.read_text().splitlines() if l.startswith("p cnf")
    ).split()
    assert int(header[2]) == 14742
    code, _, err = run(capsys, "encode", str(pf), "--index", "99", "--out", str(a))
    assert code == 2


# ------------------------------------------------------------ solve/split


def test_solve_exit_codes(tmp_path, capsys):
    sat = tmp_path / "sat.cnf"
    sat.write_text("p cnf 2 2\n1 0\n-1 2 0\n")
    code, out, _ = run(capsys, "solve", str(sat), "--timeout", "60")
    assert code == 1
    assert out.splitlines()[0] == "verdict SAT"
    assert "model 1 2" in out
    unsat = tmp_path / "unsat.cnf"
    unsat.write_text("p cnf 1 2\n1 0\n-1 0\n")
    code, out, _ = run(capsys, "solve", str(unsat), "--timeout", "60")
    assert code == 0
    assert out.splitlines()[0] == "verdict UNSAT"
    code, out, _ = run(capsys, "solve", str(sat), "--assume", "-2", "--timeout", "60")
    assert code == 0  # forced UNSAT under assumption


def test_split_outputs_cubes(tmp_path, capsys):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 3 1\n1 2 3 0\n")
    code, out, err = run(capsys, "split", str(cnf), "--depth", "2", "--order", "index")
    assert code == 0
    cubes = [json.loads(l)["cube"] for l in out.splitlines()]
    assert cubes == [[1, 2], [1, -2], [-1, 2], [-1, -2]]
    code, _, _ = run(capsys, "split", str(cnf), "--depth", "0")
    assert code == 2


# ----------------------------------------------------------------- bounds


PRIOR = [
    "4 4 5 5 6 7+",
    "5 5 6 7-8 7+ 8+",
    "6 6 7-9 8+ 9+ 9+",
    "7 7-10 8+ 9+ 10+ 11+",
    "8 8+ 9+ 10+ 11+ 12+",
]

UPDATED = [
    "4 4 5 5 6 7",
    "5 5 6 7 7-9 8+",
    "6 6 7 8-11 9+ 9+",
    "7 7-8 8-12 9+ 10+ 11+",
    "8 8-13 9+ 10+ 11+ 12+",
]


def grid(out):
    return [" ".join(l.split()) for l in out.splitlines()[1:]]


def test_bounds_default_prior_grid(capsys):
    code, out, _ = run(capsys, "bounds")
    assert code == 0
    assert grid(out) == PRIOR


def test_bounds_facts_and_hypotheses_updated_grid(tmp_path, capsys):
    facts = tmp_path / "facts.json"
    facts.write_text(json.dumps([{"d": 4, "n": 12, "k": 8, "source": "campaign"}]))
    hyps = tmp_path / "hyps.json"
    hyps.write_text(
        json.dumps([{"d": 5, "n": 12, "value": 7}, {"d": 6, "n": 13, "value": 7}])
    )
    code, out, _ = run(
        capsys, "bounds", "--facts", str(facts), "--hypotheses", str(hyps)
    )
    assert code == 0
    assert grid(out) == UPDATED


def test_bounds_malformed_and_contradictory_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"not": "a list"}')
    code, _, err = run(capsys, "bounds", "--facts", str(bad))
    assert code == 2
    contra = tmp_path / "contra.json"
    contra.write_text(json.dumps([{"d": 5, "n": 11, "k": 6}]))
    code, _, err = run(capsys, "bounds", "--facts", str(contra))
    assert code == 2
    assert "contradictory" in err


# --------------------------------------------------------------- campaign


def test_campaign_cli_all_unsat_and_resume(tmp_path, capsys):
    wd = tmp_path / "c"
    args = (
        "campaign", "-d", "3", "-n", "8", "-k", "5",
        "--workdir", str(wd), "--timeout", "120", "--jobs", "2",
    )
    code, out, err = run(capsys, *args)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "d n k m l count unsat verdict"
    assert "3 8 5 0 0 5 5 ALL-UNSAT" in lines
    assert "3 8 5 1 1 2 2 ALL-UNSAT" in lines
    assert "verdict ALL-UNSAT" in lines
    # resume: no new work
    code, out, err = run(capsys, *args)
    assert code == 0
    assert "verdict ALL-UNSAT" in out


def test_campaign_cli_refuted_exit_1(tmp_path, capsys):
    code, out, _ = run(
        capsys,
        "campaign", "-d", "2", "-n", "6", "-k", "3",
        "--workdir", str(tmp_path / "r"), "--timeout", "120",
    )
    assert code == 1
    assert "verdict REFUTED" in out
    model_line = next(l for l in out.splitlines() if l.startswith("model "))
    assert model_line.split()[1].endswith("model.json")


def test_campaign_cli_bad_parameters(tmp_path, capsys):
    code, _, err = run(
        capsys,
        "campaign", "-d", "4", "-n", "8", "-k", "3", "--workdir", str(tmp_path / "x"),
    )
    assert code == 2
