import json

import pytest

from wittlift.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main
from wittlift.groups import named_group
from wittlift.reps import jordan_block_rep, natural_rep


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    return write


def _run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr()


def test_check_lift_s3_lifts(files, tmp_path, capsys):
    G = named_group("S3")
    g = files("g.json", {"name": "S3"})
    r = files("r.json", natural_rep(G).to_json())
    out = tmp_path / "cert.json"
    code, _ = _run(["check-lift", "--group", g, "--rep", r, "--exhaustive", "--out", str(out)], capsys)
    assert code == EXIT_OK
    obj = json.loads(out.read_text())
    assert obj["certificate"]["verdict"] == "LIFTS" and obj["verified"]
    assert obj["certificate"]["exhaustive"]["lifts_found"] > 0


def test_check_lift_jordan_obstructed(files, capsys):
    f = jordan_block_rep(5, 1)
    g = files("g.json", f.group.to_json())
    r = files("r.json", f.to_json())
    code, cap = _run(["check-lift", "--group", g, "--rep", r, "--emit-cocycle"], capsys)
    assert code == EXIT_OK
    obj = json.loads(cap.out)
    assert obj["certificate"]["verdict"] == "OBSTRUCTED"
    assert obj["certificate"]["dual_witness"] is not None


def test_check_lift_input_errors(files, tmp_path, capsys):
    g = files("g.json", {"name": "Z/4"})
    code, cap = _run(["check-lift", "--group", g, "--rep", str(tmp_path / "missing.json")], capsys)
    assert code == EXIT_INPUT and "does not exist" in cap.err
    bad = files("bad.json", {"ring": "GF(2)", "n": 3, "generators": [[1, 1, 0, 0, 1, 1, 0, 0, 1]]})
    code, _ = _run(["check-lift", "--group", g, "--rep", bad], capsys)
    assert code == EXIT_INPUT
    code, _ = _run(["check-lift", "--group", files("x.json", {"name": "nope"}), "--rep", bad], capsys)
    assert code == EXIT_INPUT
    code, _ = _run(["check-lift", "--group", g], capsys)
    assert code == EXIT_INPUT


def test_search_zero_budget_incomplete(files, capsys):
    g = files("g.json", {"name": "Z/2xZ/2"})
    code, cap = _run(["search", "--group", g, "--field", "2", "--max-dim", "2", "--budget", "0"], capsys)
    assert code == EXIT_OK
    assert json.loads(cap.out)["status"] == "INCOMPLETE"
    code, _ = _run(["search", "--group", g, "--field", "2", "--max-dim", "2", "--budget", "-1"], capsys)
    assert code == EXIT_INPUT


def test_search_klein_over_f4_finds_obstruction(files, capsys):
    g = files("g.json", {"name": "Z/2xZ/2"})
    code, cap = _run(["search", "--group", g, "--field", "4", "--max-dim", "2", "--budget", "100000"], capsys)
    assert code == EXIT_OK
    obj = json.loads(cap.out)
    assert obj["status"] == "COMPLETE"
    assert obj["summary"]["global_status"] == "NOT_LIFTABLE_WITNESSED"


def test_local_commands(files, capsys):
    code, cap = _run(["local", "lift-pair", "--p", "3", "--d", "4", "--x1", "1,0,0,0", "--x2", "0,0,0,1"], capsys)
    assert code == EXIT_OK and json.loads(cap.out)["cup_level2"] == 0
    code, cap = _run(["local", "lift-pair", "--p", "3", "--d", "4", "--x1", "1,0,0,0", "--x2", "0,1,0,0"], capsys)
    assert code == EXIT_FAIL and json.loads(cap.out)["error"] == "NotOrthogonal"
    code, _ = _run(["local", "lift-pair", "--p", "3", "--d", "4", "--x1", "1,0", "--x2", "0,1"], capsys)
    assert code == EXIT_INPUT

    build_input = {"model": {"p": 3, "d": 4}, "x1": [1, 0, 0, 0], "x2": [0, 0, 1, 0], "twist": [0, 1, 0, 0]}
    code, cap = _run(["local", "heisenberg", "--build", "--in", files("b.json", build_input)], capsys)
    assert code == EXIT_OK
    rho = files("rho.json", json.loads(cap.out))
    code, cap = _run(["local", "heisenberg", "--lift", "--in", rho], capsys)
    assert code == EXIT_OK and all(json.loads(cap.out)["checks"].values())
    build_input["x2"] = [0, 1, 0, 0]
    code, cap = _run(["local", "heisenberg", "--build", "--in", files("c.json", build_input)], capsys)
    assert code == EXIT_FAIL and json.loads(cap.out)["error"] == "CupObstruction"

    code, cap = _run(["local", "tame-symbol", "--p", "3", "--q", "7", "--a", "1,1", "--b", "0,3"], capsys)
    assert code == EXIT_OK and json.loads(cap.out)["symbol"] != 0
    code, _ = _run(["local", "tame-symbol", "--p", "3", "--q", "9", "--a", "1,1", "--b", "0,3"], capsys)
    assert code == EXIT_INPUT


def test_verify_paper_section_and_recheck(tmp_path, capsys):
    prefix = str(tmp_path / "rep")
    code, _ = _run(["verify-paper", "--only", "prop:power-of-2", "--out", prefix], capsys)
    assert code == EXIT_OK
    report = json.loads((tmp_path / "rep.json").read_text())
    assert (tmp_path / "rep.md").read_text().startswith("#")
    code, cap = _run(["verify-paper", "--recheck", prefix + ".json"], capsys)
    assert code == EXIT_OK and "re-verify" in cap.out

    rec = report["sections"][0]["records"][0]
    rec["witness"]["witnesses"][0]["matrices"]["lift"]["entries"][0] += 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(report))
    code, cap = _run(["verify-paper", "--recheck", str(bad)], capsys)
    assert code == EXIT_FAIL and "failed to re-verify" in cap.out


def test_verify_paper_unknown_tag(tmp_path, capsys):
    code, _ = _run(["verify-paper", "--only", "prop:nothing", "--out", str(tmp_path / "x")], capsys)
    assert code == EXIT_INPUT


def test_report_identical_across_thread_counts(tmp_path, capsys, monkeypatch):
    # main() exports --threads to the environment; let monkeypatch restore it
    monkeypatch.setenv("WITTLIFT_THREADS", "1")
    outs = []
    for threads in ("1", "4"):
        prefix = str(tmp_path / f"t{threads}")
        code, _ = _run(["--threads", threads, "verify-paper", "--only", "prop:abelian", "--out", prefix], capsys)
        assert code == EXIT_OK
        outs.append([(tmp_path / f"t{threads}.{ext}").read_bytes() for ext in ("json", "md")])
    assert outs[0] == outs[1]


def test_version_and_help(capsys):
    assert main(["--version"]) == EXIT_OK
    assert main([]) == EXIT_INPUT
