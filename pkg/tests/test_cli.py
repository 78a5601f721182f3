import json

import pytest

from gridknot.cli import main
from gridknot.convert import torus_grid
from gridknot.grid import dumps, trivial_diagram


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, D in [("trivial", trivial_diagram()), ("trefoil", torus_grid(2, 3))]:
        p = tmp_path / f"{name}.json"
        p.write_text(dumps(D))
        paths[name] = str(p)
    paths["dir"] = tmp_path
    return paths


def test_recognize_trefoil(capsys, files):
    code, out, _ = run(capsys, "recognize", "--in", files["trefoil"])
    data = json.loads(out)
    assert code == 3
    assert data["outcome"] == "irreducible" and data["final_n"] == 5


def test_recognize_unknot_and_certificate(capsys, files):
    d = files["dir"]
    code, _, _ = run(capsys, "scramble", "7", "--seed", "11", "--out", str(d / "s.json"))
    assert code == 0
    code, out, _ = run(capsys, "recognize", "--in", str(d / "s.json"), "--cert-out", str(d / "t.json"))
    assert code == 0 and json.loads(out)["outcome"] == "unknot"
    code, out, _ = run(capsys, "check-cert", "--in", str(d / "s.json"), "--cert", str(d / "t.json"))
    assert code == 0 and json.loads(out)["ok"] is True
    # the certificate does not start at the trefoil
    code, out, _ = run(capsys, "check-cert", "--in", files["trefoil"], "--cert", str(d / "t.json"))
    assert code == 3 and json.loads(out)["ok"] is False


def test_recognize_inconclusive(capsys, tmp_path):
    from gridknot.convert import random_diagram

    p = tmp_path / "d.json"
    p.write_text(dumps(random_diagram(8, 11)))
    snap = tmp_path / "o.snap"
    code, out, _ = run(capsys, "recognize", "--in", str(p), "--max-orbit", "40", "--snapshot-out", str(snap))
    assert code == 4 and json.loads(out)["outcome"] == "inconclusive"
    code, out, _ = run(capsys, "recognize", "--in", str(p), "--resume", str(snap))
    assert code == 3


def test_env_limits(capsys, tmp_path, monkeypatch):
    from gridknot.convert import random_diagram

    p = tmp_path / "d.json"
    p.write_text(dumps(random_diagram(8, 11)))
    monkeypatch.setenv("GRIDKNOT_MAX_ORBIT", "40")
    assert run(capsys, "recognize", "--in", str(p))[0] == 4
    # flags beat the environment
    assert run(capsys, "recognize", "--in", str(p), "--max-orbit", "100000")[0] == 3


def test_invariants_trivial(capsys, files):
    code, out, _ = run(capsys, "invariants", "--in", files["trivial"])
    data = json.loads(out)
    assert code == 0 and data["w_minus"] == -1 and data["w_plus"] == 1


def test_invariants_all_orientations(capsys, tmp_path):
    p = tmp_path / "hopf.json"
    p.write_text(dumps(torus_grid(2, 2)))
    code, out, _ = run(capsys, "invariants", "--in", str(p), "--orientation", "all")
    assert code == 0 and len(json.loads(out)["reports"]) == 2


def test_writhe_test_and_rigid(capsys, files):
    code, out, _ = run(capsys, "writhe-test", "--in", files["trefoil"])
    assert code == 0 and json.loads(out)["status"] == "CertifiedNontrivial"
    code, out, _ = run(capsys, "rigid", "--in", files["trefoil"])
    assert json.loads(out)["rigid"] is True


def test_validate_and_render(capsys, files):
    code, out, _ = run(capsys, "validate", "--in", files["trefoil"])
    assert code == 0 and json.loads(out)["valid"] is True
    code, out, _ = run(capsys, "render", "--in", files["trivial"], "--human")
    assert out == "+--+\n+--+\n"


@pytest.mark.parametrize(
    "content, suffix",
    [('{"n": 3, "columns": [[0, 1], [0, 1]]}', ".json"), ("{not json", ".json"), ("2\n0 1\n1 one\n", ".txt"),
     ('{"n": 2, "columns": [[0, 0], [1, 1]]}', ".json")],
)
def test_bad_input_exit_2(capsys, tmp_path, content, suffix):
    p = tmp_path / f"bad{suffix}"
    p.write_text(content)
    code, out, err = run(capsys, "validate", "--in", str(p))
    assert code == 2 and out == ""
    assert "error" in json.loads(err)


def test_missing_file_and_bad_command(capsys, tmp_path):
    assert run(capsys, "validate", "--in", str(tmp_path / "nope.json"))[0] == 2
    assert run(capsys, "validate")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "torus", "0", "3")[0] == 2


def test_braid_commands(capsys, tmp_path):
    b = tmp_path / "f8.txt"
    b.write_text("3: s1 s-2 s1 s-2\n")
    code, out, _ = run(capsys, "from-braid", "--in", str(b), "--out", str(tmp_path / "f8.json"))
    assert code == 0 and json.loads(out)["n"] == 7
    code, out, _ = run(capsys, "to-braid", "--in", str(tmp_path / "f8.json"), "--orientation", "all")
    assert "3: s1 s-2 s1 s-2" in [x["braid"] for x in json.loads(out)["all"]]
    bj = tmp_path / "b.json"
    bj.write_text('{"strands": 2, "letters": [[1, 1], [1, 1], [1, 1]]}')
    code, out, _ = run(capsys, "from-braid", "--in", str(bj))
    assert code == 0 and json.loads(out)["n"] == 5
    bad = tmp_path / "bad.txt"
    bad.write_text("2: s3\n")
    assert run(capsys, "from-braid", "--in", str(bad))[0] == 2


def test_decompose_and_simplify(capsys, tmp_path):
    p = tmp_path / "u.grid"
    p.write_text("4\n0 1\n0 1\n2 3\n2 3\n")
    code, out, _ = run(capsys, "decompose", "--in", str(p))
    tree = json.loads(out)["tree"]
    assert code == 0 and tree["kind"] == "DistantUnion"
    code, out, _ = run(capsys, "simplify", "--in", str(p), "--out", str(tmp_path / "final.grid"))
    assert code == 0 and json.loads(out)["outcome"] == "Irreducible"
    assert (tmp_path / "final.grid").read_text().startswith("4\n")


def test_generators_are_seeded(capsys):
    a = run(capsys, "random", "9", "--seed", "5")[1]
    b = run(capsys, "random", "9", "--seed", "5")[1]
    assert a == b
    assert json.loads(run(capsys, "torus", "3", "4")[1])["n"] == 7


def test_census_command(capsys):
    code, out, _ = run(capsys, "census", "4", "--deterministic")
    data = json.loads(out)
    assert code == 0 and data["diagram_count"] == 90
    assert run(capsys, "census", "6")[0] == 4


def test_deterministic_output(capsys, files):
    outs = {run(capsys, "recognize", "--in", files["trefoil"], "--deterministic", "--jobs", j)[1] for j in ("1", "4")}
    assert len(outs) == 1
    assert "elapsed_ms" not in outs.pop()
    assert "elapsed_ms" in run(capsys, "recognize", "--in", files["trefoil"])[1]
