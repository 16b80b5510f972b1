import io
import subprocess
import sys
from pathlib import Path

import pytest

from higman import textio
from higman.cli import run
from higman.stallings import split_basis
from higman.word import format_word

DATA = Path(__file__).resolve().parent.parent / "data"


def call(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    status = run([str(a) for a in argv], out, err)
    return status, out.getvalue(), err.getvalue()


def test_reduce():
    assert call("reduce", "a1 A1") == (0, "1\n", "")
    assert call("reduce", "a1", "a2", "A2", "a3")[:2] == (0, "a1 a3\n")


def test_reduce_malformed():
    status, out, err = call("reduce", "a1 b2")
    assert status == 2 and out == "" and "column 4" in err


def test_project():
    assert call("project", 3, 2, "a1 a3 a2")[:2] == (0, "a1 a2\n")
    assert call("project", 2, 3, "a1")[0] == 2


def test_classify_standard():
    assert call("classify", DATA / "standard8.sys")[:2] == (0, "UniversalG (prefix verdict)\n")


def test_classify_tower_and_undetermined():
    assert call("classify", DATA / "swap_tower.sys")[:2] == (0, "FreeOfRank(2) (prefix verdict)\n")
    status, out, _ = call("classify", DATA / "undetermined.sys")
    assert status == 1 and out.startswith("Undetermined(ranks 2 2 2 3 3)")
    assert call("classify", DATA / "undetermined.sys", "--window", 2)[:2] == (0, "FreeOfRank(3) (prefix verdict)\n")


def test_classify_rejects_invalid_system():
    status, out, _ = call("classify", DATA / "not_surjective.sys")
    assert status == 1 and "level 3: not surjective" in out


def test_endo_verify():
    status, out, _ = call("endo-verify", "--counterexample", 12)
    assert status == 0
    for i in (1, 2, 3):
        assert f"relation i={i}:" in out and out.count(": ok") >= 3
    assert "relation i=4" not in out
    assert call("--quiet", "endo-verify", "--counterexample", 12)[:2] == (0, "verified\n")


def test_endo_verify_tampered_table(tmp_path):
    lines = (DATA / "counterexample14.endo").read_text().splitlines()
    body = [ln for ln in lines if not ln.startswith("#")]
    body[6], body[8] = body[8], body[6]  # swap the images of a6 and a8
    path = tmp_path / "tampered.endo"
    path.write_text("\n".join(body) + "\n")
    status, out, _ = call("endo-verify", "--counterexample", 12, "--table", path)
    assert status == 1 and out.startswith("FAILED: relation")


def test_endo_verify_too_small():
    assert call("endo-verify", "--counterexample", 4)[0] == 2


def test_endo_eval():
    status, out, _ = call("endo-eval", "--counterexample", 14, DATA / "a2a4.stable", "--depth", 6)
    assert status == 0
    assert out == textio.format_element(textio.parse_element("element 6\n1\na1 a2 A1 a2\n" + "a1 a2 A1 a2\n" * 4))
    status, out2, _ = call("endo-eval", DATA / "counterexample14.endo", DATA / "a2a4.stable", "--depth", 6)
    assert (status, out2) == (0, out)


def test_endo_eval_insufficient_depth():
    status, _, err = call("endo-eval", "--counterexample", 14, DATA / "a1a3A1.element", "--depth", 4)
    assert status == 2 and "depth" in err


def test_metric():
    e = DATA / "a1a3A1.element"
    assert call("metric", e, e)[:2] == (0, "lower 0/2^0\nupper 1/2^5\nexact no (depth 5)\n")
    assert call("--quiet", "metric", DATA / "a2a4.stable", DATA / "a2a4.stable")[:2] == (0, "0/2^0 0/2^0\n")


def test_stdin(monkeypatch):
    text = "stable\na1\n"
    status, out, _ = call("metric", "-", DATA / "a2a4.stable", stdin=text, monkeypatch=monkeypatch)
    assert status == 0 and "exact yes" in out


def test_fold():
    status, out, _ = call("fold", DATA / "gens.words")
    assert status == 0 and out.splitlines()[0] == "vertices 1 edges 2 subgroup-rank 2"
    assert call("--quiet", "fold", DATA / "gens.words")[:2] == (0, "rose\n")


def test_split_matches_library():
    status, out, _ = call("split", DATA / "split.map")
    sp = split_basis(textio.parse_map((DATA / "split.map").read_text()))
    assert status == 0
    assert [ln[2:] for ln in out.splitlines() if ln.startswith("K ")] == [format_word(k) for k in sp.k_part]
    assert [ln[2:] for ln in out.splitlines() if ln.startswith("B ")] == [format_word(b) for b in sp.b_part]


def test_split_not_surjective(tmp_path):
    p = tmp_path / "bad.map"
    p.write_text("map 2 2\na1 a1\na2\n")
    status, out, _ = call("split", p)
    assert status == 1 and out.startswith("not surjective")


def test_normalize_reports():
    status, out, _ = call("normalize", DATA / "random6.sys", "--report", "squares")
    assert status == 0 and out.count("ok") == 5 and "FAIL" not in out
    status, out, _ = call("normalize", DATA / "standard8.sys")
    assert out.splitlines()[2] == "level 3: B 2 K 1"
    status, out, _ = call("normalize", DATA / "swap_tower.sys", "--report", "isos")
    assert status == 0 and out.startswith("theta 1\nmap 2 2\na1\na2\ntheta 2\nmap 2 2\na2\na1\n")


def test_missing_file():
    status, _, err = call("fold", "/nonexistent/file")
    assert status == 2 and err.startswith("error:")


def test_parse_error_is_addressed(tmp_path):
    p = tmp_path / "broken.sys"
    p.write_text("system 2\nranks 1 2\nmap 2\na1\na3\n")
    status, _, err = call("classify", p)
    assert status == 2 and "line 5, column 1" in err


@pytest.mark.parametrize("path", sorted(DATA.iterdir()), ids=lambda p: p.name)
def test_convert_is_canonical(path, tmp_path):
    status, once, _ = call("convert", path)
    assert status == 0
    p = tmp_path / "c"
    p.write_text(once)
    assert call("convert", p)[:2] == (0, once)


def test_determinism():
    for argv in (("normalize", DATA / "random6.sys", "--report", "isos"), ("endo-verify", "--counterexample", 16)):
        assert call(*argv) == call(*argv)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "higman", "reduce", "a1 A1"], capture_output=True, text=True, check=False
    )
    assert (proc.returncode, proc.stdout) == (0, "1\n")
