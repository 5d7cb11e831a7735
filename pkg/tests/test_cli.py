import json
import subprocess
import sys

from patstd.cli import run

THREE = "(\\x.C) ((\\y.y) A)\n(\\x.C) A\nC\n"


def test_match():
    assert run(["match", "(A x) y", "(A B) C"]) == (0, "{x:=B, y:=C}\n")
    assert run(["match", "(A x) x", "(A B) C"]) == (1, "no match\n")


def test_match_rejects_shared_variables():
    code, _ = run(["match", "A x", "A x"])
    assert code == 2


def test_head():
    code, out = run(["head", "(\\x.x) A"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "A" and "HBeta" in out
    assert run(["head", "x A"]) == (1, "no head step\n")


def test_phead():
    code, out = run(["phead", "--pattern", "A x", "(\\z.z) C"])
    assert code == 0 and out.splitlines()[0] == "C" and "PatHead" in out
    assert run(["phead", "--pattern", "x", "(\\z.z) C"])[0] == 1


def test_checkstd_file(tmp_path):
    seq = tmp_path / "seq.txt"
    seq.write_text(THREE)
    assert run(["checkstd", str(seq)]) == (1, "not standard\n")
    seq.write_text("(\\x.C) ((\\y.y) A)\nC\n")
    code, out = run(["checkstd", str(seq)])
    assert code == 0 and out.startswith("standard\n(StdHead")


def test_standardise_inline():
    code, out = run(["standardise", "(\\x.C) ((\\y.y) A); (\\x.C) A; C"])
    assert code == 0
    assert out == "(\\x.C) ((\\y.y) A)\nC\n"
    assert run(["checkstd", out.replace("\n", ";")])[0] == 0


def test_standardise_rejects_non_reductions():
    assert run(["standardise", "A; B"])[0] == 2


def test_parse_and_step():
    assert run(["parse", "(\\x . x)  A"]) == (0, "(\\x.x) A\n")
    assert run(["parse", "(\\x.x"])[0] == 2
    code, out = run(["step", "(\\x.x) ((\\y.y) A)"])
    assert code == 0 and out == "root: (\\y.y) A\narg: (\\x.x) A\n"
    assert run(["step", "(\\x.x) ((\\y.y) A)", "--at", "arg"]) == (0, "(\\x.x) A\n")
    assert run(["step", "A B"])[0] == 1
    assert run(["step", "A B", "--at", "root"])[0] == 2


def test_trace():
    code, out = run(["trace", "--fuel", "3", "(\\x.x x) (\\x.x x)"])
    assert code == 0 and out.splitlines()[-1] == "3 step(s); fuel exhausted"
    code, out = run(["trace", "(\\x.x) ((\\y.y) A)"])
    assert out.splitlines()[-1] == "2 step(s); no further step"


def test_devcheck():
    code, out = run(["devcheck", "((\\x.x) A) ((\\y.y) B)", "A B"])
    assert code == 0 and "(DApp" in out
    assert run(["devcheck", "(\\x.x) A", "B"]) == (1, "not a development\n")
    code, out = run(["devcheck", "--split", "(\\(A x).x) ((\\z.z) (A B))", "(\\(A x).x) (A B)"])
    assert "head steps to (\\(A x).x) (A B):" in out


def test_intdevcheck():
    code, out = run(["intdevcheck", "--pattern", "(A x) x", "A B ((\\y.y) C)", "A B C"])
    assert code == 0 and "(PCDataNo3" in out
    assert run(["intdevcheck", "(\\x.x) A", "A"])[0] == 1


def test_enumerate():
    code, out = run(["enumerate", "--max-size", "2", "--consts", "A", "--vars", "x"])
    assert code == 0 and out.split() == ["x", "A", "\\x.x", "\\x.A", "\\A.x", "\\A.A", "x", "x", "x", "A", "A", "x", "A", "A"]
    assert run(["enumerate", "--consts", "a"])[0] == 2


def test_json():
    code, out = run(["--json", "match", "(A x) y", "(A B) C"])
    assert code == 0 and json.loads(out)["match"] == {"x": "B", "y": "C"}
    code, out = run(["head", "(\\x.x) A", "--json"])
    data = json.loads(out)
    assert data["result"] == "A" and data["justification"]["rule"] == "HBeta"
    code, out = run(["--json", "checkstd", "A; B"])
    assert code == 1 and json.loads(out)["standard"] is False
    code, out = run(["--json", "parse", "("])
    assert code == 2 and "error" in json.loads(out)


def test_usage_errors():
    assert run([])[0] == 2
    assert run(["bogus"])[0] == 2
    assert run(["trace", "A", "--fuel", "x"])[0] == 2


def test_verify_small():
    code, out = run(["verify", "--max-size", "2", "--max-chain", "2", "--workers", "1"])
    # too small for some properties to have instances: those are EMPTY, not PASS
    assert code == 1 and "PASS" in out and "EMPTY" in out and "FAIL" not in out


def test_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "patstd.cli", "match", "(A x) y", "(A B) C"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout == "{x:=B, y:=C}\n"
