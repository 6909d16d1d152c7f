import json
import subprocess
import sys


from tangotower.cli import run

C35 = '{"p": 3, "f": [0, 0, 0, 0, 0, 1]}'
C25 = '{"p": 2, "f": [0, 0, 0, 0, 0, 1]}'


def call(argv):
    from io import StringIO
    out, err = StringIO(), StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def test_curve_analyze_json():
    code, out, _ = call(["curve", "analyze", C35, "--d", "2", "--format", "json"])
    rep = json.loads(out)
    assert code == 0
    assert rep["structures"]["2"]["tango"] is True
    assert rep["structures"]["2"]["tango_witness"] == "x"
    assert rep["n_bounds"] == [2, "2"]
    code, out, _ = call(["curve", "analyze", C25, "--d", "2", "--format", "json"])
    assert json.loads(out)["structures"]["2"]["tango"] is False


def test_curve_analyze_rejects_bad_input():
    assert call(["curve", "analyze", '{"p": 3, "f": [0, 0, 0, 1]}'])[0] == 2
    assert call(["curve", "analyze", '{"p": 3, "f": [0, 1], "q": 1}'])[0] == 2
    assert call(["curve", "analyze", '{"p": 3, "f": [0, 1.5]}'])[0] == 2
    code, _, err = call(["curve", "analyze", "/nonexistent/curve.json"])
    assert code == 2 and "cannot read" in err
    assert call(["curve", "analyze", "{not json"])[0] == 2


def test_curve_file_input(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(C35)
    code, out, _ = call(["curve", "analyze", str(path)])
    assert code == 0 and "genus 4" in out


def test_tower_build_examples():
    script = '{"p": 3, "base": {"degD": 2, "k1": 2}, "steps": [{"kind": "I", "k": 2}], "cover_check": true}'
    code, out, _ = call(["tower", "build", script, "--format", "json"])
    rep = json.loads(out)
    assert code == 0
    assert rep["levels"][1]["canonical"] == {"level": 1, "e": "0", "d": "5", "f": ["0"]}
    assert rep["cover_checks"][0]["pushforward_is_structure_sheaf"] is True
    script = ('{"p": 2, "base": {"synthetic": true, "dim": 2, "canonical": 1, "polarization": 3},'
              ' "steps": [{"kind": "I", "k": 3}]}')
    code, out, _ = call(["tower", "build", script, "--format", "json"])
    assert json.loads(out)["levels"][1]["classification"]["verdict"] == "Trivial"


def test_tower_build_gcd_failure_exits_2():
    code, _, err = call(["tower", "build", '{"p": 3, "base": {"degD": 6}, "steps": [{"kind": "I", "k": 3}]}'])
    assert code == 2 and "(p,k)=1" in err and "step 0" in err


def test_tower_unknown_field():
    code, _, err = call(["tower", "build", '{"p": 3, "base": {"degD": 2}, "extra": 1}'])
    assert code == 2 and "unknown" in err


def test_cover_check():
    code, out, _ = call(["cover", "check", "--p", "2", "--k", "3", "--m", "1", "--format", "json"])
    rep = json.loads(out)
    assert code == 0 and rep["mk_relation"]["ok"]
    assert rep["pushforward"] == [{"level": 0, "e": "0", "d": "0", "f": []}]
    assert call(["cover", "check", "--p", "2", "--k", "4"])[0] == 2
    assert call(["cover", "check", "--p", "2", "--k", "3", "--d-prime", "x"])[0] == 2


def test_verify_corollaries(tmp_path):
    out_file = tmp_path / "certs.json"
    code, out, _ = call(["verify-corollaries", "--json", str(out_file)])
    assert code == 0 and "4/4 reproduced" in out
    data = json.loads(out_file.read_text())
    assert data["reproduced"] == 4
    assert [c["claim"] for c in data["claims"]] == [
        "raynaud-mukai-surface-not-k3", "raynaud-mukai-threefold-not-calabi-yau",
        "required-surface-for-calabi-yau", "construction-ii-not-calabi-yau"]


def test_verify_corollaries_mismatch_exits_1():
    # with p <= 2 the (3,2) solution is out of range, so the expected set is not reproduced
    code, out, _ = call(["verify-corollaries", "--p-max", "2"])
    assert code == 1 and "MISMATCH" in out


def test_bad_bound_exits_2():
    assert call(["verify-corollaries", "--p-max", "0"])[0] == 2
    assert call(["verify-corollaries", "--bogus"])[0] == 2


def test_selftest_deterministic():
    a = call(["selftest", "--seed", "5", "--format", "json"])
    b = call(["selftest", "--seed", "5", "--format", "json"])
    assert a == b and a[0] == 0 and json.loads(a[1])["ok"]


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "tangotower", "cover", "check", "--p", "3", "--k", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "M^k relation: ok" in r.stdout
