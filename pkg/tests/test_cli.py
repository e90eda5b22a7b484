import io
import json
import subprocess
import sys

import pytest

from dimforge import cli


def run(*argv, env_config=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def write_cfg(tmp_path, **over):
    vals = {"d": 3, "p": 5, "s": 6, "m1": 9, "m2": 3, "searchBound": 50}
    vals.update(over)
    path = tmp_path / "e.cfg"
    path.write_text("# test config\n" + "".join(f"{k}={v}\n" for k, v in vals.items()))
    return str(path)


def test_report_reference_config():
    code, out, _ = run("report")
    assert code == 0
    assert "NO commuting trace-scaling pair at K0 level for generators {5, 2+sqrt(3)}" in out
    assert out.count("| (1,0)") == 9


def test_report_structured_has_nine_row_certificate():
    code, out, _ = run("report", "--format", "structured", "--replay")
    assert code == 0
    recs = records(out)
    obs = [r for r in recs if r["result"] == "obstruction"]
    assert len(obs) == 1 and obs[0]["verdict"] == "impossible"
    assert len(obs[0]["certificate"]["table"]) == 9
    assert recs[-1]["verdict"] == "no-commuting-pair"


def test_report_trivial_coupling_finds_no_obstruction(tmp_path):
    code, out, _ = run("report", "--config", write_cfg(tmp_path, m1=1, m2=1))
    assert code == 0
    assert "OBSTRUCTION NOT FOUND (residue level) at modulus 1" in out


def test_pell_minus_one():
    code, out, _ = run("pell", "--d", "3", "--n", "-1")
    assert code == 0
    assert "unsolvable" in out and "modulus=3" in out


def test_pell_solvable_lists_solutions():
    code, out, _ = run("pell", "--d", "2", "--n", "7", "--format", "structured")
    (rec,) = records(out)
    assert rec["verdict"] == "solvable" and [3, 1] in rec["solutions"]


def test_dimcheck_non_member():
    code, out, _ = run("dimcheck", "--elem", "0,1,0,2,0")
    assert code == 0
    assert out.strip() == "NOT A MEMBER: x≢j mod 9"


def test_dimcheck_member_and_params():
    code, out, _ = run("dimcheck", "--elem", "1,1,0,1,0")
    assert code == 0 and out.startswith("MEMBER: E[3,5,6,9,3]")
    assert run("dimcheck")[1].strip() == "E[3,5,6,9,3]: parameters ok"


@pytest.mark.parametrize(
    "argv",
    [
        ["nosuch"],
        ["pell", "--d", "x", "--n", "1"],
        ["pell", "--d", "3"],
        ["classify", "--lambda", "2+sqrt7"],
        ["dimcheck", "--elem", "1,2"],
        ["verify-witness", "--lambda", "5", "--matrix", "1,2,3"],
        ["fungroup", "--uhf", "2:0"],
        [],
    ],
)
def test_malformed_arguments_exit_1(argv):
    assert run(*argv)[0] == 1


def test_bad_modulus_config_exit_2(tmp_path):
    code, _, err = run("report", "--config", write_cfg(tmp_path, s=1))
    assert code == 2 and "configuration" in err


def test_perfect_square_config_exit_2(tmp_path):
    assert run("dimcheck", "--config", write_cfg(tmp_path, d=4))[0] == 2


def test_env_config_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("DIMFORGE_CONFIG", write_cfg(tmp_path, m1=1, m2=1))
    code, out, _ = run("dimcheck")
    assert code == 0 and "E[3,5,6,1,1]" in out


def test_contract_violation_exit_3(monkeypatch):
    monkeypatch.setattr(cli, "replay_obstruction", lambda *a, **k: False)
    code, _, err = run("obstruction", "--l1", "5", "--l2", "2+sqrt3", "--mod", "9")
    assert code == 3 and "contract" in err


def test_replay_catches_tampered_certificates():
    _, out, _ = run("implus", "--d", "3", "--p", "5", "--format", "structured")
    recs = records(out)
    cert = next(r for r in recs if r.get("certificate"))
    assert cli.replay_records([cert]) == []
    bad = json.loads(json.dumps(cert))
    bad["certificate"]["record"] = bad["certificate"]["record"].replace("n=5", "n=1")
    assert cli.replay_records([bad])

    _, out, _ = run("obstruction", "--l1", "5", "--l2", "2+sqrt3", "--format", "structured")
    (rec,) = records(out)
    rec["certificate"]["table"][0] = rec["certificate"]["table"][0].replace("(1,0)", "none")
    assert cli.replay_records([rec])


COMMANDS = [
    ["pell", "--d", "3", "--n", "-1"],
    ["pell", "--d", "3", "--n", "-2"],
    ["pell", "--d", "34", "--n", "-1"],
    ["pell", "--d", "7", "--n", "2"],
    ["unit", "--d", "13"],
    ["implus", "--d", "10", "--p", "3"],
    ["implus", "--d", "3", "--p", "5"],
    ["dimcheck", "--elem", "0,1,0,2,0"],
    ["dimcheck", "--elem", "2,7,1,16,4"],
    ["classify", "--lambda", "5", "--mod", "9"],
    ["classify", "--lambda", "2+sqrt3", "--det-sign", "-1"],
    ["verify-witness", "--lambda", "5", "--matrix", "[[5,9],[6,11]]"],
    ["verify-witness", "--lambda", "5", "--matrix", "2,3,1,2"],
    ["obstruction", "--l1", "5", "--l2", "2+sqrt3"],
    ["obstruction", "--l1", "5", "--l2", "5"],
    ["fungroup"],
    ["fungroup", "--search-bound", "2"],
    ["fungroup", "--uhf", "2:inf,3:inf"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=" ".join)
def test_text_and_structured_agree(argv):
    code_t, text, _ = run(*argv)
    code_s, structured, err = run(*argv, "--format", "structured", "--replay")
    assert code_t == code_s == 0
    assert "replay:" in err
    recs = records(structured)
    assert recs
    for rec in recs:
        assert "verdict" in rec
        if rec["verdict"] in ("unsolvable", "impossible"):
            assert rec.get("certificate")
    main = recs[0]["verdict"]
    expected = {
        "solvable": ": solvable", "unsolvable": ": unsolvable", "verified": "verified:",
        "rejected": "rejected:", "not-a-member": "NOT A MEMBER", "member": "MEMBER:",
        "impossible": ": impossible", "possible": ": possible", "established": "equality=established",
        "open": "equality=open", "norm-1": "norm -1", "norm+1": "norm +1",
    }
    if main in expected:
        assert expected[main] in text
    elif main.endswith("classes"):
        assert f": {main.split()[0]} residue classes" in text


def test_fungroup_structured_fields():
    _, out, _ = run("fungroup", "--format", "structured")
    (rec,) = records(out)
    assert rec["verdict"] == "established"
    assert rec["generators"] == ["(5+0*sqrt(3))/5^0", "(2+1*sqrt(3))/5^0"]
    assert len(rec["witnesses"]) == 2


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dimforge", "fungroup", "--uhf", "2:inf"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "UHF fundamental group: free abelian on {2}"
