import io
import json

import pytest

from henson_reducts import forbidden_set, linear_order, make_In, three_cycle
from henson_reducts.cli import main


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, t in {
        "c3": forbidden_set(three_cycle()),
        "c3l3": forbidden_set(three_cycle(), linear_order(3)),
        "chain": forbidden_set(linear_order(3), linear_order(4)),
    }.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(t.to_json()))
        out[name] = str(p)
    bad = tmp_path / "bad.json"
    bad.write_text('{"tournaments": [{"n": 2, "edges": [[0, 1]]}]}')
    out["bad"] = str(bad)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_check_antichain(files, capsys):
    code, out, _ = run(capsys, "check-antichain", files["c3"])
    assert code == 0 and out.strip() == "anti-chain: yes"
    code, out, _ = run(capsys, "check-antichain", files["chain"], "--format", "json")
    assert code == 1 and json.loads(out)["antichain"] is False


def test_verify_lemma_table(files, capsys):
    code, out, _ = run(capsys, "verify-lemma", "L-noconstants", files["c3"])
    rows = [line for line in out.splitlines() if line.startswith("NoConstants")]
    assert code == 0 and len(rows) == 27
    impossible = [i for i, line in enumerate(out.splitlines()) if "Impossible" in line]
    assert impossible and all(out.splitlines()[i + 1].strip().startswith("witness") for i in impossible)


def test_build_dot(files, capsys):
    code, out, err = run(capsys, "build", files["c3"], "--n", "20", "--level", "2", "--seed", "7", "--format", "dot")
    assert code == 0 and out.startswith("digraph D {")
    assert "unmet realizable demands: 0" in err
    assert out.count(";") - out.count("->") >= 20


def test_build_json_is_deterministic(files, capsys):
    args = ("build", files["c3"], "--n", "12", "--level", "2", "--seed", "3", "--format", "json")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b and json.loads(a)["report"]["missing"] == 0


def test_classify(files, capsys):
    code, out, _ = run(capsys, "classify", files["c3l3"], "--scale", "4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["graph_status"]["kind"] == "HensonGraphEvidence"
    code, out, _ = run(capsys, "classify", files["c3"], "--format", "dot")
    assert out.startswith("graph reducts")


def test_family_and_distinguish(capsys):
    code, out, _ = run(capsys, "family", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["antichain"] and data["maximality"]["extension_blocking"]
    code, out, _ = run(capsys, "distinguish", "--indices1", "10", "--indices2", "12")
    assert code == 0 and out.startswith("I_10")


def test_stdin(files, capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(open(files["c3"]).read()))
    code, out, _ = run(capsys, "check-antichain", "-")
    assert code == 0


@pytest.mark.parametrize(
    "argv",
    [
        ("check-antichain", "missing.json"),
        ("verify-lemma", "L-nope", "x.json"),
        ("build", "{c3}", "--n", "0"),
        ("check-antichain", "{bad}"),
        ("family", "--blocker-max-size", "5"),
        ("distinguish", "--indices1", "10", "--indices2", "10"),
    ],
)
def test_errors_exit_two_with_json(argv, files, capsys):
    argv = [a.format(**files) for a in argv] + ["--format", "json"]
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert "error" in json.loads(out)
    assert err.startswith("error:")


def test_worker_env(files, capsys, monkeypatch):
    monkeypatch.setenv("HENSON_REDUCTS_WORKERS", "2")
    code, _, err = run(capsys, "build", files["c3"], "--n", "20", "--level", "2", "--seed", "7", "--format", "json")
    assert code == 0 and "unmet realizable demands: 0" in err
    monkeypatch.setenv("HENSON_REDUCTS_WORKERS", "zero")
    code, _, _ = run(capsys, "build", files["c3"], "--n", "5", "--level", "1")
    assert code == 2
