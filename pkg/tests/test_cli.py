import json
import subprocess
import sys

import pytest

from pantsrigid.cli import main
from pantsrigid.rigidset import build_Z


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def cli(*args):
    return subprocess.run([sys.executable, "-m", "pantsrigid.cli", *args],
                          capture_output=True, text=True)


def test_build_gamma_json(capsys):
    code, out, _ = run(["build", "--what", "gamma", "--n", "7"], capsys)
    data = json.loads(out)
    assert code == 0 and data["count"] == 14 and len(data["chain"]) == 7


def test_build_Z_and_export_roundtrip(tmp_path, capsys):
    path = tmp_path / "z6.json"
    assert main(["build", "--what", "Z", "--n", "6", "--out", str(path)]) == 0
    data = json.loads(path.read_text())
    assert len(data["vertices"]) == 14 and len(data["edges"]) == 21
    code, out, _ = run(["export", "--in", str(path)], capsys)
    assert code == 0 and out == path.read_text()
    code, dot, _ = run(["export", "--in", str(path), "--format", "dot"], capsys)
    assert dot.count(" -- ") == 21


def test_verify_input_file(tmp_path, capsys):
    path = tmp_path / "z6.json"
    path.write_text(build_Z(6).dumps())
    code, out, _ = run(["verify", "--in", str(path), "--suite", "Z"], capsys)
    assert code == 0 and json.loads(out)["summary"]["violated"] == 0
    data = json.loads(path.read_text())
    data["edges"].pop()
    path.write_text(json.dumps(data))
    code, out, _ = run(["verify", "--in", str(path), "--suite", "Z"], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["summary"]["violated"] == 1
    assert any("witness" in r for r in rep["reports"])


def test_verify_Z_on_a_non_Z_graph(tmp_path, capsys):
    # X5 is a valid pants subgraph but not built from chords: a violation, not a crash
    path = tmp_path / "x5.json"
    assert main(["build", "--what", "X5", "--out", str(path)]) == 0
    code, out, _ = run(["verify", "--in", str(path), "--suite", "Z"], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["reports"][1]["status"] == "violated"
    assert {"vertex": 0, "degree": 6} in rep["reports"][1]["witness"]


def test_verify_rejects_non_moves(tmp_path, capsys):
    data = build_Z(5).to_json()
    data["edges"].append([0, 2])
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, out, _ = run(["verify", "--in", str(path)], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["reports"][0]["witness"] == [{"edge": [0, 2]}]


def test_usage_errors(capsys, tmp_path):
    assert main(["build", "--what", "gamma", "--format", "dot"]) == 2
    assert main(["build", "--what", "X", "--n", "8"]) == 2
    assert main(["verify", "--suite", "restriction", "--n", "5"]) == 2
    assert main(["search", "--n", "6"]) == 2
    assert main(["export", "--in", str(tmp_path / "missing.json")]) == 2
    with pytest.raises(SystemExit) as info:
        main(["build", "--what", "nonsense"])
    assert info.value.code == 2
    capsys.readouterr()


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults for this run\nn = 6\nwhat = gamma\n")
    code, out, _ = run(["build", "--config", str(cfg)], capsys)
    assert json.loads(out)["n"] == 6
    code, out, _ = run(["build", "--config", str(cfg), "--n", "7"], capsys)
    assert json.loads(out)["n"] == 7
    cfg.write_text("colour = blue\n")
    assert main(["build", "--config", str(cfg)]) == 2
    cfg.write_text("n = six\n")
    assert main(["build", "--config", str(cfg)]) == 2


def test_search_resource_failure_writes_partial_marker(capsys):
    code, out, _ = run(["search", "--radius", "2", "--max-vertices", "10"], capsys)
    data = json.loads(out)
    assert code == 1 and data["partial"] is True and data["partial_count"] == 10


def test_search_radius_one_finds_nothing(capsys):
    code, out, _ = run(["search", "--radius", "1"], capsys)
    data = json.loads(out)
    assert code == 0 and data["summary"]["found"] == 0 and data["summary"]["falsification"] == 0


@pytest.mark.parametrize("args", [
    ["build", "--what", "X", "--n", "6"],
    ["build", "--what", "thick", "--n", "5", "--format", "dot"],
    ["verify", "--suite", "sym"],
])
def test_outputs_are_byte_identical(args):
    first, second = cli(*args), cli(*args, "--threads", "3")
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout and first.stdout
