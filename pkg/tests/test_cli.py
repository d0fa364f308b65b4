import json
import math

import numpy as np
import pytest

from unitdist import Hyperrectangle
from unitdist.cli import run
from unitdist.oracle import validate_path
from unitdist.paths import StepPath


@pytest.fixture
def files(tmp_path):
    cube2 = tmp_path / "cube2.json"
    cube2.write_text(json.dumps({"type": "hypercube", "d": 2, "l": math.sqrt(2)}))
    square2 = tmp_path / "square2.json"
    square2.write_text(json.dumps({"type": "hyperrectangle", "l": [2, 2]}))
    return tmp_path, cube2, square2


def test_connect(capsys):
    assert run(["connect", "--body", '{"type":"hyperrectangle","l":[1.6,1.2]}']) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["connected"] is True
    assert run(["connect", "--body", '{"type":"hyperrectangle","l":[1.2,1.2]}']) == 0
    assert json.loads(capsys.readouterr().out)["reason"] == "radius-lt-one"


def test_path(files):
    tmp, cube2, _ = files
    out = tmp / "p.json"
    assert run(["path", "--body", str(cube2), "--u", "0,0", "--v", "1.41421,1.41421", "--out", str(out)]) == 0
    p = StepPath.from_json(json.loads(out.read_text()))
    assert p.steps <= 8
    assert validate_path(Hyperrectangle([math.sqrt(2)] * 2), p)[0]


def test_path_infeasible_and_bad_input(capsys):
    assert run(["path", "--body", '{"type":"hyperrectangle","l":[1,1]}', "--u", "0,0", "--v", "1,1"]) == 1
    assert run(["path", "--body", '{"type":"hyperrectangle","l":[2,2]}', "--u", "0,x", "--v", "1,1"]) == 2
    assert run(["path", "--body", '{"type":"hyperrectangle","l":[2,2]}', "--u", "5,5", "--v", "1,1"]) == 2
    assert run(["path", "--body", '{"type":"blob"}', "--u", "0,0", "--v", "1,1"]) == 2
    assert run(["nonsense"]) == 2


def test_walk(files):
    tmp, _, square2 = files
    out, hist = tmp / "w.csv", tmp / "h.csv"
    argv = ["walk", "--body", str(square2), "--start", "0.1,0.1", "--steps", "25", "--runs", "20000",
            "--seed", "7", "--out", str(out), "--hist", str(hist)]
    assert run(argv) == 0
    rows = out.read_text().splitlines()
    assert len(rows) == 20001
    P = np.array([[float(r.split(",")[2]), float(r.split(",")[3])] for r in rows[1:]])
    assert np.all(Hyperrectangle([2, 2]).contains(P, 1e-9))
    first = out.read_bytes()
    assert run(argv) == 0
    assert out.read_bytes() == first


def test_bound_components_oracle_validate(files, capsys):
    tmp, cube2, _ = files
    assert run(["bound", "--l", f"{math.sqrt(3.64)},0.6"]) == 0
    assert json.loads(capsys.readouterr().out)["bound"] == 28
    assert run(["bound", "--dim", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["bound"] == 8
    assert run(["bound", "--l", "1,1,1,1", "--split", "0,1"]) == 0
    assert json.loads(capsys.readouterr().out)["bound"] == 10
    assert run(["bound", "--l", "1,1"]) == 2
    capsys.readouterr()
    svg = tmp / "r.svg"
    assert run(["components", "--l", "0.75", "--grid", "5", "--svg", str(svg)]) == 0
    assert capsys.readouterr().out.startswith("# status=conjectured")
    assert "arc-corner-1" in svg.read_text()
    assert run(["oracle", "--body", str(cube2), "--grid-h", "0.05", "--u", "0,0", "--v", "1,1"]) == 0
    assert "components,,,1" in capsys.readouterr().out
    assert run(["validate", "--body", str(cube2), "--path", '{"points":[[0,0],[1,0]],"labels":["x"]}']) == 0
    assert json.loads(capsys.readouterr().out)["valid"] is True
    assert run(["validate", "--body", str(cube2), "--path", '{"points":[[0,0],[0.5,0]]}']) == 1
