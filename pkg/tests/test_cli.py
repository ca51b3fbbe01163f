import json

import numpy as np
import pytest

from stickmaps import __version__
from stickmaps.cli import generate, main
from stickmaps.geometry import SphericalPolygon
from stickmaps.indicatrix import darboux
from stickmaps.knot import hexagonal_trefoil, load, save


def run(tmp_path, *args, name="out.json"):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, (out.read_text() if out.exists() else None)


def test_gen(tmp_path):
    code, text = run(tmp_path, "gen", "--gen", "torus:2,3,60,2,1")
    assert code == 0
    k = load(tmp_path / "out.json")
    assert k.n == 60 and k.report.ok
    _, a = run(tmp_path, "gen", "--gen", "random:8,seed=7", name="a.json")
    _, b = run(tmp_path, "gen", "--gen", "random:8,seed=7", name="b.json")
    assert a == b
    run(tmp_path, "gen", "--gen", "hextrefoil", name="h.json")
    assert np.array_equal(load(tmp_path / "h.json").vertices, hexagonal_trefoil().vertices)


def test_bad_specs(tmp_path, capsys):
    assert main(["gen", "--gen", "torus:2,3"]) == 2
    assert main(["gen", "--gen", "cube"]) == 2
    assert main(["map", "--map", "bridge"]) == 2
    assert main(["map", "--knot", str(tmp_path / "missing.json"), "--map", "bridge"]) == 2
    assert "error" in capsys.readouterr().err


def test_invalid_knot_file(tmp_path):
    path = tmp_path / "square.json"
    path.write_text(json.dumps({"vertices": [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]}))
    assert main(["indicatrix", "--knot", str(path)]) == 2


def test_indicatrix(tmp_path, Q):
    path = tmp_path / "q.json"
    save(Q, path)
    code, text = run(tmp_path, "indicatrix", "--knot", str(path))
    data = json.loads(text)
    assert code == 0
    res = data["result"]["indicatrices"]
    assert res["darboux"]["length"] == pytest.approx(4 * np.pi, abs=1e-9)
    assert res["binotrix"]["n_vertices"] == 4
    assert data["version"] == __version__ and data["seed"] == 0 and len(data["input_sha256"]) == 64
    code, text = run(tmp_path, "indicatrix", "--gen", "torus:2,3,60,2,1", "--indicatrix", "tantrix")
    assert json.loads(text)["result"]["indicatrices"]["tantrix"]["length"] > 4 * np.pi


def test_map(tmp_path):
    code, text = run(tmp_path, "map", "--gen", "hextrefoil", "--map", "bridge", "--samples", "20000")
    res = json.loads(text)["result"]
    assert code == 0 and (res["min"], res["max"]) == (4, 6) and res["disagreements"] == 0
    D = darboux(hexagonal_trefoil()).vertices
    bad = ",".join(map(repr, np.cross(D[0], [0.2, 0.3, 0.9]).tolist()))
    code, text = run(tmp_path, "map", "--gen", "hextrefoil", "--map", "tinflection",
                     f"--direction={bad}", "--direction", "0.3,0.4,0.5")
    res = json.loads(text)["result"]
    assert [s["degenerate"] for s in res["samples"]] == [True, False]
    assert code == 3  # half the directions are degenerate
    assert main(["map", "--gen", "hextrefoil", "--map", "bridge", "--direction", "0,0,0"]) == 2


def test_verify(tmp_path):
    code, text = run(tmp_path, "verify", "--gen", "random:6,1", "--graph", "bridge",
                     "--samples", "2000", "--probes", "200")
    assert code == 0 and json.loads(text)["result"]["verdict"]["ok"]
    code, text = run(tmp_path, "verify", "--gen", "random:6,1", "--graph", "bridge",
                     "--samples", "2000", "--probes", "200", "--negative-control")
    assert code == 1 and not json.loads(text)["result"]["verdict"]["ok"]
    code, _ = run(tmp_path, "verify", "--gen", "hextrefoil", "--graph", "tbridge",
                  "--samples", "2000", "--probes", "200")
    assert code == 0


def test_crofton(tmp_path):
    code, text = run(tmp_path, "crofton", "--gen", "torus:2,3,60,2,1", "--samples", "20000", "--seed", "4")
    res = json.loads(text)["result"]
    assert code == 0 and abs(res["z"]) < 3
    eq = SphericalPolygon([[1, 0, 0], [0, 1, 0], [-1, 0, 0], [0, -1, 0]])
    path = tmp_path / "eq.json"
    path.write_text(json.dumps(eq.to_json()))
    code, text = run(tmp_path, "crofton", "--polygon", str(path), "--samples", "500")
    res = json.loads(text)["result"]
    assert res["stderr"] == 0.0 and res["estimate"] == pytest.approx(2 * np.pi)
    assert main(["crofton", "--polygon", str(path), "--samples", "0"]) == 2


def test_seed_and_tolerance_bounds(tmp_path):
    with pytest.raises(SystemExit):
        main(["map", "--gen", "hextrefoil", "--map", "bridge", "--seed", str(2**64)])
    assert main(["map", "--gen", "hextrefoil", "--map", "bridge", "--tolerance-scale", "1e9"]) == 2
    code, text = run(tmp_path, "map", "--gen", "hextrefoil", "--map", "bridge", "--samples", "100",
                     "--seed", str(2**64 - 1), "--sampler", "uniform")
    assert code == 0 and json.loads(text)["config"]["seed"] == 2**64 - 1


def test_generate_specs():
    assert generate("torus:2,3,60").n == 60
    assert generate("random:9,2").n == 9
