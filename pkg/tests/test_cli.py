import json

from stacktilt.cli import main
from stacktilt.quiver import parse_dot

P23 = {"group": {"free_rank": 1, "torsion_orders": [], "degrees": [[2], [3]]}}
P1 = {"group": {"free_rank": 1, "torsion_orders": [], "degrees": [[1], [1]]}}
P1P1_POLYTOPE = {"polytope": {"dim": 2, "vertices": [[1, 0], [-1, 0],
                                                     [0, 1], [0, -1]]}}
BAD_POLYTOPE = {"polytope": {"dim": 1, "vertices": [[1], [3]]}}


def _write(tmp_path, doc, name="input.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_classify_p23(tmp_path, capsys):
    path = _write(tmp_path, P23)
    code, doc = _run(capsys, ["classify", path])
    assert code == 0
    assert doc["schema_version"] == 1
    assert doc["rank"] == 1 and doc["class_count"] == 2
    bundles = [c["line_bundles"] for c in doc["classes"]]
    assert bundles == [[[0], [1], [2], [3], [4]], [[0], [2], [3], [4], [6]]]
    neighbors = doc["classes"][0]["mutation_neighbors"]
    assert {n["to"] for n in neighbors} <= {c["id"] for c in doc["classes"]}


def test_classify_zp_mode(tmp_path, capsys):
    path = _write(tmp_path, P23)
    code, doc = _run(capsys, ["classify", path, "--mode", "zp"])
    assert code == 0
    # one class per cut of type (2,3): ten of them
    assert doc["class_count"] == 10


def test_classify_deterministic(tmp_path, capsys):
    path = _write(tmp_path, P23)
    code, _ = _run(capsys, ["classify", path])
    out1 = main(["classify", path]), capsys.readouterr().out
    out2 = main(["classify", path]), capsys.readouterr().out
    assert out1 == out2


def test_classify_p1p1_polytope(tmp_path, capsys):
    path = _write(tmp_path, P1P1_POLYTOPE)
    code, doc = _run(capsys, ["classify", path])
    assert code == 0
    assert doc["rank"] == 2
    assert doc["j_class_count"] == 2
    # faithful counts; the published example misses one inner class
    assert sorted(g["class_count"] for g in doc["j_classes"]) == [4, 5]
    assert sorted(g["merged_class_count"] for g in doc["j_classes"]) == [2, 5]
    assert doc["split"]["h_torsion_orders"] == [2]
    assert doc["split"]["s_free"] == 2


def test_classify_validation_error(tmp_path, capsys):
    path = _write(tmp_path, BAD_POLYTOPE)
    code, doc = _run(capsys, ["classify", path])
    assert code == 2
    assert doc["error"]["type"] == "OriginNotInterior"


def test_classify_malformed_inputs(tmp_path, capsys):
    code, doc = _run(capsys, ["classify", _write(tmp_path, {"group": {}})])
    assert code == 2 and doc["error"]["type"] == "InputError"
    code, doc = _run(capsys, ["classify", _write(tmp_path, {})])
    assert code == 2
    code, doc = _run(capsys, ["classify", str(tmp_path / "missing.json")])
    assert code == 2


def test_classify_dot_output(tmp_path, capsys):
    path = _write(tmp_path, P23)
    dot_dir = tmp_path / "dots"
    code, doc = _run(capsys, ["classify", path, "--dot-dir", str(dot_dir)])
    assert code == 0
    files = sorted(dot_dir.glob("*.dot"))
    assert len(files) == 2
    for f, entry in zip(files, sorted(doc["classes"], key=lambda c: c["id"])):
        nodes, edges = parse_dot(f.read_text())
        assert len(nodes) == len(entry["quiver"]["vertices"])
        assert len(edges) == len(entry["quiver"]["arrows"])


def test_mutate_single_step(tmp_path, capsys):
    path = _write(tmp_path, P1)
    code, doc = _run(capsys, ["mutate", path, "--class", "0", "--at", "[0]"])
    assert code == 0
    assert doc["result"]["line_bundles"] == [[1], [2]]


def test_mutate_walk(tmp_path, capsys):
    path = _write(tmp_path, P23)
    code, doc = _run(capsys, ["mutate", path, "--class", "0",
                              "--walk-to", "1"])
    assert code == 0
    assert doc["length"] >= 1


def test_mutate_not_minimal(tmp_path, capsys):
    path = _write(tmp_path, P23)
    code, doc = _run(capsys, ["mutate", path, "--class", "0", "--at", "[2]"])
    assert code == 2
    assert doc["error"]["type"] == "NotMinimal"


def test_cohomology_p1(tmp_path, capsys):
    p1 = {"polytope": {"dim": 1, "vertices": [[1], [-1]]}}
    path = _write(tmp_path, p1)
    code, doc = _run(capsys, ["cohomology", path, "--twist", "[2,0]",
                              "--all-r"])
    assert code == 0
    assert doc["dims"] == {"0": 3, "1": 0}
    code, doc = _run(capsys, ["cohomology", path, "--twist", "[-1,-1]",
                              "--all-r"])
    assert doc["dims"] == {"0": 0, "1": 1}
    code, doc = _run(capsys, ["cohomology", path, "--twist", "[-1,-1]",
                              "--all-r", "--field", "F2"])
    assert doc["dims"] == {"0": 0, "1": 1}


def test_cohomology_p1p1(tmp_path, capsys):
    path = _write(tmp_path, P1P1_POLYTOPE)
    code, doc = _run(capsys, ["cohomology", path, "--twist", "[-2,0,0,0]",
                              "--all-r"])
    assert code == 0
    assert doc["dims"] == {"0": 0, "1": 1, "2": 0}
    code, doc = _run(capsys, ["cohomology", path, "--twist", "[-2,0,0,0]",
                              "--r", "1"])
    assert code == 0 and doc["dims"] == {"1": 1}
    code, doc = _run(capsys, ["cohomology", path, "--twist", "[1,2]"])
    assert code == 2 and doc["error"]["type"] == "InputError"


def test_verify_ok_and_failure(tmp_path, capsys):
    path = _write(tmp_path, P23)
    code, doc = _run(capsys, ["verify", path])
    assert code == 0 and doc["ok"]
    assert all(entry["thick_generation"] == "by theorem"
               for entry in doc["classes"])
    code, doc = _run(capsys, ["verify", path, "--set", "[[0],[7]]"])
    assert code == 1 and not doc["ok"]
    failures = doc["classes"][0]["failures"]
    assert any(f["r"] == 1 for f in failures)


def test_verify_single_class(tmp_path, capsys):
    path = _write(tmp_path, P1)
    code, doc = _run(capsys, ["verify", path, "--class", "0", "--jobs", "2"])
    assert code == 0 and doc["ok"]


def test_cuts_from_lattice(tmp_path, capsys):
    doc_in = {"lattice": {"d": 1, "b_generators": [[5, -5]],
                          "gamma": [2, 3]}}
    code, doc = _run(capsys, ["cuts", _write(tmp_path, doc_in)])
    assert code == 0
    assert doc["admissible"] and doc["cut_count"] == 10
    assert all(entry["bounding"] for entry in doc["cuts"])
    doc_in["lattice"]["gamma"] = [1, 3]
    code, doc = _run(capsys, ["cuts", _write(tmp_path, doc_in, "b.json")])
    assert code == 0 and not doc["admissible"]
    assert "sum" in doc["reason"]
    doc_in = {"lattice": {"d": 2, "b_generators": [[-2, 2, 0], [0, -2, 2]],
                          "gamma": [2, 1, 1]}}
    code, doc = _run(capsys, ["cuts", _write(tmp_path, doc_in, "c.json")])
    assert code == 0 and not doc["admissible"]
    assert "divisible" in doc["reason"]


def test_cuts_from_group(tmp_path, capsys):
    code, doc = _run(capsys, ["cuts", _write(tmp_path, P23)])
    assert code == 0
    assert doc["m"] == 5 and doc["type"] == [2, 3] and doc["admissible"]


def test_max_classes_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("STACKTILT_MAX_CLASSES", "1")
    code, doc = _run(capsys, ["classify", _write(tmp_path, P23)])
    assert code == 2 and doc["error"]["type"] == "ClassCountExceeded"
    code, doc = _run(capsys, ["classify", _write(tmp_path, P23, "b.json"),
                              "--max-classes", "50"])
    assert code == 0


def test_cuts_enumerate_all_types(tmp_path, capsys):
    doc_in = {"lattice": {"d": 1, "b_generators": [[3, -3]]}}
    code, doc = _run(capsys, ["cuts", _write(tmp_path, doc_in)])
    assert code == 0
    realized = {tuple(t["type"]) for t in doc["types"]}
    assert all(t["admissible"] for t in doc["types"])
    assert sum(t["cut_count"] for t in doc["types"]) == doc["cut_count"]
    assert realized == {(0, 3), (1, 2), (2, 1), (3, 0)}
