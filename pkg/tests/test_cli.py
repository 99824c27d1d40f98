from __future__ import annotations

import json

import pytest

from mukai_walls.cli import main

RANK_ONE = {"lattice": {"gram": [[2]], "labels": ["H"]}}


@pytest.fixture
def write(tmp_path):
    def _write(obj, name="p.json"):
        path = tmp_path / name
        path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(path)

    return _write


def out_json(capsys):
    return json.loads(capsys.readouterr().out)


def test_pair_and_square(write, capsys):
    p = write({**RANK_ONE, "vector": {"r": 1, "delta": [0], "s": -1}, "other": {"r": 0, "delta": [1], "s": -3}})
    assert main(["pair", "--input", p]) == 0
    assert out_json(capsys) == {"pairing": 3}
    assert main(["square", "--input", p]) == 0
    assert out_json(capsys) == {"square": 2}


def test_spherical_classes(write, capsys):
    p = write({"lattice": {"gram": [[-2, 3], [3, -2]]}})
    assert main(["spherical-classes", "--input", p, "--bound", "5", "--count", "3"]) == 0
    doc = out_json(capsys)
    assert doc["upper"] == [[0, 1], [1, 3], [3, 8]]
    q = write({"lattice": {"gram": [[2, 0], [0, 2]]}}, "q.json")
    assert main(["spherical-classes", "--input", q]) == 1


def test_walls_and_svg(tmp_path, capsys):
    svg = tmp_path / "w.svg"
    assert main(["walls", "--d", "1", "--n", "2", "--bounds", "3,10", "--svg", str(svg)]) == 0
    doc = out_json(capsys)
    assert [-3, 2] in [w["center"] for w in doc["walls"]]
    assert doc["vertical"]["beta"] == [0, 1]
    assert svg.read_text().startswith("<svg")


def test_walls_empty_is_negative(capsys):
    assert main(["walls", "--d", "4", "--n", "2", "--bounds", "20,400"]) == 1
    assert out_json(capsys)["walls"] == []


def test_plot_walls(capsys):
    assert main(["plot-walls", "--d", "1", "--n", "2", "--bounds", "3,10"]) == 0
    assert "HC" in capsys.readouterr().out


def test_check_line(capsys):
    assert main(["check-line", "--n", "2", "--k", "2", "--u", "1,-5"]) == 0
    assert out_json(capsys)["meets"] is True
    assert main(["check-line", "--n", "2", "--k", "2", "--u", "1,-3"]) == 1


def test_check_line_domain_error(capsys):
    assert main(["check-line", "--n", "2", "--k", "2", "--u", "1,3"]) == 2


def test_classify_wall(write, capsys):
    p = write({"lattice": {"gram": [[-2, 2], [2, 0]]}, "pair": [2, 1]})
    assert main(["classify-wall", "--input", p]) == 0
    assert out_json(capsys)["kind"]["tag"] == "IsotropicHyperbolic"
    q = write({**RANK_ONE, "vector": {"r": 1, "delta": [0], "s": -1}, "stab": {"d": 1, "alpha": 1, "beta": 0}},
              "q.json")
    assert main(["classify-wall", "--input", q]) == 0
    assert out_json(capsys)["kind"]["tag"] == "HilbertChow"


def test_reduce(write, tmp_path, capsys):
    p = write({**RANK_ONE, "vector": {"r": 2, "delta": [1], "s": -1}, "bounds": [10, 300]})
    out = tmp_path / "trace.json"
    assert main(["reduce", "--input", p, "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["n"] == 4 and doc["certificate"]["status"] == "Valid"
    assert doc["certificate"]["d"] == 12


def test_reduce_domain_error(write, capsys):
    p = write({**RANK_ONE, "vector": {"r": 1, "delta": [0], "s": 2}})
    assert main(["reduce", "--input", p]) == 2
    assert "error" in capsys.readouterr().err


def test_parse_error_reports_pointer(write, capsys):
    p = write({"lattice": {"gram": [[3]]}})
    assert main(["square", "--input", p]) == 2
    err = capsys.readouterr().err
    assert "/lattice" in err and "even lattice violated" in err


def test_certify(capsys):
    assert main(["certify", "--n", "2", "--k", "2", "--bounds", "10,300"]) == 0
    assert out_json(capsys)["status"] == "Valid"


def test_config_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "mw.cfg"
    cfg.write_text("certify_bounds = 5,50\n")
    assert main(["certify", "--n", "2", "--k", "2", "--config", str(cfg)]) == 0
    assert out_json(capsys)["bounds"] == [5, 50]
    assert main(["certify", "--n", "2", "--k", "2", "--config", str(cfg), "--bounds", "6,60"]) == 0
    assert out_json(capsys)["bounds"] == [6, 60]


def test_bad_config_key(tmp_path):
    cfg = tmp_path / "mw.cfg"
    cfg.write_text("colour = red\n")
    assert main(["certify", "--n", "2", "--k", "2", "--config", str(cfg)]) == 2


def test_missing_input_file():
    assert main(["square", "--input", "/nonexistent/p.json"]) == 2


def test_help_lists_commands_and_env(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    text = capsys.readouterr().out
    for cmd in ("pair", "square", "spherical-classes", "walls", "check-line",
                "classify-wall", "reduce", "plot-walls", "certify"):
        assert cmd in text
    assert "MUKAI_WALLS_THREADS" in text
