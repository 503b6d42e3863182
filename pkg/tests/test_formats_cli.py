import json
import os
import subprocess
import sys

import pytest

from digifix import cli
from digifix.core import DigitalImage, ImageError
from digifix.corpus import CASES, load
from digifix.formats import parse_image, serialize, serialize_grid, serialize_list
from digifix.maps import SelfMap, format_map
from digifix.render import render_ascii, render_svg

GRID = """adjacency: c1
a#a
###
a#a
"""


def test_grid_orientation():
    doc = parse_image(GRID)
    assert doc.image.points == tuple((x, y) for x in range(3) for y in range(3))
    assert doc.marked == {(0, 0), (2, 0), (0, 2), (2, 2)}
    up = parse_image("#.\n##\n")
    assert (0, 1) in up.image and (1, 1) not in up.image


def test_origin_header():
    doc = parse_image("adjacency: c2\norigin: -1 -1\n###\n###\n###\n")
    assert min(doc.image.points) == (-1, -1) and doc.image.adjacency.name == "c2"


def test_list_format():
    doc = parse_image("adjacency: c2 dim 3\n0 0 0 a\n1 1 0\n; comment\n1 1 1\n")
    assert doc.format == "list" and doc.image.dim == 3
    assert doc.marked == {(0, 0, 0)}
    assert doc.image.adjacency.u == 2


@pytest.mark.parametrize("bad", [
    "###\n#x#\n", "##\n###\n", "", "adjacency: c1\n...\n", "adjacency: q\n#\n",
    "adjacency: c1 dim 2\n0 0\n1\n", "0 0\n0 0\n",
])
def test_parse_errors(bad):
    with pytest.raises(ImageError):
        parse_image(bad)


def test_round_trips():
    for name in CASES:
        doc = load(name)
        for fmt in ("grid", "list"):
            text = serialize(doc, fmt)
            again = parse_image(text)
            assert again.image == doc.image and again.marked == doc.marked
            assert serialize(again, fmt) == text


def test_adjacency_override():
    assert parse_image(GRID, "c2").image.adjacency.u == 2


def test_render():
    doc = parse_image(GRID)
    f = SelfMap.from_dict(doc.image, {(1, 1): (1, 2)})
    art = render_ascii(doc.image, doc.marked, f)
    assert "*" in art and "(1, 1) -> (1, 2)" in art
    svg = render_svg(doc.image, doc.marked, f)
    assert svg.startswith("<svg") and svg.count("<circle") == 4 and "marker-end" in svg


def run(*argv):
    return subprocess.run([sys.executable, "-m", "digifix.cli", *argv], capture_output=True,
                          text=True, cwd="/")


@pytest.fixture
def files(tmp_path):
    (tmp_path / "sq.txt").write_text(GRID)
    (tmp_path / "c2sq.txt").write_text("adjacency: c2\norigin: -1 -1\na#a\n###\na#a\n")
    (tmp_path / "bad.txt").write_text("#?#\n")
    (tmp_path / "map.txt").write_text("1 0 -> 1 1\n")
    return tmp_path


def test_cli_check_exit_codes(files, capsys):
    assert cli.main(["check", "--image", str(files / "sq.txt")]) == 0
    assert cli.main(["check", "--image", str(files / "sq.txt"), "--adjacency", "c2"]) == 1
    out = capsys.readouterr().out
    assert "refuted" in out and "->" in out
    assert cli.main(["check", "--image", str(files / "c2sq.txt"), "--mode", "cold", "--s", "1"]) == 0


def test_cli_unknown_on_tiny_budget(files):
    assert cli.main(["defect", "--image", str(files / "c2sq.txt"), "--budget", "1"]) in (0, 2)


def test_cli_defect_json(files, capsys):
    assert cli.main(["defect", "--image", str(files / "c2sq.txt"), "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["schema"] == cli.SCHEMA_VERSION and data["defect"] == 1


def test_cli_usage_and_input_errors(files, capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["check"])
    assert e.value.code == cli.EXIT_USAGE
    assert cli.main(["check", "--image", str(files / "bad.txt")]) == cli.EXIT_INPUT
    assert cli.main(["check", "--image", str(files / "missing.txt")]) == cli.EXIT_INPUT
    err = capsys.readouterr().err
    assert "error" in err


def test_cli_other_subcommands(files, capsys):
    assert cli.main(["minimal", "--image", str(files / "sq.txt")]) == 0
    capsys.readouterr()
    assert cli.main(["geometry", "--image", str(files / "sq.txt"), "--json"]) == 0
    geo = json.loads(capsys.readouterr().out)
    assert geo["disk"] and geo["convex"]
    assert cli.main(["predict", "--image", str(files / "sq.txt")]) == 0
    assert "90-axis-c1" in capsys.readouterr().out
    out = files / "pic.svg"
    assert cli.main(["render", "--image", str(files / "sq.txt"), "--format", "svg",
                     "--witness", str(files / "map.txt"), "-o", str(out)]) == 0
    assert out.read_text().startswith("<svg")


def test_corpus_subcommand_runs_from_any_directory():
    cp = run("corpus", "--filter", "diamond")
    assert cp.returncode == 0, cp.stdout + cp.stderr
    assert "PASS" in cp.stdout
