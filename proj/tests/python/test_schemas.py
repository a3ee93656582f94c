import json

import pytest

import dreadlock

WINDOW = "--window=-5,5,-8,8"

COMMANDS = {
    "land": ["--address", "(0)", "--address", "(1)", "--address", "[2] (0)"],
    "trace-ray": ["--address", "(0)", "--address", "(-1)", "--n-pull", "3"],
    "scan-periodic": ["--period", "2", WINDOW, "--grid", "16,24"],
    "portrait": ["--period", "1", "--K", "2", WINDOW, "--stability"],
    "hyperbolic": [WINDOW, "--grid", "16,24", "--address", "(0)", "--address", "(1)"],
}


@pytest.mark.parametrize("command", sorted(COMMANDS))
def test_report_validates(command, validate):
    code, out, err = dreadlock.run(command, "--map", "exp:-2", *COMMANDS[command])
    assert code == 0, err
    validate(command, json.loads(out))


def test_cosine_land_validates(validate):
    code, out, err = dreadlock.run("land", "--map", "cos:0.5,0,0.5,0", "--address", "(L0)")
    assert code == 0, err
    validate("land", json.loads(out))


def test_render_validates(tmp_path, validate):
    image, svg = tmp_path / "r.ppm", tmp_path / "r.svg"
    code, out, err = dreadlock.run("render", "--map", "exp:-2", "--width", "20", "--height", "20",
                                   "--ray", "(0)", "--mark-period", "1", "--image", image, "--svg", svg)
    assert code == 0, err
    validate("render", json.loads(out))
    assert image.read_bytes().startswith(b"P6")
    assert svg.read_text().startswith("<")


def test_failure_reports_validate(validate):
    code, out, err = dreadlock.run("trace-ray", "--map", "exp:-2", "--address", "(0)", "--base", "30")
    assert code == 1
    validate("error", json.loads(err))
    code, out, _ = dreadlock.run("land", "--map", "exp:-2", "--address", "(0)", "--n-max", "3", "--no-slow")
    assert code == 1
    report = json.loads(out)
    validate("land", report)
    assert report["ok"] is False
