import json

import pytest

from orderlab.cli import dispatch, main
from orderlab.words import seifert_presentation


@pytest.fixture(scope="module")
def seifert_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "seifert.json"
    path.write_text(json.dumps(seifert_presentation().to_json()))
    return str(path)


def run(*argv):
    code, text = dispatch(list(argv))
    return code, json.loads(text)


def test_euler_bestvina():
    assert run("euler", "bestvina", "--index", "3") == (0, {"euler": 3})


def test_braid_cmp():
    assert run("braid", "cmp", "--n", "3", "s1", "e") == (0, {"verdict": "Greater"})
    assert run("braid", "cmp", "--n", "3", "e", "s1")[1] == {"verdict": "Less"}


def test_lo_cert(seifert_file):
    code, out = run("lo-cert", "--presentation", seifert_file, "--depth", "9")
    assert code == 0
    assert len(out["witnesses"]) == 16
    assert out["verified"] is True
    assert max(out["lengths"].values()) <= 9


def test_lo_cert_too_shallow(seifert_file):
    code, out = run("lo-cert", "--presentation", seifert_file, "--depth", "2")
    assert code == 2
    assert out["verdict"] == "not-found"


def test_usage_errors():
    for argv in ([], ["bogus"], ["euler"], ["euler", "bestvina", "--index", "x"], ["braid", "cmp", "s1"]):
        code, out = run(*argv)
        assert code == 1
        assert "error" in out


def test_invalid_input_file(tmp_path):
    bad = tmp_path / "p.json"
    bad.write_text('{"generators": 3}')
    code, out = run("lo-cert", "--presentation", str(bad))
    assert code == 1 and "error" in out


def test_missing_file():
    code, out = run("realize", "--order", "/nonexistent/order.json")
    assert code == 1 and "error" in out


def test_orbit_not_proper_is_inconclusive():
    code, out = run("alexander", "bestvina")
    assert code == 2
    assert out["verdict"] == "orbit-not-proper"


@pytest.mark.parametrize("argv", [
    ["euler", "genus2", "--i", "-1"],
    ["braid", "circ", "--n", "3", "e", "s1", "s1 s2"],
    ["mcg", "circ", "--n", "3", "e", "s1", "s1 s2"],
    ["cone-check", "--group", "braid", "--n", "3", "--radius", "2", "--seed", "5"],
])
def test_repeated_runs_are_byte_identical(argv):
    first = dispatch(argv)
    assert first[0] == 0
    assert dispatch(argv) == first


def test_pretty_is_the_same_document():
    code, compact = dispatch(["euler", "genus2", "--i", "2"])
    _, pretty = dispatch(["euler", "genus2", "--i", "2", "--pretty"])
    assert "\n" in pretty and "\n" not in compact
    assert json.loads(pretty) == json.loads(compact)


def test_realize_round_trip(tmp_path):
    order = tmp_path / "order.json"
    order.write_text(json.dumps({"carrier": [0, 1, 2, 3],
                                 "triples": [[0, 1, 2, 1], [0, 1, 3, 1], [0, 2, 3, 1], [1, 2, 3, 1]]}))
    code, out = run("realize", "--order", str(order))
    assert code == 0
    assert out["points"] == {"0": "0", "1": "1/2", "2": "3/4", "3": "7/8"}


def test_main_prints(capsys):
    assert main(["euler", "bestvina", "--index", "1"]) == 0
    assert capsys.readouterr().out.strip() == '{"euler":1}'
