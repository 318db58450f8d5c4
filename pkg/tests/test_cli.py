import json

import yaml
from click.testing import CliRunner

from acm_towers import __version__
from acm_towers.cli import cli


def invoke(tmpdir, *args):
    """Run the CLI writing the report to a file below ``tmpdir``"""
    path_out = f"{tmpdir}/out.txt"
    result = CliRunner().invoke(cli, [*args, "--path-out", path_out])
    try:
        with open(path_out, "rt") as inputf:
            text = inputf.read()
    except FileNotFoundError:
        text = None
    return result.exit_code, text


def invoke_json(tmpdir, *args):
    exit_code, text = invoke(tmpdir, *args)
    return exit_code, json.loads(text)


def test_version():
    result = CliRunner().invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert __version__ in result.output


def test_tower_check(tmpdir):
    exit_code, report = invoke_json(tmpdir, "tower", "check", "tests/data/cli/single_point.json")
    assert exit_code == 0
    assert report["command"] == "tower check"
    assert report["result"] == {"tower": True}
    exit_code, report = invoke_json(tmpdir, "tower", "check", "tests/data/cli/flipped.json")
    assert exit_code == 1
    assert report["result"] == {"tower": False}


def test_input_errors(tmpdir):
    exit_code, text = invoke(tmpdir, "tower", "check", "tests/data/cli/malformed.json")
    assert exit_code == 2
    assert text is None
    exit_code, _ = invoke(tmpdir, "tower", "check", f"{tmpdir}/missing.json")
    assert exit_code == 2
    exit_code, _ = invoke(tmpdir, "hb", "towerize", "tests/data/cli/single_point.json")
    assert exit_code == 2


def test_tower_hash_and_hf(tmpdir):
    exit_code, report = invoke_json(tmpdir, "tower", "hash", "tests/data/cli/star_3_2.json")
    assert exit_code == 0
    assert sorted(report["result"]["generators"]) == [[1, 2], [2, 1]]
    exit_code, text = invoke(
        tmpdir, "tower", "hf", "tests/data/cli/single_point.json", "--format", "tsv"
    )
    assert exit_code == 0
    assert text.splitlines() == ["i\th_i", "0\t1"]


def test_segment_commands(tmpdir):
    exit_code, report = invoke_json(tmpdir, "segment", "hvec", "tests/data/cli/small_segment.json")
    assert exit_code == 0
    assert report["result"] == {"h_vector": [1, 2]}
    exit_code, report = invoke_json(
        tmpdir,
        "segment",
        "scale",
        "tests/data/cli/small_segment.json",
        "--path-degrees",
        "tests/data/cli/degrees.json",
    )
    assert exit_code == 0
    assert sorted(report["result"]["generators"]) == [[1, 4], [3, 1]]


def test_star_gen(tmpdir):
    exit_code, report = invoke_json(tmpdir, "star", "gen", "--s", "3", "--c", "2")
    assert exit_code == 0
    assert sorted(report["result"]["points"]["points"]) == [[2, 1], [3, 1], [3, 2]]
    assert report["result"]["tower"] is True
    exit_code, _ = invoke(tmpdir, "star", "gen", "--s", "2", "--c", "3")
    assert exit_code == 2


def test_ideal_commands(tmpdir):
    exit_code, report = invoke_json(
        tmpdir, "ideal", "build", "tests/data/cli/six_point_support.json"
    )
    assert exit_code == 0
    assert len(report["result"]["generators"]) == 4
    exit_code, report = invoke_json(tmpdir, "ideal", "primes", "tests/data/cli/skew_lines.json")
    assert exit_code == 0
    assert report["result"]["primes"] == [[1, 2], [3, 4]]
    assert report["result"]["height"] == 2
    exit_code, report = invoke_json(tmpdir, "ideal", "hvec", "tests/data/cli/six_point_ideal.json")
    assert exit_code == 0
    assert report["result"] == {"c": 2, "h_vector": [1, 2, 3], "degree": 6}


def test_ideal_acm(tmpdir):
    exit_code, report = invoke_json(tmpdir, "ideal", "acm", "tests/data/cli/six_point_ideal.json")
    assert exit_code == 0
    assert report["result"]["acm"] is True
    assert report["result"]["pd"] == 2
    exit_code, text = invoke(
        tmpdir, "ideal", "acm", "tests/data/cli/skew_lines.json", "--format", "tsv"
    )
    assert exit_code == 1
    assert text.splitlines()[0] == "i\tj\tvalue"


def test_ideal_acm_taylor_check(tmpdir):
    exit_code, report = invoke_json(
        tmpdir, "ideal", "acm", "tests/data/cli/six_point_ideal.json", "--taylor-check"
    )
    assert exit_code == 0
    assert report["result"]["taylor_pd"] == 2
    exit_code, text = invoke(
        tmpdir,
        "ideal",
        "acm",
        "tests/data/cli/six_point_ideal.json",
        "--taylor-check",
        "--path-caps",
        "tests/data/cli/taylor_caps.json",
    )
    assert exit_code == 2
    assert text is None


def test_gts_commands(tmpdir):
    exit_code, report = invoke_json(tmpdir, "gts", "check", "tests/data/cli/chain_gts.json")
    assert exit_code == 0
    assert report["result"]["ok"] is True
    exit_code, report = invoke_json(tmpdir, "gts", "find", "tests/data/cli/chain_points.json")
    assert exit_code == 0
    assert report["result"]["decomposition"]["S0"]["points"] == [[5, 3]]
    exit_code, report = invoke_json(tmpdir, "gts", "find", "tests/data/cli/flipped.json")
    assert exit_code == 1
    assert report["result"]["decomposition"] is None


def test_towerizable(tmpdir):
    exit_code, report = invoke_json(
        tmpdir, "towerizable", "tests/data/cli/six_point_support.json"
    )
    assert exit_code == 1
    assert report["result"]["message"] == "not towerizable"
    assert report["result"]["witness"] is None
    exit_code, _ = invoke(
        tmpdir,
        "towerizable",
        "tests/data/cli/six_point_support.json",
        "--path-caps",
        "tests/data/cli/small_caps.json",
    )
    assert exit_code == 2


def test_gen_towerizable(tmpdir):
    exit_code, report = invoke_json(
        tmpdir, "gen-towerizable", "tests/data/cli/six_point_support.json"
    )
    assert exit_code == 0
    assert report["result"]["message"] == "towerizable"
    exit_code, report = invoke_json(
        tmpdir, "gen-towerizable", "tests/data/cli/skew_lines_support.json"
    )
    assert exit_code == 1
    assert report["result"]["towerizable"] is False


def test_hb_commands(tmpdir):
    exit_code, report = invoke_json(
        tmpdir, "hb", "standard-form", "tests/data/cli/six_point_ideal.json"
    )
    assert exit_code == 0
    with open("tests/data/cli/six_point_matrix.json", "rt") as inputf:
        assert report["result"] == json.load(inputf)
    exit_code, report = invoke_json(
        tmpdir, "hb", "towerize", "tests/data/cli/six_point_matrix.json"
    )
    assert exit_code == 0
    assert report["result"]["orientation"]["gts"]["S0"]["points"] == [[5, 3]]
    assert len(report["result"]["families"]["f1"]) == 6
    exit_code, _ = invoke(tmpdir, "hb", "standard-form", "tests/data/cli/skew_lines.json")
    assert exit_code == 2


def test_verify_characterization(tmpdir):
    exit_code, report = invoke_json(
        tmpdir, "verify", "characterization", "tests/data/cli/six_point_ideal.json"
    )
    assert exit_code == 0
    assert report["result"]["acm"] is True
    exit_code, report = invoke_json(
        tmpdir, "verify", "characterization", "tests/data/cli/skew_lines.json"
    )
    assert exit_code == 0
    assert report["result"]["acm"] is False


def test_selftest(tmpdir):
    exit_code, report = invoke_json(
        tmpdir, "selftest", "--seed", "3", "--cases-scale", "0.01", "--suite", "tower_acm"
    )
    assert exit_code == 0
    assert report["result"]["failed"] == []
    assert [suite["name"] for suite in report["result"]["suites"]] == ["tower_acm"]


def test_selftest_taylor_caps(tmpdir):
    exit_code, report = invoke_json(
        tmpdir,
        "selftest",
        "--cases-scale",
        "0.05",
        "--suite",
        "resolution_crosscheck",
        "--path-caps",
        "tests/data/cli/taylor_caps.json",
    )
    assert exit_code == 0
    (suite,) = report["result"]["suites"]
    assert suite["skipped"] > 0


def test_reports_are_deterministic(tmpdir):
    args = ("gen-towerizable", "tests/data/cli/six_point_support.json", "--compact")
    first = invoke(tmpdir, *args)
    second = invoke(tmpdir, *args)
    assert first == second


def test_dump_schemas(tmpdir):
    result = CliRunner().invoke(cli, ["utils", "dump-schemas", f"{tmpdir}/schemas.yaml"])
    assert result.exit_code == 0
    with open(f"{tmpdir}/schemas.yaml", "rt") as inputf:
        description = yaml.safe_load(inputf)
    assert "ideal" in description["records"]
