import io
import json

import pytest

from app import create_app, main
from src.controllers.cli_controller import (
    CliController, format_slope, format_vertex, parse_curve, parse_matrix, parse_slope, parse_vertex
)
from src.models.error_model import NotOneSidedSlope, NotUnimodular, ParseError
from src.models.slope_model import BoundarySlope, FareyVertex, UnimodularMatrix


def run(*argv):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = CliController(stdout=stdout, stderr=stderr).run(list(argv))
    return code, stdout.getvalue(), stderr.getvalue()


def test_parse_slope():
    assert parse_slope("10/3") == BoundarySlope(10, 3)
    assert parse_slope("-4/-1") == BoundarySlope(4, 1)
    assert parse_slope(" ( 20 , 6 ) ") == BoundarySlope(10, 3)
    with pytest.raises(NotOneSidedSlope):
        parse_slope("3/2")


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as error:
        parse_slope("10/x")
    assert error.value.position == 3
    with pytest.raises(ParseError):
        parse_curve("10/")
    with pytest.raises(ParseError):
        parse_vertex("5/3")
    with pytest.raises(ParseError):
        parse_matrix("1,2,3,4")


def test_parse_vertex_and_matrix():
    assert parse_vertex("5:3") == FareyVertex(5, 3)
    assert parse_vertex("5:-3") == FareyVertex(-5, 3)
    assert parse_matrix("3,2;4,3") == UnimodularMatrix(3, 2, 4, 3)
    with pytest.raises(NotUnimodular):
        parse_matrix("1,2;3,4")


def test_formatters_invert_parsers(tree_service):
    box = tree_service.build_box_graph(20, 41)
    for vertex in box.ordered_vertices():
        slope = tree_service.slope_service.slope_of_vertex(vertex)
        assert parse_slope(format_slope(slope)) == slope
        assert parse_vertex(format_vertex(vertex)) == vertex


def test_genus_command():
    assert run("genus", "10/3") == (0, "3\n", "")


def test_json_output_is_a_single_document():
    code, out, _ = run("--output", "json", "genus", "(10,3)")
    assert code == 0
    assert json.loads(out) == {'slope': {'u': 10, 'v': 3}, 'genus': 3}


def test_domain_errors_exit_one():
    code, out, err = run("compress", "0/1")
    assert code == 1
    assert out == ""
    assert "BOUNDARY_INCOMPRESSIBLE" in err

    code, out, _ = run("--output", "json", "genus", "3/2")
    assert code == 1
    assert json.loads(out)['code'] == "NOT_ONE_SIDED_SLOPE"


def test_usage_errors_exit_two(tmp_path):
    assert run("genus", "10/")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("neighbors", "0:1")[0] == 2
    assert run("--config", str(tmp_path / "missing.env"), "genus", "10/3")[0] == 2


def test_tree_commands():
    assert run("compress", "10/3")[1] == "4/1\n"
    assert run("bands", "10/3")[1] == "(2,0)\n(2,0)\n(6,2)\n"
    assert run("path", "1:3", "1:1")[1] == "1:3 0:1 1:1\nlength 2\n"
    assert run("classify", "5:3")[1] == "Longitudinal 2:1\n"
    assert run("neighbors", "1:1", "--bound", "5")[1] == "0:1\n2:1\n2:3\n4:3\n4:5\n"


def test_regions_command():
    code, out, _ = run("--output", "json", "regions", "(0,1)", "(10,3)")
    assert code == 0
    document = json.loads(out)
    assert document['genus'] == 3
    assert [[s['u'], s['v']] for s in document['slopes']] == [[0, 1], [2, 1], [4, 1], [10, 3]]
    assert document['original_slopes'][-1] == [10, 3]

    code, _, err = run("regions", "(0,1)", "(1,1)")
    assert code == 1
    assert "NOT_Z2_COMPATIBLE" in err


def test_tree_export_command():
    code, out, _ = run("tree-export", "--p-bound", "1", "--q-bound", "1", "--format", "dot")
    assert code == 0
    assert out.count(" -- ") == 2

    code, out, _ = run("tree-export", "--depth", "0", "--format", "json")
    assert json.loads(out)['vertices'] == [{'p': 0, 'q': 1, 'genus': 0}]


def test_tree_export_is_byte_identical_across_runs():
    first = run("tree-export", "--p-bound", "4", "--q-bound", "7", "--format", "svg")
    second = run("tree-export", "--p-bound", "4", "--q-bound", "7", "--format", "svg")
    assert first[1] == second[1]


def test_bundle_decide_command():
    code, out, _ = run("bundle-decide", "3,2;4,3")
    assert code == 0
    assert "NotExists (Parity)" in out

    code, out, _ = run("--output", "json", "bundle-decide", "2,1;1,1", "--check-height", "50")
    document = json.loads(out)
    assert code == 0
    assert document['type'] == "Hyperbolic"
    assert document['verdict']['witness'] == [1, 0]
    assert document['check'] == {'height': 50, 'witness': [1, 0], 'value': -1, 'agrees': True}


def test_bundle_decide_brute_force_mode():
    code, out, _ = run("--output", "json", "bundle-decide", "3,2;4,3", "--brute-force", "--check-height", "30")
    assert code == 0
    verdict = json.loads(out)['verdict']
    assert verdict['kind'] == "Unknown"
    assert verdict['method'] == "BruteForce"
    assert verdict['search_height'] == 30


def test_bundle_scan_and_verify_commands():
    code, out, _ = run("bundle-scan", "--entry-bound", "2")
    assert code == 0
    assert "disagreements 0" in out

    code, out, _ = run("verify", "--p-bound", "5", "--q-bound", "9")
    assert code == 0
    assert out.endswith("passed\n")


def test_config_file_flag(tmp_path):
    config_file = tmp_path / "moebius.env"
    config_file.write_text("MAX_BOX_VERTICES=3\n")
    code, _, err = run("--config", str(config_file), "tree-export", "--p-bound", "5", "--q-bound", "5")
    assert code == 1
    assert "BOUNDS_TOO_LARGE" in err


def test_app_entry_point(capsys):
    assert isinstance(create_app(), CliController)
    assert main(["genus", "2/1"]) == 0
    assert capsys.readouterr().out == "1\n"


def test_signed_arguments_are_values():
    assert run("genus", "-4/-1") == (0, "2\n", "")
    assert run("classify", "-5:3")[1] == "Longitudinal -2:1\n"
    assert run("path", "-1:1", "1:1")[1] == "-1:1 0:1 1:1\nlength 2\n"
    assert run("neighbors", "-1:1", "--bound", "3")[1] == "-2:1\n0:1\n-2:3\n"

    code, out, _ = run("bundle-decide", "-1,0;0,-1")
    assert code == 0
    assert "Exists (Eigenvector)" in out
    assert "NotExists" not in out


@pytest.mark.parametrize("argv", [
    ["neighbors", "0:1", "--bound", "0"],
    ["verify", "--p-bound", "0", "--q-bound", "3"],
    ["verify", "--p-bound", "3", "--q-bound", "4"],
    ["tree-export", "--q-bound", "-1"],
    ["tree-export", "--depth", "-1"],
    ["bundle-scan", "--entry-bound", "0"],
    ["bundle-decide", "3,2;4,3", "--check-height", "-5"],
    ["bundle-decide", "3,2;4,3", "--check-height", "0"],
])
def test_non_positive_bounds_are_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_bare_check_height_uses_configured_default():
    code, out, _ = run("--output", "json", "bundle-decide", "3,2;4,3", "--check-height")
    assert code == 0
    assert json.loads(out)['check']['height'] == 1000


def test_regions_text_shows_the_normalizer():
    code, out, _ = run("regions", "(0,1)", "(2,3)")
    assert code == 0
    lines = out.splitlines()
    assert "normalizer 1,0;-2,1" in lines
    assert "slopes 0/1 -2/1" in lines
    assert "original (0,1) (-2,-3)" in lines
