import io

import pytest

from reggraph.cli import main
from reggraph.io import export_dot, load_fixture, parse_graph


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue().splitlines(), err.getvalue()


def test_query_caption():
    code, lines, _ = run("query", "chronic_pain", "Zb | V | A,B,U")
    assert code == 0
    assert "independent=true" in lines


def test_query_dependent_has_witness():
    code, lines, _ = run("query", "chronic_pain", "A | B |")
    assert code == 0
    assert "independent=false" in lines
    assert any(ln.startswith("witness=") and ln != "witness=none" for ln in lines)


def test_batch_queries(tmp_path):
    f = tmp_path / "q.txt"
    f.write_text("B | V |\n# comment\nU | V | A\n")
    code, lines, _ = run("query", "chronic_pain", "--batch", str(f))
    assert code == 0
    assert [ln for ln in lines if ln.startswith("independent=")] == \
        ["independent=true", "independent=false"]


def test_equiv():
    code, lines, _ = run("equiv", "retrospective", "retrospective_concentration")
    assert code == 0 and "equivalent=true" in lines
    code, lines, _ = run("equiv", "sur", "sur_covariance")
    assert "equivalent=true" in lines


def test_confounding_path():
    code, lines, _ = run("confounding", "sequential_treatment", "--marginalize", "U",
                         "--response", "Y", "--regressor", "Tp")
    assert code == 0
    assert [ln for ln in lines if ln.startswith("indirect=")] == ["indirect=Y-A<-Tp"]
    assert "direct=none" in lines


def test_confounding_over_conditioning():
    code, lines, _ = run("confounding", "three_node_dag", "--condition", "1",
                         "--response", "2", "--regressor", "3")
    assert code == 0
    assert any(ln.startswith("over_conditioning=") and ln != "over_conditioning=none"
               for ln in lines)


def test_marginalize_writes_summary(tmp_path):
    out = tmp_path / "sg.rg"
    code, lines, _ = run("marginalize", "child_development", "Y8,Y4", "--out", str(out))
    assert code == 0 and "induced=0" in lines
    assert parse_graph(out.read_text()).is_summary


def test_condition_command():
    code, lines, _ = run("condition", "three_node_dag", "2")
    assert code == 0
    assert "nodes=1,3" in lines


def test_validate_fixture():
    code, lines, _ = run("validate", "child_development")
    assert code == 0
    assert lines[0] == "valid=true"
    assert all(not ln.endswith(":fail") for ln in lines)


def test_validate_failing_expectation(tmp_path):
    f = tmp_path / "g.rg"
    f.write_text("node a block=0\nnode b block=1\nedge b -> a\nexpect a | b | independent\n")
    code, lines, _ = run("validate", str(f))
    assert code == 1
    assert any(ln.endswith(":fail") for ln in lines)


def test_oracle_command():
    code, lines, _ = run("oracle", "--graph", "sequential_treatment", "--reps", "20")
    assert code == 0
    assert "failed=0" in lines


def test_export_matches_library(tmp_path):
    code, lines, _ = run("export", "sur")
    assert code == 0
    assert "\n".join(lines) + "\n" == export_dot(load_fixture("sur").graph)
    f = tmp_path / "g.dot"
    run("export", "sur", "--out", str(f))
    assert f.read_text() == export_dot(load_fixture("sur").graph)


def test_domain_error_exit_one(tmp_path):
    f = tmp_path / "bad.rg"
    f.write_text("node a block=0\nedge a -> a\n")
    code, lines, _ = run("validate", str(f))
    assert code == 1
    assert lines[0] == "error=SelfLoop"
    code, lines, _ = run("query", "sur", "1 | nope |")
    assert code == 1 and lines[0].startswith("error=")
    code, lines, _ = run("validate", "no_such_fixture")
    assert code == 1


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["query"], ["query", "sur"],
                                  ["oracle", "--reps", "3"]])
def test_usage_error_exit_two(argv):
    code, _, _ = run(*argv)
    assert code == 2


def test_verbose_goes_to_stderr():
    _, quiet_out, quiet_err = run("query", "sur", "1 | 4 |")
    _, loud_out, loud_err = run("--verbose", "query", "sur", "1 | 4 |")
    assert quiet_out == loud_out
    assert quiet_err == "" and loud_err


@pytest.mark.parametrize("argv", [
    ["oracle", "--graph", "child_development", "--reps", "5", "--seed", "3"],
    ["marginalize", "chronic_pain", "U,X"],
    ["equiv", "sur", "sur_covariance"],
])
def test_reports_deterministic(argv):
    assert run(*argv) == run(*argv)
