import json
from fractions import Fraction

import pytest
from click.testing import CliRunner

from chowstab.cli import cli, main
from chowstab.envelope import HeightVector
from chowstab.estimates import FAIL, EstimateReport
from chowstab.exceptions import InvariantError, IterationLimitExceeded
from chowstab.polytope import lattice_points
from chowstab.serializers import heights_to_json


def run(*argv):
    result = CliRunner(mix_stderr=False).invoke(cli, [str(a) for a in argv])
    if result.exception is not None and not isinstance(result.exception, SystemExit):
        raise result.exception
    return result.exit_code, result.stdout, result.stderr


@pytest.fixture
def hat_file(tmp_path, diamond):
    lattice = lattice_points(diamond, 1)
    hat = HeightVector.indicator(lattice, [lattice.index_of[(0, 0)]])
    path = tmp_path / "hat.json"
    path.write_text(json.dumps(heights_to_json(hat)))
    return path


def test_catalog():
    code, out, _ = run("catalog")

    assert code == 0
    assert "polarization" in out
    assert "X4: vertices read off plotted axis labels" in out


def test_ehrhart():
    code, out, _ = run("ehrhart", "--polytope", "X1")

    assert code == 0
    assert out.splitlines() == ["vol = 9/2", "b = 3", "chi(k) = (9k^2+3k+2)/2"]


def test_barycenter(tmp_path):
    path = tmp_path / "barycenter.json"

    code, out, _ = run("barycenter", "--polytope", "X1", "--k", "1", "--json", path)

    assert code == 0
    assert "discrete: (-2/7, -2/7)" in out
    assert "passes: False" in out
    assert json.loads(path.read_text())["mismatch"] == ["-2/7", "-2/7"]


def test_analyze_x1():
    code, out, _ = run("analyze", "--polytope", "X1", "--k", "1")

    lines = out.splitlines()
    assert code == 0
    assert lines[0] == (
        "X1 k=1: chow_unstable_barycenter j_min=-4/7 certificate J=-4/7"
    )
    assert lines[2].endswith("at k=1 this is -4/7")


def test_analyze_batch_json(tmp_path):
    path = tmp_path / "reports.json"

    code, out, _ = run(
        "analyze", "--polytope", "X1", "--k", "1..3", "--workers", "2", "--json", path
    )

    reports = json.loads(path.read_text())
    assert code == 0
    assert [r["k"] for r in reports] == [1, 2, 3]
    assert reports[1]["j_min"] == "-4/11"
    assert len(reports[0]["notes"]) == 2


def test_analyze_polystable(tmp_path):
    path = tmp_path / "report.json"

    code, out, _ = run("analyze", "--polytope", "X4", "--k", "1", "--json", path)

    assert code == 0
    assert out.strip() == "X4 k=1: chow_polystable j_min=0/1"
    assert json.loads(path.read_text())["used_weyl_reduction"] is True


def test_analyze_x2_at_k_2_carries_a_note():
    code, out, _ = run("analyze", "--polytope", "X2", "--k", "2")

    lines = out.splitlines()
    assert code == 0
    assert lines[0].startswith("X2 k=2: chow_semistable_boundary j_min=0/1")
    assert "Chow semistable but not polystable" in lines[2]


def test_analyze_without_weyl_reduction(tmp_path):
    path = tmp_path / "report.json"

    code, out, _ = run(
        "analyze", "--polytope", "X2", "--k", "1", "--no-weyl", "--json", path
    )

    assert code == 0
    assert out.startswith("X2 k=1: chow_not_polystable j_min=-1/21")
    assert json.loads(path.read_text())["used_weyl_reduction"] is False


def test_reports_are_byte_identical_across_runs(tmp_path):
    first, second = tmp_path / "first.json", tmp_path / "second.json"

    for path in (first, second):
        code, _, _ = run("analyze", "--polytope", "X2", "--k", "1,2", "--json", path)
        assert code == 0

    assert first.read_bytes() == second.read_bytes()


def test_estimates_are_byte_identical_across_runs(tmp_path):
    first, second = tmp_path / "first.json", tmp_path / "second.json"

    for path in (first, second):
        args = ("--suite", "s-trap", "--k", "1,2", "--samples", "20", "--seed", "7")
        code, _, _ = run("verify", *args, "--json", path)
        assert code == 0

    assert first.read_bytes() == second.read_bytes()


def test_certify(hat_file):
    code, out, _ = run("certify", "--polytope", "X2", "--k", "1", "--heights", hat_file)

    assert code == 0
    assert out.strip() == "J = 1/21"


def test_certify_heights_for_another_dilation(hat_file):
    code, _, err = run("certify", "--polytope", "X2", "--k", "2", "--heights", hat_file)

    assert code == 2
    assert "Heights are given for k=1, not k=2" in err


def test_plot(tmp_path, hat_file):
    path = tmp_path / "hat.svg"

    code, out, _ = run(
        "plot", "--polytope", "X2", "--k", "1", "--heights", hat_file, "--out", path
    )

    assert code == 0
    assert path.read_text().count('stroke="red"') == 8
    assert out.strip() == f"wrote {path}"


def test_verify_delta_table(tmp_path):
    path = tmp_path / "estimates.json"

    code, out, _ = run("verify", "--suite", "delta-table", "--k", "10", "--json", path)

    assert code == 0
    assert "delta table threshold: k >= 3" in out
    assert json.loads(path.read_text())[0]["status"] == "pass"


def test_verify_failure_exits_1(mocker):
    failed = EstimateReport(
        estimate="p1-inequality", parameters={"k": 2}, status=FAIL, witness={}
    )
    mocker.patch("chowstab.commands.verify.run_suite", return_value=[failed])

    code, out, _ = run("verify", "--suite", "p1-inequality")

    assert code == 1
    assert "fail" in out


def test_unknown_polytope():
    code, _, err = run("analyze", "--polytope", "X9", "--k", "1")

    assert code == 2
    assert "Unknown polytope 'X9'" in err


def test_bad_dilations(subtests):
    for text, message in (
        ("0", "Dilations must be positive"),
        ("3..1", "Dilations must be positive"),
        ("one", "Invalid dilations 'one'"),
    ):
        with subtests.test(k=text):
            code, _, err = run("analyze", "--polytope", "X1", "--k", text)

            assert code == 2
            assert message in err


def test_bad_box_bound():
    code, _, err = run("analyze", "--polytope", "X2", "--k", "1", "--box-bound", "1/0")

    assert code == 2
    assert "Invalid rational '1/0'" in err


def test_missing_heights_file(tmp_path):
    missing = tmp_path / "missing.json"

    code, _, err = run("certify", "--polytope", "X2", "--k", "1", "--heights", missing)

    assert code == 2
    assert "does not exist" in err


def test_iteration_limit_exit_code(mocker):
    mocker.patch(
        "chowstab.commands.analyze.decide_stability",
        side_effect=IterationLimitExceeded(
            lower=Fraction(-1, 3), upper=Fraction(0), iterations=7
        ),
    )

    code, _, err = run("analyze", "--polytope", "X2", "--k", "1")

    assert code == 3
    assert "after 7 cutting planes: -1/3 <= min J <= 0" in err


def test_invariant_failure_is_reported(mocker):
    capture = mocker.patch("chowstab.cli.sentry_sdk.capture_exception")
    error = InvariantError("a cutting plane lies above J")
    mocker.patch("chowstab.commands.analyze.decide_stability", side_effect=error)

    code, _, err = run("analyze", "--polytope", "X2", "--k", "1")

    assert code == 4
    assert err.strip() == "internal error: a cutting plane lies above J"
    capture.assert_called_once_with(error)


def test_unknown_suite_is_a_usage_error():
    code, _, err = run("verify", "--suite", "nope")

    assert code == 2
    assert "Invalid value for '--suite'" in err


def test_main_configures_logging_and_sentry(mocker):
    dict_config = mocker.patch("chowstab.cli.logging.config.dictConfig")
    sentry = mocker.patch("chowstab.cli.initialise_sentry")

    with pytest.raises(SystemExit) as exc_info:
        main(["ehrhart", "--polytope", "X2"])

    assert exc_info.value.code == 0
    dict_config.assert_called_once()
    sentry.assert_called_once_with()
