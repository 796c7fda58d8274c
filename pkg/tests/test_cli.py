import pytest
from click.testing import CliRunner

from linkoidlab.cli import main
from linkoidlab.closures import tail_starring
from linkoidlab.codec import parse_lkd, serialize_lkd
from linkoidlab.corpus import gen_Gn
from linkoidlab.statesum import mock_alexander, potential

from test_diagram import kink_knotoid, one_crossing_linkoid


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def kink_file(tmp_path):
    path = tmp_path / "kink.lkd"
    path.write_text(serialize_lkd(kink_knotoid()))
    return str(path)


@pytest.fixture
def starred_kink_file(tmp_path):
    path = tmp_path / "starred.lkd"
    path.write_text(serialize_lkd(tail_starring(kink_knotoid())))
    return str(path)


@pytest.fixture
def linkoid_file(tmp_path):
    path = tmp_path / "linkoid.lkd"
    path.write_text(serialize_lkd(one_crossing_linkoid()))
    return str(path)


class TestInfo:
    def test_kink(self, runner, kink_file):
        result = runner.invoke(main, ["info", kink_file])
        assert result.exit_code == 0
        assert "kappa=1 ell=0" in result.output
        assert "genus=0" in result.output

    def test_missing_file(self, runner):
        result = runner.invoke(main, ["info", "/nonexistent.lkd"])
        assert result.exit_code == 1

    def test_malformed_file(self, runner, tmp_path):
        path = tmp_path / "bad.lkd"
        path.write_text("not a diagram\n")
        result = runner.invoke(main, ["info", str(path)])
        assert result.exit_code == 1


class TestPotentialAndMap:
    def test_potential(self, runner, starred_kink_file):
        result = runner.invoke(main, ["potential", starred_kink_file])
        assert result.exit_code == 0
        assert result.output.strip() == str(potential(tail_starring(kink_knotoid())))

    def test_matrix(self, runner, starred_kink_file):
        result = runner.invoke(main, ["potential", starred_kink_file, "--matrix"])
        assert result.exit_code == 0
        rows = [line for line in result.output.splitlines() if line.startswith("[")]
        assert len(rows) == 1  # one crossing, one row

    def test_json(self, runner, starred_kink_file):
        result = runner.invoke(main, ["potential", starred_kink_file, "--json"])
        assert result.exit_code == 0
        assert '"kappa": 1' in result.output
        assert '"mock_alexander"' in result.output

    def test_map(self, runner, starred_kink_file):
        result = runner.invoke(main, ["map", starred_kink_file])
        assert result.exit_code == 0
        assert result.output.strip() == "1"

    def test_inadmissible_rejected(self, runner, kink_file):
        result = runner.invoke(main, ["potential", kink_file])
        assert result.exit_code == 1


class TestClose:
    def test_round_trip(self, runner, linkoid_file, tmp_path):
        out = tmp_path / "closed.lkd"
        result = runner.invoke(
            main,
            ["close", linkoid_file, "--components", "0,1", "--orient", "anti", "-o", str(out)],
        )
        assert result.exit_code == 0, result.output
        d = parse_lkd(out.read_text()).check()
        assert d.components().kappa == 0

    def test_stdout_is_parseable(self, runner, linkoid_file):
        result = runner.invoke(main, ["close", linkoid_file, "--components", "0,1", "--orient", "anti"])
        assert result.exit_code == 0
        parse_lkd(result.output).check()

    def test_unknown_component(self, runner, linkoid_file):
        result = runner.invoke(main, ["close", linkoid_file, "--components", "9"])
        assert result.exit_code == 1

    def test_bad_component_list(self, runner, linkoid_file):
        result = runner.invoke(main, ["close", linkoid_file, "--components", "a,b"])
        assert result.exit_code == 1

    def test_missing_option_is_usage_error(self, runner, linkoid_file):
        result = runner.invoke(main, ["close", linkoid_file])
        assert result.exit_code == 2

    def test_bad_style_is_usage_error(self, runner, linkoid_file):
        result = runner.invoke(main, ["close", linkoid_file, "--components", "0", "--style", "x"])
        assert result.exit_code == 2


class TestTheta:
    def test_adds_trivalent_nodes(self, runner, linkoid_file):
        result = runner.invoke(main, ["theta", linkoid_file, "--components", "0,1"])
        assert result.exit_code == 0
        assert " v3 " in result.output


class TestCanonical:
    def test_kappa_two(self, runner, linkoid_file):
        result = runner.invoke(main, ["canonical", linkoid_file])
        assert result.exit_code == 0
        assert result.output.strip() == str(mock_alexander(one_crossing_linkoid()))

    def test_bad_variant_is_usage_error(self, runner, linkoid_file):
        result = runner.invoke(main, ["canonical", linkoid_file, "--variant", "x"])
        assert result.exit_code == 2


class TestSkein:
    @pytest.fixture
    def starred_g1_file(self, tmp_path):
        # the kink's own crossing separates the diagram when smoothed, so use
        # the one-crossing generator whose crossing is non-separating
        path = tmp_path / "g1.lkd"
        path.write_text(serialize_lkd(tail_starring(gen_Gn(1))))
        return str(path)

    def test_residual_zero(self, runner, starred_g1_file):
        result = runner.invoke(main, ["skein", starred_g1_file, "--crossing", "c0"])
        assert result.exit_code == 0, result.output
        assert "residual: 0" in result.output

    def test_unknown_crossing(self, runner, starred_g1_file):
        result = runner.invoke(main, ["skein", starred_g1_file, "--crossing", "c9"])
        assert result.exit_code == 1

    def test_separating_crossing_errors(self, runner, starred_kink_file):
        result = runner.invoke(main, ["skein", starred_kink_file, "--crossing", "c0"])
        assert result.exit_code == 1


class TestFuzz:
    def test_invariant_holds(self, runner, starred_kink_file):
        result = runner.invoke(main, ["fuzz", starred_kink_file, "--moves", "12", "--seed", "3"])
        assert result.exit_code == 0, result.output
        assert result.output.startswith("ok:")


class TestScan:
    def test_report(self, runner):
        result = runner.invoke(main, ["scan-conjecture", "--count", "2", "--crossings", "5"])
        assert result.exit_code == 0, result.output
        assert "scanned 2 diagrams" in result.output


class TestGen:
    def test_gn(self, runner):
        result = runner.invoke(main, ["gen", "gn", "2"])
        assert result.exit_code == 0
        d = parse_lkd(result.output).check()
        assert len(d.crossings()) == 3

    def test_random_deterministic(self, runner):
        args = ["gen", "random", "--knotoidal", "2", "--mutations", "4", "--seed", "7"]
        a = runner.invoke(main, args)
        b = runner.invoke(main, args)
        assert a.exit_code == 0
        assert a.output == b.output
        d = parse_lkd(a.output).check()
        assert d.components().kappa == 2

    def test_unknown_command_is_usage_error(self, runner):
        result = runner.invoke(main, ["frobnicate"])
        assert result.exit_code == 2
