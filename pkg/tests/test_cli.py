"""
Tests for the command line, the JSON/CSV codec, the expression parser and settings.
"""
import json
import math

import pytest

from src.vage_spaces.config import Settings, parse_window
from src.vage_spaces.errors import UsageError, WindowError
from src.vage_spaces.algebra.linsys import Realization, RingMatrix
from src.vage_spaces.algebra.series import Series
from src.vage_spaces.cli.codec import (
    dumps, format_float, loads, realization_from_json, series_from_json, to_csv
)
from src.vage_spaces.cli.commands import run
from src.vage_spaces.cli.expression import parse_series, tokenize
from src.vage_spaces.monoid.multi_index import TruncationSpec


def realization_text(a: float, b: float, c: float, d: float, window=TruncationSpec(1, 3)) -> str:
    def scalar(value):
        return RingMatrix.constant([[value]], window)
    return dumps(Realization(scalar(a), scalar(b), scalar(c), scalar(d)))


@pytest.fixture
def vage(capsys):
    """Run the CLI with default settings and return (exit code, stdout, stderr)."""
    def invoke(*argv):
        code = run(list(argv), settings=Settings())
        captured = capsys.readouterr()
        return code, captured.out, captured.err
    return invoke


def term_map(payload):
    """{str(alpha): re} for a series payload."""
    return {json.dumps(term["alpha"]): term["re"] for term in payload["terms"]}


class TestSeriesCommands:
    """Test suite for the series subcommands."""

    def test_invert(self, vage):
        """Test that 1 - x1 inverts to the geometric series on (1, 3)."""
        code, out, _ = vage("series", "invert", "--in", "1-x1", "--window", "1,3")
        assert code == 0
        payload = json.loads(out)
        assert payload["window"] == {"K": 1, "N": 3}
        assert [term["alpha"] for term in payload["terms"]] == [[], [[1, 1]], [[1, 2]], [[1, 3]]]
        assert all(term["re"] == 1 and term["im"] == 0 for term in payload["terms"])

    def test_neumann_invert_agrees(self, vage):
        """Test that --neumann gives the same bytes."""
        _, exact, _ = vage("series", "invert", "--in", "1-x1", "--window", "1,3")
        _, neumann, _ = vage("series", "invert", "--in", "1-x1", "--window", "1,3", "--neumann", "3")
        assert exact == neumann

    def test_default_window_comes_from_settings(self, capsys):
        """Test that the settings window applies without --window."""
        assert run(["series", "invert", "--in", "1-x1"], settings=Settings(default_window=(1, 2))) == 0
        assert len(json.loads(capsys.readouterr().out)["terms"]) == 3

    def test_op(self, vage):
        """Test (1 + x1)(1 - x1) = 1 - x1^2."""
        code, out, _ = vage("series", "op", "--lhs", "1+x1", "--rhs", "1-x1", "--window", "1,2")
        assert code == 0
        assert term_map(json.loads(out)) == {"[]": 1, "[[1, 2]]": -1}

    def test_subtract(self, vage):
        """Test --op subtract."""
        _, out, _ = vage("series", "op", "--lhs", "x1", "--rhs", "x1", "--op", "subtract")
        assert json.loads(out)["terms"] == []

    def test_norm(self, vage):
        """Test ||1 + x1||_1 for the Kondratiev weight."""
        code, out, _ = vage("series", "norm", "--in", "1+x1", "--spec", "kondratiev", "--p", "1", "--window", "1,2")
        assert code == 0
        assert json.loads(out)["norm"] == pytest.approx(math.sqrt(1.5))

    def test_compose(self, vage):
        """Test exp(x1) on (1, 2)."""
        _, out, _ = vage("series", "compose", "--phi", "exp", "--in", "x1", "--window", "1,2")
        assert term_map(json.loads(out)) == pytest.approx({"[]": 1, "[[1, 1]]": 1, "[[1, 2]]": 0.5})

    def test_compose_with_coefficients(self, vage):
        """Test a coefficient list as phi."""
        _, out, _ = vage("series", "compose", "--phi", "0,0,1", "--in", "1+x1", "--window", "1,2")
        assert term_map(json.loads(out)) == pytest.approx({"[]": 1, "[[1, 1]]": 2, "[[1, 2]]": 1})

    def test_derive(self, vage):
        """Test D_1 x1^2 = 2 x1."""
        _, out, _ = vage("series", "derive", "--in", "x1^2", "--generator", "1", "--window", "1,2")
        assert term_map(json.loads(out)) == {"[[1, 1]]": 2}

    def test_json_input(self, vage):
        """Test that a JSON series is accepted inline."""
        text = dumps(Series.generator(1, TruncationSpec(1, 2)))
        code, out, _ = vage("series", "op", "--lhs", text, "--rhs", "x1", "--window", "1,2")
        assert code == 0
        assert term_map(json.loads(out)) == {"[[1, 2]]": 1}

    def test_file_input(self, vage, tmp_path):
        """Test the @path form."""
        path = tmp_path / "f.txt"
        path.write_text("1 - x1")
        _, out, _ = vage("series", "invert", "--in", f"@{path}", "--window", "1,1")
        assert term_map(json.loads(out)) == {"[]": 1, "[[1, 1]]": 1}


class TestWeightCommands:
    """Test suite for the weight subcommands."""

    def test_schwartz_check(self, vage):
        """Test that the Schwartz weight is admissible but not superexponential."""
        code, out, _ = vage("weight", "check", "--spec", "schwartz", "--K", "1")
        assert code == 0
        payload = json.loads(out)
        assert payload["admissible"] is True
        assert payload["superexponential"] is False
        assert payload["witness"] == ["e1", "e1"]
        assert payload["regularity_sum"] == pytest.approx(1 / 3)

    def test_kondratiev_check(self, vage):
        """Test the Kondratiev weight on the default probe window."""
        _, out, _ = vage("weight", "check", "--spec", "kondratiev", "--d", "2")
        payload = json.loads(out)
        assert payload["superexponential"] is True
        assert payload["witness"] is None
        assert payload["regular"] is True

    def test_vage_constant(self, vage):
        """Test the closed-form Kondratiev constant A(2) = sqrt(pi/2)."""
        _, out, _ = vage("weight", "vage-constant", "--spec", "kondratiev", "--d", "2", "--closed-form")
        assert json.loads(out)["value"] == pytest.approx(math.sqrt(math.pi / 2))


class TestAnalysisCommands:
    """Test suite for the analysis subcommands."""

    def test_zhang_wallis(self, vage):
        """Test d = 2 at K = 10^6."""
        code, out, _ = vage("analysis", "zhang", "--d", "2", "--K", "1e6")
        assert code == 0
        payload = json.loads(out)
        assert payload["target"] == "pi/2"
        assert payload["K"] == 1_000_000
        assert abs(payload["value"] - math.pi / 2) < 1e-5

    def test_zhang_divergent(self, vage):
        """Test d = 1 at K = 10^4."""
        _, out, _ = vage("analysis", "zhang", "--d", "1", "--K", "10000")
        payload = json.loads(out)
        assert payload["value"] > 100
        assert math.isinf(payload["limit"])

    def test_schwartz_failure(self, vage):
        """Test the doubling witness for target 10."""
        _, out, _ = vage("analysis", "schwartz-failure", "--p", "3", "--q", "1", "--target", "10")
        assert json.loads(out)["k"] == 128

    def test_vage_pair(self, vage):
        """Test an explicit pair."""
        _, out, _ = vage("analysis", "vage", "--spec", "kondratiev", "--p", "3", "--q", "1", "--d", "2",
                         "--lhs", "1+x1", "--rhs", "1+x1", "--window", "1,2")
        report = json.loads(out)["report"]
        assert report["holds"] is True
        assert report["lhs"] == pytest.approx(1.2311, abs=1e-4)

    def test_vage_random(self, vage):
        """Test a seeded random suite."""
        code, out, _ = vage("analysis", "vage", "--spec", "kondratiev", "--p", "3", "--q", "1", "--d", "2",
                            "--random", "5", "--window", "2,3", "--seed", "9")
        assert code == 0
        payload = json.loads(out)
        assert payload["seed"] == 9
        assert payload["checks"] == 5
        assert payload["failures"] == 0

    def test_vage_needs_both_series(self, vage):
        """Test that --lhs alone is a usage error."""
        code, _, err = vage("analysis", "vage", "--spec", "kondratiev", "--p", "3", "--q", "1", "--d", "2",
                            "--lhs", "x1")
        assert code == 2
        assert err.startswith("error:")


class TestLinsysCommands:
    """Test suite for the realization subcommands."""

    def test_eval(self, vage):
        """Test z/(1-z) at x1."""
        code, out, _ = vage("linsys", "eval", "--real", realization_text(1, 1, 1, 0), "--at", "x1")
        assert code == 0
        entry = json.loads(out)[0][0]
        assert term_map(entry) == {"[[1, 1]]": 1, "[[1, 2]]": 1, "[[1, 3]]": 1}

    def test_inverse(self, vage):
        """Test that the inverse of 1 - z has D = 1 and A = 1."""
        _, out, _ = vage("linsys", "compose", "--op", "inverse", "--real", realization_text(0, 1, -1, 1))
        r = realization_from_json(json.loads(out))
        assert r.a.expectation()[0, 0] == 1
        assert r.d.expectation()[0, 0] == 1

    def test_compose_needs_rhs(self, vage):
        """Test that binary operations require --rhs."""
        code, _, _ = vage("linsys", "compose", "--op", "sum", "--lhs", realization_text(0, 1, 1, 0))
        assert code == 2

    def test_product(self, vage):
        """Test that z * z has two states."""
        z = realization_text(0, 1, 1, 0)
        _, out, _ = vage("linsys", "compose", "--op", "product", "--lhs", z, "--rhs", z)
        assert realization_from_json(json.loads(out)).state_dim == 2

    def test_observable(self, vage):
        """Test the Kalman report of a one-state system."""
        _, out, _ = vage("linsys", "observable", "--real", realization_text(0.5, 1, 1, 0), "--trials", "3")
        payload = json.loads(out)
        assert payload["state_dim"] == 1
        assert payload["kalman_observable"] is True
        assert payload["rank"] == 1
        assert payload["witness"]["status"] == "OK"
        assert len(payload["witness"]["hits"]) == 3

    def test_impulse(self, vage):
        """Test three Markov parameters of z/(1-z)."""
        _, out, _ = vage("linsys", "impulse", "--real", realization_text(1, 1, 1, 0), "--terms", "3")
        response = json.loads(out)
        assert [term_map(h[0][0]) for h in response] == [{}, {"[]": 1}, {"[]": 1}]


class TestHermiteCommands:
    """Test suite for the Hermite subcommands."""

    def test_mehler_csv(self, vage):
        """Test the CSV header and row count."""
        code, out, _ = vage("hermite", "mehler", "--grid=-1,1,3", "--s", "0.1,0.5", "--terms", "100")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "u,v,s,lhs_re,lhs_im,rhs_re,rhs_im,abs_err"
        assert len(lines) == 1 + 2 * 9
        assert all(float(line.split(",")[-1]) < 1e-9 for line in lines[1:])

    def test_mehler_default_s_values(self, vage):
        """Test that the default table covers s in {+-0.1, +-0.3, +-0.5}."""
        code, out, _ = vage("hermite", "mehler", "--grid=-2,2,3")
        assert code == 0
        rows = [line.split(",") for line in out.strip().split("\n")[1:]]
        assert sorted({float(row[2]) for row in rows}) == [-0.5, -0.3, -0.1, 0.1, 0.3, 0.5]
        assert len(rows) == 6 * 9
        assert all(float(row[-1]) < 1e-9 for row in rows)

    def test_mehler_negative_s_list(self, vage):
        """Test that --s=-0.3,0.3 parses a list starting with a minus sign."""
        code, out, _ = vage("hermite", "mehler", "--grid=0,1,2", "--s=-0.3,0.3", "--terms", "100")
        assert code == 0
        rows = [line.split(",") for line in out.strip().split("\n")[1:]]
        assert {float(row[2]) for row in rows} == {-0.3, 0.3}
        assert len(rows) == 2 * 4

    def test_gp_norm(self, vage):
        """Test xi_0 + xi_1 for p = 1."""
        _, out, _ = vage("hermite", "gp-norm", "--coeffs", "1,1", "--p", "1")
        payload = json.loads(out)
        assert payload["coefficient_norm"] == 3
        assert payload["relative_error"] < 1e-8

    def test_strip(self, vage):
        """Test the exp-sqrt decay estimate."""
        _, out, _ = vage("hermite", "strip", "--decay", "exp-sqrt", "--nmax", "1000")
        payload = json.loads(out)
        assert payload["estimate"]["tau"] == pytest.approx(1.0)
        assert payload["estimate"]["infinite"] is False

    def test_strip_custom_needs_values(self, vage):
        """Test that --decay custom without values is a usage error."""
        code, _, _ = vage("hermite", "strip", "--decay", "custom", "--nmax", "10")
        assert code == 2

    def test_functions_csv(self, vage):
        """Test the xi_n table header and the value at 0."""
        _, out, _ = vage("hermite", "functions", "--nmax", "2", "--grid", "0,1,3")
        lines = out.strip().split("\n")
        assert lines[0] == "x,xi_0,xi_1,xi_2"
        assert float(lines[1].split(",")[1]) == pytest.approx(math.pi ** -0.25)

    def test_out_flag(self, vage, tmp_path):
        """Test that --out writes to a file instead of stdout."""
        target = tmp_path / "zhang.json"
        code, out, _ = vage("analysis", "zhang", "--d", "2", "--K", "3", "--out", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["value"] == pytest.approx(2304 / 1575)


class TestExitCodes:
    """Test suite for the exit-code mapping."""

    def test_missing_arguments(self, vage):
        """Test that argparse errors exit with 2."""
        code, _, _ = vage("series", "invert")
        assert code == 2

    def test_bad_window(self, vage):
        """Test that K = 0 is a usage error."""
        code, _, _ = vage("series", "invert", "--in", "1", "--window", "0,3")
        assert code == 2

    def test_parse_error(self, vage):
        """Test that x0 is a usage error."""
        code, _, err = vage("series", "invert", "--in", "1+x0")
        assert code == 2
        assert "x0" in err

    def test_not_invertible(self, vage):
        """Test that E[f] = 0 exits with 3."""
        code, _, err = vage("series", "invert", "--in", "x1")
        assert code == 3
        assert err.startswith("error:")

    def test_generator_outside_window(self, vage):
        """Test that x3 on a two-generator window exits with 3."""
        code, _, _ = vage("series", "invert", "--in", "1+x3", "--window", "2,2")
        assert code == 3

    def test_precondition(self, vage):
        """Test that p < q + d exits with 3."""
        code, _, _ = vage("analysis", "vage", "--spec", "kondratiev", "--p", "2", "--q", "1", "--d", "2",
                          "--lhs", "1", "--rhs", "1")
        assert code == 3

    def test_divergence(self, vage):
        """Test that the Kondratiev constant at d = 1 exits with 4."""
        code, _, _ = vage("weight", "vage-constant", "--spec", "kondratiev", "--d", "1", "--closed-form")
        assert code == 4

    def test_quadrature_guard(self, vage):
        """Test that p = 0 for the G_p norm exits with 3."""
        code, _, _ = vage("hermite", "gp-norm", "--coeffs", "1", "--p", "0")
        assert code == 3


class TestCodec:
    """Test suite for the canonical JSON and CSV output."""

    def test_series_round_trip_is_byte_identical(self):
        """Test dumps(read(dumps(f))) == dumps(f)."""
        window = TruncationSpec(2, 3)
        f = parse_series("1 - 0.1*x1 + (2+0.5i)*x1*x2 + 0.3333333333333333*x2^3", window)
        text = dumps(f)
        assert dumps(series_from_json(loads(text))) == text

    def test_realization_round_trip(self):
        """Test that a realization survives encoding."""
        text = realization_text(1, 1, 1, 0)
        r = realization_from_json(loads(text))
        assert dumps(r) == text
        assert r.state_dim == 1

    def test_format_float(self):
        """Test 17 significant digits and the special values."""
        assert format_float(0.1) == "0.10000000000000001"
        assert format_float(0.0) == "0"
        assert format_float(2.0) == "2"
        assert format_float(math.inf) == "Infinity"
        assert format_float(math.nan) == "NaN"

    def test_loads_rejects_garbage(self):
        """Test that invalid JSON is a usage error."""
        with pytest.raises(UsageError):
            loads("{not json")

    def test_series_needs_a_window(self):
        """Test that a series without window needs one from the caller."""
        payload = {"terms": [{"alpha": [[1, 1]], "re": 2.0}]}
        with pytest.raises(UsageError):
            series_from_json(payload)
        f = series_from_json(payload, TruncationSpec(1, 1))
        assert f == Series.generator(1, TruncationSpec(1, 1)).scale(2.0)

    def test_bad_realization(self):
        """Test missing keys."""
        with pytest.raises(UsageError):
            realization_from_json({"A": [], "B": []})

    def test_csv(self):
        """Test float formatting inside CSV rows."""
        assert to_csv(["a", "b"], [(0.5, "x")]) == "a,b\n0.5,x\n"


class TestExpression:
    """Test suite for inline series literals."""

    def test_polynomial(self):
        """Test 1 - x1 + 2*x1*x2."""
        window = TruncationSpec(2, 2)
        x1, x2 = Series.generator(1, window), Series.generator(2, window)
        assert parse_series("1 - x1 + 2*x1*x2", window) == 1 - x1 + 2 * (x1 * x2)

    def test_powers_truncate(self):
        """Test that (1+x1)^3 drops x1^3 on a degree-two window."""
        window = TruncationSpec(1, 2)
        x1 = Series.generator(1, window)
        assert parse_series("(1+x1)^3", window) == 1 + 3 * x1 + 3 * x1 ** 2

    def test_imaginary_literals(self):
        """Test 0.5i, a bare i and 2j."""
        window = TruncationSpec(2, 1)
        x2 = Series.generator(2, window)
        assert parse_series("0.5i*x2", window) == x2.scale(0.5j)
        assert parse_series("i", window) == Series.constant(1j, window)
        assert parse_series("2j + -1", window) == Series.constant(-1 + 2j, window)

    def test_tokens(self):
        """Test the token stream of a short expression."""
        assert tokenize("2*x1^2") == [("number", "2"), ("op", "*"), ("generator", "1"),
                                      ("op", "^"), ("number", "2")]

    @pytest.mark.parametrize("text", ["x0", "", "1 +", "1 $ 2", "(1+x1", "x1^-1", "x1^1.5"])
    def test_usage_errors(self, text):
        """Test malformed expressions."""
        with pytest.raises(UsageError):
            parse_series(text, TruncationSpec(2, 2))

    def test_generator_outside_window(self):
        """Test that x3 on K = 2 is a window error."""
        with pytest.raises(WindowError):
            parse_series("x3", TruncationSpec(2, 2))


class TestSettings:
    """Test suite for environment configuration."""

    def test_defaults(self):
        """Test the values used when nothing is set."""
        settings = Settings.from_env({})
        assert settings == Settings(seed=0, log_level="WARNING", default_window=(2, 4))

    def test_from_env(self):
        """Test reading all three variables."""
        settings = Settings.from_env({"VAGE_SEED": "7", "VAGE_LOG_LEVEL": "debug", "VAGE_WINDOW": "3,5"})
        assert settings == Settings(seed=7, log_level="DEBUG", default_window=(3, 5))

    @pytest.mark.parametrize("environ", [
        {"VAGE_SEED": "seven"},
        {"VAGE_LOG_LEVEL": "LOUD"},
        {"VAGE_WINDOW": "3"},
        {"VAGE_WINDOW": "0,2"},
    ])
    def test_invalid_values(self, environ):
        """Test that bad environment values are usage errors."""
        with pytest.raises(UsageError):
            Settings.from_env(environ)

    def test_parse_window(self):
        """Test the K,N form."""
        assert parse_window("4,2") == (4, 2)
