"""
Integration tests for the mersenne-div command line.
"""

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from mersenne_divisibility.cli import main


SMALL_GRID = ["--a-range", "2", "3", "--m-range", "1", "8", "--k-range", "1", "3", "--d-range", "2", "4"]


def invoke(*args):
    return CliRunner().invoke(main, list(args))


@pytest.mark.integration
class TestCheckCommand:
    """Test the check subcommand."""

    def test_divides(self):
        """Test a divisible instance."""
        result = invoke("check", "2", "4", "2", "3")

        assert result.exit_code == 0
        assert "divides: true, Q=13" in result.output
        assert "criterion: true, oracle: true" in result.output

    def test_trivial(self):
        """Test m = k."""
        result = invoke("check", "2", "2", "2", "3")

        assert result.exit_code == 0
        assert "divides: true, Q=1" in result.output

    def test_residue_witness(self):
        """Test a non-divisible instance with k | m."""
        result = invoke("check", "2", "6", "2", "3")

        assert result.exit_code == 0
        assert "divides: false, residue-witness l=3 r=3 mod 21" in result.output

    def test_with_certificate(self):
        """Test the JSON certificate output."""
        result = invoke("check", "3", "3", "2", "2", "--with-certificate")

        assert result.exit_code == 0
        line = next(l for l in result.output.splitlines() if l.startswith("certificate: "))
        assert json.loads(line[len("certificate: "):]) == {"kind": "order-witness", "prime": 5, "order": 4}
        assert "verified: true" in result.output

    def test_invalid_instance(self):
        """Test exit code 1 for a domain violation."""
        result = invoke("check", "1", "4", "2", "3")
        assert result.exit_code == 1

    def test_usage_error(self):
        """Test exit code 1 for missing arguments."""
        result = invoke("check", "2", "4")
        assert result.exit_code == 1

    def test_guard(self):
        """Test exit code 4 when the guard is exceeded."""
        result = invoke("check", "2", "400", "2", "300", "--max-bits", "1000")
        assert result.exit_code == 4

    def test_disagreement_exit_code(self, monkeypatch):
        """Test exit code 3 when the criterion contradicts the oracle."""
        monkeypatch.setattr("mersenne_divisibility.cli.divides_criterion", lambda m, k, d: False)
        result = invoke("check", "2", "4", "2", "3")

        assert result.exit_code == 3
        assert "Disagreement: criterion=false oracle=true" in result.output
        assert "divides:" not in result.output


@pytest.mark.integration
class TestSweepCommand:
    """Test the sweep subcommand."""

    def test_json_lines(self):
        """Test JSON-lines output of a small grid."""
        result = invoke("-q", "sweep", "--format", "json", *SMALL_GRID)

        assert result.exit_code == 0
        records = [json.loads(line) for line in result.output.splitlines() if line.startswith("{")]
        assert len(records) == 144
        assert records[0] == {
            "a": 2, "m": 1, "k": 1, "d": 2,
            "criterion": True, "oracle": True, "poly": None, "elapsed_micros": 0,
        }
        assert all(r["criterion"] == r["oracle"] for r in records)

    def test_csv_header(self):
        """Test the CSV header row."""
        result = invoke("-q", "sweep", "--format", "csv", *SMALL_GRID)

        assert result.exit_code == 0
        assert "a,m,k,d,criterion,oracle,poly,elapsed_micros" in result.output.splitlines()

    def test_jobs_do_not_change_output(self):
        """Test byte-identical output across job counts."""
        single = invoke("-q", "sweep", "--format", "json", "--jobs", "1", *SMALL_GRID)
        multi = invoke("-q", "sweep", "--format", "json", "--jobs", "2", *SMALL_GRID)

        assert single.exit_code == multi.exit_code == 0
        assert single.output == multi.output

    def test_include_poly(self):
        """Test the polynomial verdict column."""
        result = invoke(
            "-q", "sweep", "--format", "json", "--include-poly",
            "--a-range", "2", "2", "--m-range", "1", "6", "--k-range", "1", "6", "--d-range", "2", "5",
        )

        assert result.exit_code == 0
        records = [json.loads(line) for line in result.output.splitlines() if line.startswith("{")]
        assert all(r["poly"] == r["criterion"] for r in records)

    def test_empty_range(self):
        """Test that an empty range exits 0 with no records."""
        result = invoke("-q", "sweep", "--format", "json", "--m-range", "5", "4")

        assert result.exit_code == 0
        assert not [line for line in result.output.splitlines() if line.startswith("{")]

    def test_summary(self):
        """Test that the summary is printed unless quiet."""
        result = invoke("sweep", "--format", "json", *SMALL_GRID)

        assert result.exit_code == 0
        assert "Sweep Summary" in result.output

    def test_invalid_range(self):
        """Test exit code 1 for a lower bound below the domain minimum."""
        result = invoke("-q", "sweep", "--a-range", "1", "3")
        assert result.exit_code == 1

    def test_guard_fail(self):
        """Test exit code 4 with --on-guard fail."""
        result = invoke("-q", "sweep", "--format", "json", "--max-bits", "10", "--on-guard", "fail", *SMALL_GRID)
        assert result.exit_code == 4

    def test_guard_skip(self):
        """Test that skipped points are counted, not fatal."""
        result = invoke("sweep", "--format", "json", "--max-bits", "10", *SMALL_GRID)

        assert result.exit_code == 0
        assert "Skipped (guard)" in result.output

    def test_mismatch_exit_code(self, monkeypatch):
        """Test exit code 2 and the offending tuple, kept out of the record stream."""
        monkeypatch.setattr("mersenne_divisibility.sweep.divides_criterion", lambda m, k, d: True)
        result = invoke("sweep", "--format", "json", *SMALL_GRID)

        assert result.exit_code == 2
        assert "Mismatch: (a, m, k, d) = (2, 1, 2, 2)" in result.output
        records = [json.loads(line) for line in result.output.splitlines() if line.startswith("{")]
        assert [(r["a"], r["m"], r["k"], r["d"]) for r in records] == [(2, 1, 1, 2), (2, 1, 1, 3), (2, 1, 1, 4)]
        assert all(r["criterion"] == r["oracle"] for r in records)


@pytest.mark.integration
class TestToolCommands:
    """Test the witness, valuation, order, poly, quotient and factor subcommands."""

    @pytest.mark.parametrize(
        "args, expected",
        [
            (("witness", "2", "4"), "p=5 ord=4"),
            (("witness", "2", "6"), "exceptional: base-2 n=6"),
            (("witness", "3", "2"), "exceptional: a+1 power of two"),
            (("valuation", "--imbalance", "2", "3", "3"), "q=3 p=7 num=1 den=2"),
            (("valuation", "2", "3", "3"), "q=3 p=7 num=1 den=2"),
            (("valuation", "--cofactor", "2", "2", "2"), "M=3 r1=2 r2=2"),
            (("valuation", "--cofactor", "5", "1", "4"), "M=1 r1=0 r2=0"),
            (("order", "2", "2", "3"), "ord=6 expected=6 OK"),
            (("order", "2", "3", "2"), "ord=6 expected=6 OK"),
            (("order", "3", "1", "2"), "ord=2 expected=2 OK"),
            (("poly", "2", "1", "3"), "divides; quotient = 1 - x + x^2"),
            (("poly", "2", "1", "2"), "does not divide"),
            (("poly", "3", "3", "5"), "divides; quotient = 1"),
            (("quotient", "2", "4", "2", "3"), "Q=13"),
            (("quotient", "2", "6", "2", "3"), "remainder=3 mod 21"),
            (("factor", "63"), "3^2 * 7"),
            (("factor", "1"), "1"),
        ],
    )
    def test_outputs(self, args, expected):
        """Test the documented outputs."""
        result = invoke(*args)

        assert result.exit_code == 0, result.output
        assert expected in result.output.splitlines()

    def test_quotient_lcm_form(self):
        """Test that the lcm form is cross-checked when the criterion holds."""
        result = invoke("quotient", "2", "4", "2", "3")
        assert "lcm form: agrees" in result.output

    def test_poly_residues(self):
        """Test that the residue line is printed when k | m."""
        result = invoke("poly", "6", "2", "3")

        assert result.exit_code == 0
        assert "does not divide" in result.output
        assert "residues mod M_3(x) for n=3: 3 | 3" in result.output

    def test_valuation_coprime(self):
        """Test exit code 1 for imbalance with coprime (n, d)."""
        result = invoke("valuation", "--imbalance", "2", "2", "3")
        assert result.exit_code == 1

    def test_poly_budget(self):
        """Test exit code 4 when the degree budget is exceeded."""
        result = invoke("poly", "200", "1", "200", "--max-degree", "100")
        assert result.exit_code == 4

    def test_order_guard(self):
        """Test exit code 4 when the order modulus is too large."""
        result = invoke("order", "2", "500", "500", "--max-bits", "1000")
        assert result.exit_code == 4

    def test_factor_budget(self):
        """Test exit code 4 for a cofactor the splitter cannot finish."""
        n = str((2 ** 61 - 1) * (2 ** 89 - 1))
        runner = CliRunner()
        with runner.isolated_filesystem():
            Path("mersenne-div.config.json").write_text(
                json.dumps({"factor": {"trial_bound": 2, "max_iterations": 1}})
            )
            result = runner.invoke(main, ["factor", n])
        assert result.exit_code == 4


@pytest.mark.integration
class TestInitCommand:
    """Test configuration initialization."""

    def test_init_json(self):
        """Test writing a default JSON configuration."""
        runner = CliRunner()
        with runner.isolated_filesystem():
            result = runner.invoke(main, ["init"])

            assert result.exit_code == 0
            data = json.loads(Path("mersenne-div.config.json").read_text())
            assert data["guard"]["max_bits"] == 1_000_000

    def test_init_toml_used_by_sweep(self):
        """Test that a written configuration is picked up by later commands."""
        runner = CliRunner()
        with runner.isolated_filesystem():
            assert runner.invoke(main, ["init", "--format", "toml"]).exit_code == 0
            config_path = Path("mersenne-div.config.toml")
            config_path.write_text(
                config_path.read_text().replace('format = "table"', 'format = "csv"')
            )

            result = runner.invoke(main, ["-q", "sweep", *SMALL_GRID])

        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "a,m,k,d,criterion,oracle,poly,elapsed_micros"

    def test_version(self):
        """Test the version option."""
        result = invoke("--version")

        assert result.exit_code == 0
        assert "mersenne-div" in result.output
