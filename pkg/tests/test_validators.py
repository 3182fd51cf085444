"""
Tests for side comparison, parameter screens, branch matching and the
report contract.
"""
import pytest
from pydantic import ValidationError

from core.algebra import BranchError, ConstraintError, CycloElem, const, param
from core.hypergeom import HypSpec
from core.schemas import CliConfig, IdentityCase, Mismatch, VerifyReport
from core.series import TruncSeries
from core.validators import (
    build_report,
    compare_series,
    format_report,
    match_branch,
    require_screened,
    screen_spec,
)


class TestCompareSeries:
    """Test first-mismatch detection."""

    def test_equal_sides(self):
        """Test identical series have no mismatch."""
        f = TruncSeries([1, 2, 3], "z")
        assert compare_series(f, TruncSeries([1, 2, 3], "z")) is None

    def test_first_difference(self):
        """Test the first differing order and its exact value."""
        mismatch = compare_series(TruncSeries([1, 2, 3], "z"), TruncSeries([1, 2, const(5, 2)], "z"))
        assert mismatch == Mismatch(order=2, value="1/2")

    def test_shared_order(self):
        """Test only the common truncation is compared."""
        assert compare_series(TruncSeries([1, 2], "z"), TruncSeries([1, 2, 9], "z")) is None
        assert compare_series(TruncSeries([1, 2, 3], "z"), TruncSeries([1, 2, 9], "z"), order=1) is None

    def test_variable_mismatch(self):
        """Test sides in different variables are refused."""
        with pytest.raises(ValueError):
            compare_series(TruncSeries([1], "z"), TruncSeries([1], "t"))


class TestReports:
    """Test report construction and its contract."""

    def test_build_report_pass(self, capsys):
        """Test a passing report and its verify metric."""
        f = TruncSeries([1, 1], "z")
        report = build_report("demo", "parametric", 1, f, f, ring="Q")

        assert report.passed
        assert report.first_mismatch is None
        assert '"event": "verify"' in capsys.readouterr().out

    def test_build_report_fail(self, capsys):
        """Test a failing report carries the mismatch and the metric its diff."""
        report = build_report("demo", "parametric", 1, TruncSeries([1, 1], "z"),
                              TruncSeries([1, 2], "z"), ring="Q")

        assert not report.passed
        assert report.first_mismatch.order == 1
        assert '"diff": "-1"' in capsys.readouterr().out

    def test_pass_with_mismatch_rejected(self):
        """Test pass = true cannot carry a mismatch."""
        with pytest.raises(ValidationError):
            VerifyReport(id="x", mode="parametric", order=2, passed=True,
                         first_mismatch=Mismatch(order=1, value="1"), ring="Q")

    def test_fail_without_mismatch_rejected(self):
        """Test pass = false needs its mismatch."""
        with pytest.raises(ValidationError):
            VerifyReport(id="x", mode="parametric", order=2, passed=False, ring="Q")

    def test_sampled_needs_samples(self):
        """Test sampled reports list their samples."""
        with pytest.raises(ValidationError):
            VerifyReport(id="x", mode="sampled", order=2, passed=True, ring="Q")

    def test_json_uses_pass_key(self):
        """Test the serialized report uses the `pass` key."""
        report = VerifyReport(id="x", mode="parametric", order=2, passed=True, ring="Q")
        payload = report.to_json_dict()

        assert payload["pass"] is True
        assert "passed" not in payload
        assert VerifyReport.model_validate(payload).passed

    def test_format_report(self):
        """Test the text summary lists params, mismatch and branches."""
        report = VerifyReport(
            id="thm73-a", mode="parametric", order=4, passed=False,
            first_mismatch=Mismatch(order=3, value="a/2"), ring="Q(a)",
            branch_choices=["prefactor^(1/2): +1"], params={"p": "1"},
        )
        text = format_report(report)

        assert text.splitlines()[0] == "thm73-a: FAIL (parametric, order 4, ring Q(a))"
        assert "params: p=1" in text
        assert "first mismatch at order 3: a/2" in text
        assert "branches: prefactor^(1/2): +1" in text

    def test_cli_config_strict(self):
        """Test CLI options validate strictly."""
        with pytest.raises(ValidationError):
            CliConfig(order=-1)
        with pytest.raises(ValidationError):
            CliConfig(fmt="yaml")

    def test_identity_case_free_names(self):
        """Test only known parameter names may be free."""
        with pytest.raises(ValidationError):
            IdentityCase(id="x", source="s", variable="z", ring="Q", family="f", free=["z"])


class TestScreens:
    """Test numeric parameter screening."""

    def test_clean_spec(self):
        """Test a generic parameter list passes."""
        spec = HypSpec(upper=[const(1, 5), const(2, 5)], lower=[const(1, 3)])
        assert screen_spec(spec) == []

    def test_problems_listed(self):
        """Test a forbidden lower parameter and a reducible pair are both reported."""
        spec = HypSpec(upper=[const(3, 2), const(1, 5)], lower=[const(1, 2), const(-1)])
        problems = screen_spec(spec)

        assert any("non-positive integer" in p for p in problems)
        assert any("differ by an integer" in p for p in problems)

    def test_require_screened(self):
        """Test the first problem raises ConstraintError with context."""
        spec = HypSpec(upper=[const(1, 3)], lower=[const(0)])
        with pytest.raises(ConstraintError, match="thm46-i"):
            require_screened([spec], "thm46-i")

    def test_contiguous_pair_exempt(self):
        """Test the trailing x, x+1 pair of an interpolating spec is not a clash."""
        upper = [const(1, 5), const(19, 35)]
        lower = [const(1, 3), const(54, 35)]
        assert screen_spec(HypSpec(upper=upper, lower=lower)) != []
        assert screen_spec(HypSpec(upper=upper, lower=lower, contiguous=True)) == []

    def test_contiguous_pair_still_lower_screened(self):
        """Test the trailing lower is still refused at a non-positive integer."""
        spec = HypSpec(upper=[const(1, 5), const(-3)], lower=[const(1, 3), const(-2)],
                       contiguous=True)
        assert any("non-positive integer" in p for p in screen_spec(spec))

    def test_rest_of_contiguous_spec_screened(self):
        """Test pairs outside the exempt one are still checked."""
        spec = HypSpec(upper=[const(4, 3), const(2, 7)], lower=[const(1, 3), const(9, 7)],
                       contiguous=True)
        assert any("differ by an integer" in p for p in screen_spec(spec))

    def test_symbolic_spec_passes(self):
        """Test symbolic parameters are left alone."""
        a = param("a")
        require_screened([HypSpec(upper=[a, a / 2], lower=[2 * a + const(1, 3)])], "demo")


class TestBranchMatching:
    """Test root-of-unity branch selection."""

    def test_sign_choice(self):
        """Test -1 is chosen when the leading coefficients differ in sign."""
        lhs = TruncSeries([0, -2, 1], "t")
        rhs = TruncSeries([0, 2, 5], "t")
        assert match_branch(lhs, rhs, [("+1", 1), ("-1", -1)]) == ("-1", -1)

    def test_cube_root_choice(self):
        """Test a primitive cube root of unity is selected."""
        w = CycloElem.root(3, 1)
        lhs = TruncSeries([w * 3], "t")
        rhs = TruncSeries([CycloElem.scalar(3, 3)], "t")
        candidates = [("w3^0", 1), ("w3^1", w), ("w3^2", w ** 2)]
        assert match_branch(lhs, rhs, candidates)[0] == "w3^1"

    def test_no_branch(self):
        """Test no matching candidate raises BranchError."""
        with pytest.raises(BranchError):
            match_branch(TruncSeries([2], "t"), TruncSeries([3], "t"), [("+1", 1), ("-1", -1)])

    def test_zero_lhs(self):
        """Test an identically zero side keeps the first candidate."""
        assert match_branch(TruncSeries([0, 0], "t"), TruncSeries([1, 1], "t"),
                            [("+1", 1), ("-1", -1)]) == ("+1", 1)
